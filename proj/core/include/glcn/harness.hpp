#pragma once

#include <optional>
#include <string>
#include <vector>

#include "glcn/model.hpp"
#include "glcn/stepper.hpp"

namespace glcn {

enum class StudyMode { spatial, temporal };

/// How (n, N) pairs are derived for each grid point.
///   fixed_steps:  n from `cells`, N = `steps_fixed` for every point.
///   tau_equals_h: n from `cells`, tau = h (cell size), N = T / h.
///   fixed_h:      n = `cells_fixed`, N from `steps`.
enum class Coupling { fixed_steps, tau_equals_h, fixed_h };

std::string to_string(StudyMode mode);
std::string to_string(Coupling coupling);
StudyMode study_mode_from_string(const std::string& s);
Coupling coupling_from_string(const std::string& s);

struct StudyPlan {
  std::string case_name = "example1";
  StudyMode mode = StudyMode::spatial;
  Coupling coupling = Coupling::fixed_steps;
  int degree = 1;
  double t_final = 2e-6;
  std::vector<int> cells;
  std::vector<int> steps;
  int cells_fixed = 0;
  int steps_fixed = 0;
  std::optional<double> penalty;  // default 10 (k + 1)^2
  ParamOverrides overrides;
  StepConfig solver;
  std::string note;

  double effective_penalty() const;
  void validate() const;
};

struct GridPoint {
  int cells = 0;
  int steps = 0;
  double param = 0.0;  // h for spatial studies, tau for temporal ones
  std::string label;   // "1/5", "2/10", ...
};

std::vector<GridPoint> grid_points(const StudyPlan& plan);

struct ReportRow {
  GridPoint point;
  double l2_error = 0.0;
  std::optional<double> l2_order;
  double dg_error = 0.0;
  std::optional<double> dg_order;
  int newton_total = 0;
  std::optional<double> seconds;
};

struct ConvergenceReport {
  std::string case_name;
  StudyMode mode = StudyMode::spatial;
  Coupling coupling = Coupling::fixed_steps;
  int degree = 1;
  double t_final = 0.0;
  double penalty = 0.0;
  std::string note;
  std::vector<ReportRow> rows;
};

/// log(e_prev / e) / log(m_prev / m).
double observed_order(double error_prev, double error, double param_prev,
                      double param);

/// Recomputes the order columns from consecutive rows.
void fill_orders(ConvergenceReport& report);

struct StudyOptions {
  /// Grid points run concurrently on up to this many threads; 0 or 1 runs
  /// them sequentially.
  int threads = 0;
  bool record_timing = false;
};

/// A failure annotated with the grid point that produced it.
class StudyFailed : public Error {
 public:
  StudyFailed(const GridPoint& point, const std::string& what)
      : Error("grid point n=" + std::to_string(point.cells) +
              " N=" + std::to_string(point.steps) + ": " + what),
        point_(point) {}
  const GridPoint& point() const { return point_; }

 private:
  GridPoint point_;
};

ManufacturedCase resolve_case(const StudyPlan& plan);

ConvergenceReport run_study(const StudyPlan& plan, const StudyOptions& options = {});

/// Errors of a single run at its final time.
struct RunErrors {
  double l2 = 0.0;
  double dg = 0.0;
  int newton_total = 0;
  double seconds = 0.0;
};

RunErrors run_point(const StudyPlan& plan, const GridPoint& point);

/// xi = u - R_h u and eta = R_h u - u_h at time t.
struct ErrorSplit {
  double xi_l2 = 0.0;
  double eta_l2 = 0.0;
  double eta_dg = 0.0;
};

ErrorSplit error_split(std::shared_ptr<const DGSpace> space,
                       const SipgConfig& cfg, const ManufacturedCase& model,
                       double t, const ComplexField& u_h);

enum class ReportFormat { csv, markdown, json };

/// csv: param,l2_error,l2_order,dg_error,dg_order,newton_total,seconds
std::string render(const ConvergenceReport& report, ReportFormat format);

StudyPlan plan_from_json_text(const std::string& text);
std::string plan_to_json_text(const StudyPlan& plan);

}  // namespace glcn
