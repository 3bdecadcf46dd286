#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "glcn/linear_solver.hpp"
#include "glcn/model.hpp"
#include "glcn/newton.hpp"
#include "glcn/sipg.hpp"

namespace glcn {

struct StepConfig {
  double tau = 0.01;
  double newton_tol = 1e-11;
  int newton_max_iter = 50;
  bool fixed_point_fallback = true;
  int fixed_point_max_iter = 200;
  LinearSolverConfig linear;

  void validate() const;
};

/// Non-empty when tau * gamma >= 2, where existence of a step solution is
/// no longer guaranteed.
std::optional<std::string> solvability_warning(const GLParams& params,
                                               double tau);

struct StepReport {
  int level = 0;  // n of u^n
  double t = 0.0;
  int newton_iterations = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  double reference = 0.0;
  std::vector<double> residual_history;
  int linear_iterations = 0;
  bool used_fallback = false;
  double seconds = 0.0;
};

/// A step that failed, tagged with the level n being computed.
class StepFailed : public Error {
 public:
  StepFailed(int level, const std::string& what)
      : Error("step to level " + std::to_string(level) + " failed: " + what),
        level_(level) {}
  int level() const { return level_; }

 private:
  int level_;
};

/// Interleaved real packing: x[2i] = Re z_i, x[2i+1] = Im z_i.
Eigen::VectorXd pack(const Eigen::VectorXcd& z);
Eigen::VectorXcd unpack(const Eigen::VectorXd& x);

/// Fully implicit Crank-Nicolson step. Each step solves for the average
/// w = (u^n + u^{n-1}) / 2:
///   (2/tau)(w - u^{n-1}, v) + (nu + i alpha) a_h(w, v)
///     + (kappa + i beta)(|w|^2 w, v) - gamma (w, v) = (f(t_{n-1/2}), v)
/// and returns u^n = 2w - u^{n-1}.
class CrankNicolsonStepper {
 public:
  CrankNicolsonStepper(std::shared_ptr<const DGSpace> space,
                       SparseOperator stiffness, SparseOperator mass,
                       ManufacturedCase model, StepConfig cfg);
  CrankNicolsonStepper(std::shared_ptr<const DGSpace> space,
                       const SipgConfig& sipg, ManufacturedCase model,
                       StepConfig cfg);
  ~CrankNicolsonStepper();
  CrankNicolsonStepper(CrankNicolsonStepper&&) noexcept;
  CrankNicolsonStepper& operator=(CrankNicolsonStepper&&) noexcept;

  const DGSpace& space() const { return *space_; }
  const SparseOperator& stiffness() const { return stiffness_; }
  const SparseOperator& mass() const { return mass_; }
  const ManufacturedCase& model() const { return model_; }
  const StepConfig& config() const { return cfg_; }
  const std::optional<std::string>& warning() const { return warning_; }

  /// Load vector (f(t_prev + tau/2), phi_i).
  Eigen::VectorXcd load(double t_prev) const;

  /// Residual of the average-solution system at w.
  Eigen::VectorXcd residual(const Eigen::VectorXcd& w,
                            const Eigen::VectorXcd& u_prev,
                            const Eigen::VectorXcd& load) const;

  /// Real 2N x 2N Jacobian of the packed residual at w:
  /// (2/tau - gamma) M2 + nu A2 + alpha J A2 + kappa B(w) + beta J B(w).
  const SparseMatrix& jacobian(const Eigen::VectorXcd& w);

  /// Advances u_prev at t_prev by one step; `level` is n of the result.
  std::pair<ComplexField, StepReport> step(const ComplexField& u_prev,
                                           double t_prev, int level = 1);

 private:
  struct Solvers;

  void build_linear_part();
  NewtonResult solve_newton(const Eigen::VectorXcd& u_prev,
                            const Eigen::VectorXcd& f, double reference);
  Eigen::VectorXcd solve_fixed_point(const Eigen::VectorXcd& u_prev,
                                     const Eigen::VectorXcd& f,
                                     double reference, StepReport& report);

  std::shared_ptr<const DGSpace> space_;
  SparseOperator stiffness_;
  SparseOperator mass_;
  ManufacturedCase model_;
  StepConfig cfg_;
  std::optional<std::string> warning_;

  SparseMatrix linear_real_;       // constant part of the Jacobian
  SparseMatrix jacobian_;          // same pattern, refreshed per iteration
  std::vector<int> block_offsets_; // value index of each element-block entry
  std::unique_ptr<Solvers> solvers_;
};

std::pair<ComplexField, StepReport> cn_step(
    std::shared_ptr<const DGSpace> space, const SparseOperator& stiffness,
    const SparseOperator& mass, const ManufacturedCase& model,
    const ComplexField& u_prev, double t_prev, const StepConfig& cfg);

/// N with N * tau = T; throws when T / tau is not a positive integer.
int steps_for(double t_final, double tau);

using Observer = std::function<void(int n, double t, const ComplexField& u)>;

struct RunOptions {
  bool keep_trajectory = false;
  std::vector<Observer> observers;
  std::function<void(const StepReport&)> on_report;
};

struct RunResult {
  ComplexField initial;
  ComplexField final;
  std::vector<ComplexField> trajectory;  // u^0..u^N when kept
  std::vector<StepReport> reports;
  double t_final = 0.0;
  int steps = 0;
};

/// u^0 = R_h u(., 0), then N = T / tau steps with T = model.params.t_final.
RunResult run(std::shared_ptr<const DGSpace> space, const SipgConfig& sipg,
              const ManufacturedCase& model, const StepConfig& cfg,
              const RunOptions& options = {});

/// Same, from a given initial field.
RunResult run_from(CrankNicolsonStepper& stepper, ComplexField initial,
                   const RunOptions& options = {});

}  // namespace glcn
