#include "glcn/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "glcn/error.hpp"
#include "glcn/norms.hpp"

namespace glcn {

namespace {

using json = nlohmann::json;

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

// "1/5", "2/10", "0.5/3".
std::string fraction_label(double numerator, int denominator) {
  const double rounded = std::round(numerator);
  const std::string num = std::abs(numerator - rounded) < 1e-12
                              ? std::to_string(static_cast<long long>(rounded))
                              : format("%g", numerator);
  return num + "/" + std::to_string(denominator);
}

bool strictly_monotone(const std::vector<int>& v) {
  bool up = true;
  bool down = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    up = up && v[i] > v[i - 1];
    down = down && v[i] < v[i - 1];
  }
  return up || down;
}

void check_list(const std::vector<int>& values, const char* name) {
  if (values.size() < 2) {
    throw InvalidArgument(std::string("orders need >= 2 grid points (") + name +
                          ")");
  }
  if (!strictly_monotone(values)) {
    throw InvalidArgument(std::string(name) + " must be strictly monotone");
  }
  for (int v : values) {
    if (v < 1) throw InvalidArgument(std::string(name) + " entries must be >= 1");
  }
}

}  // namespace

std::string to_string(StudyMode mode) {
  return mode == StudyMode::spatial ? "spatial" : "temporal";
}

std::string to_string(Coupling coupling) {
  switch (coupling) {
    case Coupling::fixed_steps: return "fixed_steps";
    case Coupling::tau_equals_h: return "tau_equals_h";
    case Coupling::fixed_h: return "fixed_h";
  }
  return "fixed_steps";
}

StudyMode study_mode_from_string(const std::string& s) {
  if (s == "spatial") return StudyMode::spatial;
  if (s == "temporal") return StudyMode::temporal;
  throw InvalidArgument("unknown study mode '" + s + "'");
}

Coupling coupling_from_string(const std::string& s) {
  if (s == "fixed_steps") return Coupling::fixed_steps;
  if (s == "tau_equals_h") return Coupling::tau_equals_h;
  if (s == "fixed_h") return Coupling::fixed_h;
  throw InvalidArgument("unknown coupling '" + s + "'");
}

double StudyPlan::effective_penalty() const {
  return penalty.value_or(default_penalty(degree));
}

void StudyPlan::validate() const {
  if (degree < 1) throw InvalidArgument("k must be >= 1");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) {
    throw InvalidArgument("t_final must be positive and finite");
  }
  switch (coupling) {
    case Coupling::fixed_steps:
      check_list(cells, "cells");
      if (steps_fixed < 1) throw InvalidArgument("steps_fixed must be >= 1");
      break;
    case Coupling::tau_equals_h:
      check_list(cells, "cells");
      break;
    case Coupling::fixed_h:
      check_list(steps, "steps");
      if (cells_fixed < 1) throw InvalidArgument("cells_fixed must be >= 1");
      break;
  }
  SipgConfig{effective_penalty(), degree}.validate();
  StepConfig probe = solver;
  probe.tau = 1.0;
  probe.validate();
  (void)find_case(case_name);
}

std::vector<GridPoint> grid_points(const StudyPlan& plan) {
  plan.validate();
  const ManufacturedCase model = find_case(plan.case_name);
  const double width = model.domain.width();
  std::vector<GridPoint> points;
  auto add = [&](int n, int steps) {
    GridPoint p;
    p.cells = n;
    p.steps = steps;
    if (plan.mode == StudyMode::spatial) {
      p.param = width / n;
      p.label = fraction_label(width, n);
    } else {
      p.param = plan.t_final / steps;
      p.label = fraction_label(plan.t_final, steps);
    }
    points.push_back(p);
  };
  switch (plan.coupling) {
    case Coupling::fixed_steps:
      for (int n : plan.cells) add(n, plan.steps_fixed);
      break;
    case Coupling::tau_equals_h:
      for (int n : plan.cells) add(n, steps_for(plan.t_final, width / n));
      break;
    case Coupling::fixed_h:
      for (int s : plan.steps) add(plan.cells_fixed, s);
      break;
  }
  return points;
}

double observed_order(double error_prev, double error, double param_prev,
                      double param) {
  return std::log(error_prev / error) / std::log(param_prev / param);
}

void fill_orders(ConvergenceReport& report) {
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    ReportRow& row = report.rows[i];
    if (i == 0) {
      row.l2_order.reset();
      row.dg_order.reset();
      continue;
    }
    const ReportRow& prev = report.rows[i - 1];
    row.l2_order = observed_order(prev.l2_error, row.l2_error, prev.point.param,
                                  row.point.param);
    row.dg_order = observed_order(prev.dg_error, row.dg_error, prev.point.param,
                                  row.point.param);
  }
}

ManufacturedCase resolve_case(const StudyPlan& plan) {
  ManufacturedCase model = find_case(plan.case_name);
  plan.overrides.apply(model.params);
  model.params.t_final = plan.t_final;
  return model;
}

RunErrors run_point(const StudyPlan& plan, const GridPoint& point) {
  const auto start = std::chrono::steady_clock::now();
  const ManufacturedCase model = resolve_case(plan);
  auto mesh = std::make_shared<const Mesh>(build_structured(model.domain, point.cells));
  auto space = std::make_shared<const DGSpace>(mesh, plan.degree);
  StepConfig cfg = plan.solver;
  cfg.tau = plan.t_final / point.steps;
  const RunResult result =
      run(space, SipgConfig{plan.effective_penalty(), plan.degree}, model, cfg);

  RunErrors errors;
  errors.l2 = l2_error(result.final, model.u_at(result.t_final));
  errors.dg = dg_error(result.final, model.u_at(result.t_final),
                       model.gradient_at(result.t_final));
  for (const StepReport& r : result.reports) errors.newton_total += r.newton_iterations;
  errors.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return errors;
}

ConvergenceReport run_study(const StudyPlan& plan, const StudyOptions& options) {
  const std::vector<GridPoint> points = grid_points(plan);
  ConvergenceReport report;
  report.case_name = plan.case_name;
  report.mode = plan.mode;
  report.coupling = plan.coupling;
  report.degree = plan.degree;
  report.t_final = plan.t_final;
  report.penalty = plan.effective_penalty();
  report.note = plan.note;

  auto guarded = [&plan](const GridPoint& p) {
    try {
      return run_point(plan, p);
    } catch (const StudyFailed&) {
      throw;
    } catch (const std::exception& err) {
      throw StudyFailed(p, err.what());
    }
  };

  std::vector<RunErrors> results(points.size());
  if (options.threads > 1) {
    // Bounded batches; results land in plan order.
    const std::size_t width = static_cast<std::size_t>(options.threads);
    for (std::size_t begin = 0; begin < points.size(); begin += width) {
      std::vector<std::future<RunErrors>> batch;
      const std::size_t end = std::min(points.size(), begin + width);
      for (std::size_t i = begin; i < end; ++i) {
        batch.push_back(std::async(std::launch::async, guarded, points[i]));
      }
      for (std::size_t i = begin; i < end; ++i) results[i] = batch[i - begin].get();
    }
  } else {
    for (std::size_t i = 0; i < points.size(); ++i) results[i] = guarded(points[i]);
  }

  for (std::size_t i = 0; i < points.size(); ++i) {
    ReportRow row;
    row.point = points[i];
    row.l2_error = results[i].l2;
    row.dg_error = results[i].dg;
    row.newton_total = results[i].newton_total;
    if (options.record_timing) row.seconds = results[i].seconds;
    report.rows.push_back(row);
  }
  fill_orders(report);
  return report;
}

ErrorSplit error_split(std::shared_ptr<const DGSpace> space,
                       const SipgConfig& cfg, const ManufacturedCase& model,
                       double t, const ComplexField& u_h) {
  const RitzProjector projector(space, cfg);
  const ComplexField ritz = projector.project(model.laplacian_at(t));
  ErrorSplit split;
  split.xi_l2 = l2_error(ritz, model.u_at(t));
  const ComplexField eta(space, ritz.coeffs() - u_h.coeffs());
  split.eta_l2 = l2_norm(eta);
  split.eta_dg = dg_norm(eta);
  return split;
}

std::string render(const ConvergenceReport& report, ReportFormat fmt) {
  std::ostringstream os;
  switch (fmt) {
    case ReportFormat::csv: {
      os << "param,l2_error,l2_order,dg_error,dg_order,newton_total,seconds\n";
      for (const ReportRow& r : report.rows) {
        os << format("%.10g", r.point.param) << ',' << format("%.10e", r.l2_error)
           << ',' << (r.l2_order ? format("%.6f", *r.l2_order) : "") << ','
           << format("%.10e", r.dg_error) << ','
           << (r.dg_order ? format("%.6f", *r.dg_order) : "") << ','
           << r.newton_total << ','
           << (r.seconds ? format("%.3f", *r.seconds) : "") << '\n';
      }
      break;
    }
    case ReportFormat::markdown: {
      const char* param = report.mode == StudyMode::spatial ? "h" : "tau";
      os << "| " << param
         << " | ||u^N-u_h^N|| | Order | ||u^N-u_h^N||_DG | Order |\n";
      os << "|---|---|---|---|---|\n";
      for (const ReportRow& r : report.rows) {
        os << "| " << r.point.label << " | " << format("%.4e", r.l2_error)
           << " | " << (r.l2_order ? format("%.4f", *r.l2_order) : "--") << " | "
           << format("%.4e", r.dg_error) << " | "
           << (r.dg_order ? format("%.4f", *r.dg_order) : "--") << " |\n";
      }
      break;
    }
    case ReportFormat::json: {
      json j;
      j["case"] = report.case_name;
      j["mode"] = to_string(report.mode);
      j["coupling"] = to_string(report.coupling);
      j["k"] = report.degree;
      j["t_final"] = report.t_final;
      j["lambda"] = report.penalty;
      if (!report.note.empty()) j["note"] = report.note;
      j["rows"] = json::array();
      for (const ReportRow& r : report.rows) {
        json row;
        row["label"] = r.point.label;
        row["param"] = r.point.param;
        row["cells"] = r.point.cells;
        row["steps"] = r.point.steps;
        row["l2_error"] = r.l2_error;
        row["l2_order"] = r.l2_order ? json(*r.l2_order) : json(nullptr);
        row["dg_error"] = r.dg_error;
        row["dg_order"] = r.dg_order ? json(*r.dg_order) : json(nullptr);
        row["newton_total"] = r.newton_total;
        row["seconds"] = r.seconds ? json(*r.seconds) : json(nullptr);
        j["rows"].push_back(row);
      }
      os << j.dump(2) << '\n';
      break;
    }
  }
  return os.str();
}

namespace {

// Rejects keys outside `allowed` so typos do not fall back to defaults.
void expect_keys(const json& j, std::initializer_list<const char*> allowed,
                 const std::string& where) {
  if (!j.is_object()) throw InvalidArgument(where + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) throw InvalidArgument("unknown key '" + item.key() + "' in " + where);
  }
}

}  // namespace

StudyPlan plan_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& err) {
    throw InvalidArgument(std::string("plan is not valid JSON: ") + err.what());
  }
  expect_keys(j, {"case", "mode", "coupling", "k", "t_final", "cells", "steps", "cells_fixed",
                 "steps_fixed", "lambda", "params", "solver", "note"},
              "plan");
  StudyPlan plan;
  try {
    plan.case_name = j.at("case").get<std::string>();
    plan.mode = study_mode_from_string(j.value("mode", "spatial"));
    plan.coupling = coupling_from_string(j.value("coupling", "fixed_steps"));
    plan.degree = j.at("k").get<int>();
    plan.t_final = j.at("t_final").get<double>();
    plan.cells = j.value("cells", std::vector<int>{});
    plan.steps = j.value("steps", std::vector<int>{});
    plan.cells_fixed = j.value("cells_fixed", 0);
    plan.steps_fixed = j.value("steps_fixed", 0);
    if (j.contains("lambda") && !j["lambda"].is_null()) {
      plan.penalty = j["lambda"].get<double>();
    }
    if (j.contains("params")) {
      const json& p = j["params"];
      expect_keys(p, {"nu", "alpha", "kappa", "beta", "gamma"}, "params");
      auto opt = [&p](const char* key) -> std::optional<double> {
        if (p.contains(key) && !p[key].is_null()) return p[key].get<double>();
        return std::nullopt;
      };
      plan.overrides = {opt("nu"), opt("alpha"), opt("kappa"), opt("beta"),
                        opt("gamma")};
    }
    if (j.contains("solver")) {
      const json& s = j["solver"];
      expect_keys(s,
                  {"newton_tol", "newton_max_iter", "fixed_point_fallback", "linear_solver",
                   "linear_tol", "linear_max_iter"},
                  "solver");
      plan.solver.newton_tol = s.value("newton_tol", plan.solver.newton_tol);
      plan.solver.newton_max_iter =
          s.value("newton_max_iter", plan.solver.newton_max_iter);
      plan.solver.fixed_point_fallback =
          s.value("fixed_point_fallback", plan.solver.fixed_point_fallback);
      plan.solver.linear.kind = linear_solver_kind_from_string(
          s.value("linear_solver", to_string(plan.solver.linear.kind)));
      plan.solver.linear.tolerance =
          s.value("linear_tol", plan.solver.linear.tolerance);
      plan.solver.linear.max_iterations =
          s.value("linear_max_iter", plan.solver.linear.max_iterations);
    }
    plan.note = j.value("note", std::string{});
  } catch (const json::exception& err) {
    throw InvalidArgument(std::string("bad plan field: ") + err.what());
  }
  plan.validate();
  return plan;
}

std::string plan_to_json_text(const StudyPlan& plan) {
  json j;
  j["case"] = plan.case_name;
  j["mode"] = to_string(plan.mode);
  j["coupling"] = to_string(plan.coupling);
  j["k"] = plan.degree;
  j["t_final"] = plan.t_final;
  if (!plan.cells.empty()) j["cells"] = plan.cells;
  if (!plan.steps.empty()) j["steps"] = plan.steps;
  if (plan.cells_fixed > 0) j["cells_fixed"] = plan.cells_fixed;
  if (plan.steps_fixed > 0) j["steps_fixed"] = plan.steps_fixed;
  if (plan.penalty) j["lambda"] = *plan.penalty;
  if (!plan.overrides.empty()) {
    json p = json::object();
    if (plan.overrides.nu) p["nu"] = *plan.overrides.nu;
    if (plan.overrides.alpha) p["alpha"] = *plan.overrides.alpha;
    if (plan.overrides.kappa) p["kappa"] = *plan.overrides.kappa;
    if (plan.overrides.beta) p["beta"] = *plan.overrides.beta;
    if (plan.overrides.gamma) p["gamma"] = *plan.overrides.gamma;
    j["params"] = p;
  }
  j["solver"] = {{"newton_tol", plan.solver.newton_tol},
                 {"newton_max_iter", plan.solver.newton_max_iter},
                 {"fixed_point_fallback", plan.solver.fixed_point_fallback},
                 {"linear_solver", to_string(plan.solver.linear.kind)},
                 {"linear_tol", plan.solver.linear.tolerance},
                 {"linear_max_iter", plan.solver.linear.max_iterations}};
  if (!plan.note.empty()) j["note"] = plan.note;
  return j.dump(2) + "\n";
}

}  // namespace glcn
