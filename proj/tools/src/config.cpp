#include "glcn_cli/config.hpp"

#include <cmath>
#include <initializer_list>

#include <json.hpp>

#include "glcn/error.hpp"

namespace glcn::cli {

namespace {

using json = nlohmann::json;

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j[key].is_null()) out = j[key].get<T>();
}

template <typename T>
void write_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

void check_finite(const std::optional<double>& v, const char* name) {
  if (v && !std::isfinite(*v)) {
    throw InvalidArgument(std::string(name) + " must be finite");
  }
}

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

void Config::validate() const {
  if (cells && h) throw InvalidArgument("give only one of --n and --h");
  if (tau && steps) throw InvalidArgument("give only one of --tau and --steps");
  for (const auto& [v, name] :
       {std::pair{h, "h"}, {tau, "tau"}, {t_final, "t-final"}, {penalty, "lambda"},
        {overrides.nu, "nu"}, {overrides.alpha, "alpha"}, {overrides.kappa, "kappa"},
        {overrides.beta, "beta"}, {overrides.gamma, "gamma"}}) {
    check_finite(v, name);
  }
  if (degree < 1) throw InvalidArgument("k must be >= 1");
  if (cells && *cells < 1) throw InvalidArgument("n must be >= 1");
  if (h && !(*h > 0.0)) throw InvalidArgument("h must be positive");
  if (tau && !(*tau > 0.0)) throw InvalidArgument("tau must be positive");
  if (steps && *steps < 1) throw InvalidArgument("steps must be >= 1");
  if (t_final && !(*t_final > 0.0)) throw InvalidArgument("t-final must be positive");
  if (penalty && !(*penalty > 0.0)) throw InvalidArgument("lambda must be positive");
  if (snapshot_every < 0) throw InvalidArgument("snapshot-every must be >= 0");
  if (threads < 0) throw InvalidArgument("threads must be >= 0");
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  StepConfig probe = solver;
  probe.tau = 1.0;
  probe.validate();
  if (matrix && *matrix != "stiffness" && *matrix != "mass" && *matrix != "dg") {
    throw InvalidArgument("matrix must be stiffness, mass or dg");
  }
}

double Config::effective_penalty() const {
  return penalty.value_or(default_penalty(degree));
}

Config config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& err) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + err.what());
  }
  expect_keys(j, {"case", "k", "n", "h", "tau", "steps", "t_final", "lambda", "params",
                 "homogeneous", "solver", "output", "plan", "record_timing", "samples", "seed",
                 "matrix"},
              "config");
  Config cfg;
  try {
    read_optional(j, "case", cfg.case_name);
    cfg.degree = j.value("k", cfg.degree);
    read_optional(j, "n", cfg.cells);
    read_optional(j, "h", cfg.h);
    read_optional(j, "tau", cfg.tau);
    read_optional(j, "steps", cfg.steps);
    read_optional(j, "t_final", cfg.t_final);
    read_optional(j, "lambda", cfg.penalty);
    if (j.contains("params")) {
      const json& p = j["params"];
      expect_keys(p, {"nu", "alpha", "kappa", "beta", "gamma"}, "params");
      read_optional(p, "nu", cfg.overrides.nu);
      read_optional(p, "alpha", cfg.overrides.alpha);
      read_optional(p, "kappa", cfg.overrides.kappa);
      read_optional(p, "beta", cfg.overrides.beta);
      read_optional(p, "gamma", cfg.overrides.gamma);
    }
    cfg.homogeneous = j.value("homogeneous", false);
    if (j.contains("solver")) {
      const json& s = j["solver"];
      expect_keys(s,
                  {"newton_tol", "newton_max_iter", "fixed_point_fallback", "linear_solver",
                   "linear_tol", "linear_max_iter"},
                  "solver");
      StepConfig& sc = cfg.solver;
      sc.newton_tol = s.value("newton_tol", sc.newton_tol);
      sc.newton_max_iter = s.value("newton_max_iter", sc.newton_max_iter);
      sc.fixed_point_fallback = s.value("fixed_point_fallback", sc.fixed_point_fallback);
      sc.linear.kind = linear_solver_kind_from_string(
          s.value("linear_solver", to_string(sc.linear.kind)));
      sc.linear.tolerance = s.value("linear_tol", sc.linear.tolerance);
      sc.linear.max_iterations = s.value("linear_max_iter", sc.linear.max_iterations);
    }
    if (j.contains("output")) {
      const json& o = j["output"];
      expect_keys(o, {"dir", "snapshot_every"}, "output");
      read_optional(o, "dir", cfg.out_dir);
      cfg.snapshot_every = o.value("snapshot_every", 0);
    }
    read_optional(j, "plan", cfg.plan);
    cfg.record_timing = j.value("record_timing", false);
    cfg.samples = j.value("samples", cfg.samples);
    cfg.seed = j.value("seed", cfg.seed);
    read_optional(j, "matrix", cfg.matrix);
  } catch (const json::exception& err) {
    throw InvalidArgument(std::string("bad config field: ") + err.what());
  }
  cfg.validate();
  return cfg;
}

std::string config_to_json(const Config& cfg) {
  json j;
  write_optional(j, "case", cfg.case_name);
  j["k"] = cfg.degree;
  write_optional(j, "n", cfg.cells);
  write_optional(j, "h", cfg.h);
  write_optional(j, "tau", cfg.tau);
  write_optional(j, "steps", cfg.steps);
  write_optional(j, "t_final", cfg.t_final);
  write_optional(j, "lambda", cfg.penalty);
  if (!cfg.overrides.empty()) {
    json p = json::object();
    write_optional(p, "nu", cfg.overrides.nu);
    write_optional(p, "alpha", cfg.overrides.alpha);
    write_optional(p, "kappa", cfg.overrides.kappa);
    write_optional(p, "beta", cfg.overrides.beta);
    write_optional(p, "gamma", cfg.overrides.gamma);
    j["params"] = p;
  }
  j["homogeneous"] = cfg.homogeneous;
  const StepConfig& sc = cfg.solver;
  j["solver"] = {{"newton_tol", sc.newton_tol},
                 {"newton_max_iter", sc.newton_max_iter},
                 {"fixed_point_fallback", sc.fixed_point_fallback},
                 {"linear_solver", to_string(sc.linear.kind)},
                 {"linear_tol", sc.linear.tolerance},
                 {"linear_max_iter", sc.linear.max_iterations}};
  json out = json::object();
  write_optional(out, "dir", cfg.out_dir);
  if (cfg.snapshot_every > 0) out["snapshot_every"] = cfg.snapshot_every;
  if (!out.empty()) j["output"] = out;
  write_optional(j, "plan", cfg.plan);
  j["record_timing"] = cfg.record_timing;
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  write_optional(j, "matrix", cfg.matrix);
  return j.dump(2) + "\n";
}

int resolve_cells(const Config& cfg, const Rect& domain) {
  if (cfg.cells) return *cfg.cells;
  if (!cfg.h) throw InvalidArgument("one of --n and --h is required");
  const double n = domain.width() / *cfg.h;
  const double rounded = std::round(n);
  if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * rounded) {
    throw InvalidArgument("h must divide the domain width into whole cells");
  }
  return static_cast<int>(rounded);
}

TimeGrid resolve_time(const Config& cfg, double default_t_final) {
  TimeGrid grid;
  grid.t_final = cfg.t_final.value_or(default_t_final);
  if (cfg.steps) {
    grid.steps = *cfg.steps;
  } else if (cfg.tau) {
    grid.steps = steps_for(grid.t_final, *cfg.tau);
  } else {
    throw InvalidArgument("one of --tau and --steps is required");
  }
  grid.tau = grid.t_final / grid.steps;
  return grid;
}

ManufacturedCase resolve_model(const Config& cfg) {
  if (!cfg.case_name) throw InvalidArgument("--case is required");
  ManufacturedCase model = find_case(*cfg.case_name);
  cfg.overrides.apply(model.params);
  if (cfg.t_final) model.params.t_final = *cfg.t_final;
  model.homogeneous = cfg.homogeneous;
  model.params.validate();
  return model;
}

}  // namespace glcn::cli
