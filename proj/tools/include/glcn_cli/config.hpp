#pragma once

#include <optional>
#include <string>

#include "glcn/harness.hpp"

namespace glcn::cli {

/// Settings shared by all subcommands. Read from a JSON file, then
/// overridden by whatever flags were given on the command line.
struct Config {
  std::optional<std::string> case_name;
  int degree = 1;
  std::optional<int> cells;
  std::optional<double> h;
  std::optional<double> tau;
  std::optional<int> steps;
  std::optional<double> t_final;
  std::optional<double> penalty;
  ParamOverrides overrides;
  bool homogeneous = false;
  StepConfig solver;

  std::optional<std::string> out_dir;
  int snapshot_every = 0;
  std::optional<std::string> plan;
  int threads = 0;
  bool record_timing = false;

  // verify
  int samples = 5;
  unsigned long long seed = 1;

  // dump-mesh
  std::optional<std::string> matrix;

  /// Finite numbers, positive sizes, at most one of n/h and of tau/N.
  void validate() const;

  double effective_penalty() const;
};

Config config_from_json(const std::string& text);
std::string config_to_json(const Config& cfg);

/// Cells per side from n, or from h = width / n (which must divide the
/// width into a whole number of cells).
int resolve_cells(const Config& cfg, const Rect& domain);

/// Steps N and tau = T / N from exactly one of tau and N.
struct TimeGrid {
  int steps = 0;
  double tau = 0.0;
  double t_final = 0.0;
};
TimeGrid resolve_time(const Config& cfg, double default_t_final);

/// The named case with overrides, homogeneous flag and final time applied.
ManufacturedCase resolve_model(const Config& cfg);

}  // namespace glcn::cli
