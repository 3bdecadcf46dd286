#include "glcn_cli/app.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "glcn/error.hpp"
#include "glcn/norms.hpp"
#include "glcn_cli/config.hpp"
#include "glcn_cli/suites.hpp"

namespace glcn::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  return out;
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidArgument("cannot create '" + dir + "': " + ec.message());
  return dir;
}

int threads_from_env() {
  const char* env = std::getenv("GLCN_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0) {
    throw InvalidArgument("GLCN_THREADS must be a non-negative integer");
  }
  return static_cast<int>(v);
}

// Flag values; set only when given, so they can override the config file.
struct Flags {
  std::string config_path;
  std::optional<std::string> case_name;
  std::optional<int> degree;
  std::optional<int> cells;
  std::optional<double> h;
  std::optional<double> tau;
  std::optional<int> steps;
  std::optional<double> t_final;
  std::optional<double> penalty;
  std::optional<double> nu, alpha, kappa, beta, gamma;
  bool homogeneous = false;
  std::optional<double> newton_tol;
  std::optional<int> newton_max_iter;
  bool no_fallback = false;
  std::optional<std::string> linear_solver;
  std::optional<double> linear_tol;
  std::optional<int> linear_max_iter;
  std::optional<std::string> out_dir;
  std::optional<int> snapshot_every;
  std::optional<std::string> plan;
  std::optional<int> threads;
  bool record_timing = false;
  std::optional<int> samples;
  std::optional<unsigned long long> seed;
  std::optional<std::string> matrix;
  std::optional<std::string> out_file;
};

void add_model_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file (flags override it)");
  cmd->add_option("--case", f.case_name, "example1 | example2");
  cmd->add_option("--k", f.degree, "polynomial degree");
  cmd->add_option("--n", f.cells, "cells per side");
  cmd->add_option("--h", f.h, "cell size (domain width / n)");
  cmd->add_option("--lambda", f.penalty, "penalty (default 10 (k+1)^2)");
  cmd->add_option("--nu", f.nu);
  cmd->add_option("--alpha", f.alpha);
  cmd->add_option("--kappa", f.kappa);
  cmd->add_option("--beta", f.beta);
  cmd->add_option("--gamma", f.gamma);
}

void add_solver_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--newton-tol", f.newton_tol);
  cmd->add_option("--newton-max-iter", f.newton_max_iter);
  cmd->add_flag("--no-fallback", f.no_fallback, "disable the fixed-point fallback");
  cmd->add_option("--linear-solver", f.linear_solver, "direct | iterative");
  cmd->add_option("--linear-tol", f.linear_tol);
  cmd->add_option("--linear-max-iter", f.linear_max_iter);
}

void add_time_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--tau", f.tau, "time step");
  cmd->add_option("--steps", f.steps, "number of steps N");
  cmd->add_option("--t-final", f.t_final, "final time T");
}

void apply_solver_flags(const Flags& f, StepConfig& s) {
  if (f.newton_tol) s.newton_tol = *f.newton_tol;
  if (f.newton_max_iter) s.newton_max_iter = *f.newton_max_iter;
  if (f.no_fallback) s.fixed_point_fallback = false;
  if (f.linear_solver) s.linear.kind = linear_solver_kind_from_string(*f.linear_solver);
  if (f.linear_tol) s.linear.tolerance = *f.linear_tol;
  if (f.linear_max_iter) s.linear.max_iterations = *f.linear_max_iter;
}

Config merge(const Flags& f) {
  Config cfg = f.config_path.empty() ? Config{} : config_from_json(read_file(f.config_path));
  if (f.case_name) cfg.case_name = f.case_name;
  if (f.degree) cfg.degree = *f.degree;
  if (f.cells) {
    cfg.cells = f.cells;
    cfg.h.reset();
  }
  if (f.h) {
    cfg.h = f.h;
    cfg.cells.reset();
  }
  if (f.tau) {
    cfg.tau = f.tau;
    cfg.steps.reset();
  }
  if (f.steps) {
    cfg.steps = f.steps;
    cfg.tau.reset();
  }
  if (f.cells && f.h) throw InvalidArgument("give only one of --n and --h");
  if (f.tau && f.steps) throw InvalidArgument("give only one of --tau and --steps");
  if (f.t_final) cfg.t_final = f.t_final;
  if (f.penalty) cfg.penalty = f.penalty;
  if (f.nu) cfg.overrides.nu = f.nu;
  if (f.alpha) cfg.overrides.alpha = f.alpha;
  if (f.kappa) cfg.overrides.kappa = f.kappa;
  if (f.beta) cfg.overrides.beta = f.beta;
  if (f.gamma) cfg.overrides.gamma = f.gamma;
  if (f.homogeneous) cfg.homogeneous = true;
  apply_solver_flags(f, cfg.solver);
  if (f.out_dir) cfg.out_dir = f.out_dir;
  if (f.snapshot_every) cfg.snapshot_every = *f.snapshot_every;
  if (f.plan) cfg.plan = f.plan;
  cfg.threads = f.threads ? *f.threads : threads_from_env();
  if (f.record_timing) cfg.record_timing = true;
  if (f.samples) cfg.samples = *f.samples;
  if (f.seed) cfg.seed = *f.seed;
  if (f.matrix) cfg.matrix = f.matrix;
  cfg.validate();
  return cfg;
}

void print_warning(const std::optional<std::string>& warning, std::ostream& err) {
  if (warning) err << "warning: " << *warning << '\n';
}

int cmd_run(const Config& cfg, std::ostream& out, std::ostream& err) {
  ManufacturedCase model = resolve_model(cfg);
  const int n = resolve_cells(cfg, model.domain);
  const TimeGrid grid = resolve_time(cfg, model.params.t_final);
  model.params.t_final = grid.t_final;
  StepConfig step = cfg.solver;
  step.tau = grid.tau;
  print_warning(solvability_warning(model.params, step.tau), err);

  auto mesh = std::make_shared<const Mesh>(build_structured(model.domain, n));
  auto space = std::make_shared<const DGSpace>(mesh, cfg.degree);
  const SipgConfig sipg{cfg.effective_penalty(), cfg.degree};

  std::optional<fs::path> dir;
  std::ofstream steps_out;
  if (cfg.out_dir) {
    dir = prepare_dir(*cfg.out_dir);
    steps_out = open_output(*dir / "steps.jsonl");
  }

  std::vector<double> norms;
  RunOptions options;
  options.observers.push_back([&](int level, double, const ComplexField& u) {
    if (model.homogeneous) norms.push_back(l2_norm(u));
    if (dir && cfg.snapshot_every > 0 &&
        (level % cfg.snapshot_every == 0 || level == grid.steps)) {
      std::ofstream snap = open_output(*dir / ("field_" + std::to_string(level) + ".csv"));
      write_field_csv(u, snap);
    }
  });
  options.on_report = [&](const StepReport& r) {
    if (!steps_out.is_open()) return;
    json line = {{"n", r.level},
                 {"t", r.t},
                 {"newton_iters", r.newton_iterations},
                 {"residual", r.final_residual},
                 {"initial_residual", r.initial_residual},
                 {"linear_iters", r.linear_iterations},
                 {"fallback", r.used_fallback}};
    if (cfg.record_timing) line["seconds"] = r.seconds;
    steps_out << line.dump() << '\n';
  };

  const RunResult result = run(space, sipg, model, step, options);
  int newton_total = 0;
  for (const StepReport& r : result.reports) newton_total += r.newton_iterations;

  out << "case " << model.name << "  k " << cfg.degree << "  n " << n << "  steps "
      << grid.steps << "  tau " << std::setprecision(6) << grid.tau << "  T "
      << grid.t_final << "  lambda " << sipg.penalty << '\n';
  json summary = {{"case", model.name},     {"k", cfg.degree},
                  {"n", n},                 {"h", mesh->h()},
                  {"steps", grid.steps},    {"tau", grid.tau},
                  {"t_final", grid.t_final}, {"lambda", sipg.penalty},
                  {"newton_total", newton_total}};
  if (model.homogeneous) {
    out << "level t norm\n";
    for (std::size_t i = 0; i < norms.size(); ++i) {
      out << i << ' ' << std::setprecision(10) << i * grid.tau << ' ' << sci(norms[i])
          << '\n';
    }
    summary["norms"] = norms;
  } else {
    const double l2 = l2_error(result.final, model.u_at(result.t_final));
    const double dg = dg_error(result.final, model.u_at(result.t_final),
                               model.gradient_at(result.t_final));
    out << "l2_error " << sci(l2) << '\n' << "dg_error " << sci(dg) << '\n';
    summary["l2_error"] = l2;
    summary["dg_error"] = dg;
  }
  out << "newton_total " << newton_total << '\n';
  if (dir) {
    std::ofstream s = open_output(*dir / "summary.json");
    s << summary.dump(2) << '\n';
    std::ofstream f = open_output(*dir / "final.csv");
    write_field_csv(result.final, f);
  }
  return kOk;
}

int cmd_study(const Config& cfg, const Flags& flags, std::ostream& out,
              std::ostream& err) {
  if (!cfg.plan) throw InvalidArgument("--plan is required");
  StudyPlan plan = plan_from_json_text(read_file(*cfg.plan));
  apply_solver_flags(flags, plan.solver);
  plan.validate();
  const ManufacturedCase model = resolve_case(plan);
  for (const GridPoint& p : grid_points(plan)) {
    print_warning(solvability_warning(model.params, plan.t_final / p.steps), err);
  }
  const ConvergenceReport report =
      run_study(plan, {cfg.threads, cfg.record_timing});
  const std::string markdown = render(report, ReportFormat::markdown);
  out << markdown;
  if (cfg.out_dir) {
    const fs::path dir = prepare_dir(*cfg.out_dir);
    open_output(dir / "report.csv") << render(report, ReportFormat::csv);
    open_output(dir / "report.md") << markdown;
    open_output(dir / "report.json") << render(report, ReportFormat::json);
  }
  return kOk;
}

int cmd_verify(const Config& cfg, std::ostream& out, std::ostream& err) {
  SuiteOptions opts;
  opts.penalty = cfg.penalty;
  opts.tau = cfg.tau.value_or(opts.tau);
  opts.gamma = cfg.overrides.gamma.value_or(opts.gamma);
  opts.newton_tol = cfg.solver.newton_tol;
  opts.samples = cfg.samples;
  opts.seed = cfg.seed;
  GLParams params;
  params.gamma = opts.gamma;
  print_warning(solvability_warning(params, opts.tau), err);

  bool all = true;
  out << std::left << std::setw(18) << "suite" << std::setw(8) << "result"
      << "detail\n";
  for (const SuiteResult& r : run_all_suites(opts)) {
    all = all && r.passed;
    out << std::setw(18) << r.name << std::setw(8) << (r.passed ? "PASS" : "FAIL")
        << r.detail << '\n';
  }
  out << (all ? "all suites passed\n" : "some suites failed\n");
  return all ? kOk : kVerifyFailed;
}

int cmd_dump_mesh(const Config& cfg, const Flags& flags, std::ostream& out) {
  if (!cfg.case_name) throw InvalidArgument("--case is required");
  const ManufacturedCase model = find_case(*cfg.case_name);
  const int n = resolve_cells(cfg, model.domain);
  auto mesh = std::make_shared<const Mesh>(build_structured(model.domain, n));
  std::ofstream file;
  if (flags.out_file) file = open_output(*flags.out_file);
  std::ostream& dest = flags.out_file ? file : out;
  if (!cfg.matrix) {
    mesh->write(dest);
    return kOk;
  }
  const DGSpace space(mesh, cfg.degree);
  if (*cfg.matrix == "stiffness") {
    assemble_stiffness(space, {cfg.effective_penalty(), cfg.degree}).write_coordinate(dest);
  } else if (*cfg.matrix == "mass") {
    assemble_mass(space).write_coordinate(dest);
  } else {
    assemble_dg_inner(space).write_coordinate(dest);
  }
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"DG Crank-Nicolson solver for the complex Ginzburg-Landau equation",
               "glcn"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  Flags f;

  CLI::App* run_cmd = app.add_subcommand("run", "single simulation");
  add_model_flags(run_cmd, f);
  add_time_flags(run_cmd, f);
  add_solver_flags(run_cmd, f);
  run_cmd->add_flag("--homogeneous", f.homogeneous, "force f = 0 and print norms");
  run_cmd->add_option("--out-dir", f.out_dir, "write steps.jsonl, summary and fields");
  run_cmd->add_option("--snapshot-every", f.snapshot_every, "field CSV every m steps");
  run_cmd->add_flag("--record-timing", f.record_timing);

  CLI::App* study_cmd = app.add_subcommand("study", "convergence study from a plan");
  study_cmd->add_option("--config", f.config_path);
  study_cmd->add_option("--plan", f.plan, "plan JSON file");
  study_cmd->add_option("--out-dir", f.out_dir, "write report.{csv,md,json}");
  study_cmd->add_option("--threads", f.threads, "parallel grid points (0 = sequential)");
  study_cmd->add_flag("--record-timing", f.record_timing, "fill the seconds column");
  add_solver_flags(study_cmd, f);

  CLI::App* verify_cmd = app.add_subcommand("verify", "invariant suites");
  verify_cmd->add_option("--config", f.config_path);
  verify_cmd->add_option("--lambda", f.penalty);
  verify_cmd->add_option("--tau", f.tau);
  verify_cmd->add_option("--gamma", f.gamma);
  verify_cmd->add_option("--newton-tol", f.newton_tol);
  verify_cmd->add_option("--samples", f.samples, "random data per decay suite");
  verify_cmd->add_option("--seed", f.seed);

  CLI::App* dump_cmd = app.add_subcommand("dump-mesh", "mesh or matrix text dump");
  add_model_flags(dump_cmd, f);
  dump_cmd->add_option("--matrix", f.matrix, "stiffness | mass | dg (coordinate format)");
  dump_cmd->add_option("--out", f.out_file, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kConfigError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    const Config cfg = merge(f);
    if (chosen == run_cmd) {
      if (!cfg.case_name) {
        err << "error: --case is required\n" << run_cmd->help();
        return kConfigError;
      }
      return cmd_run(cfg, out, err);
    }
    if (chosen == study_cmd) return cmd_study(cfg, f, out, err);
    if (chosen == verify_cmd) return cmd_verify(cfg, out, err);
    return cmd_dump_mesh(cfg, f, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const StepFailed& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const StudyFailed& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::exception& e) {
    // Failures before the first step (initial projection) are level 0.
    err << "solver failure: level 0: " << e.what() << '\n';
    return kSolverFailure;
  }
}

}  // namespace glcn::cli
