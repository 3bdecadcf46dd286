#include "glcn/stepper.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <utility>

#include "glcn/error.hpp"

namespace glcn {

namespace {

// sqrt(||A||_1 ||A||_inf) >= ||A||_2.
double norm_bound(const SparseMatrix& a) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(a.rows());
  double col_max = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      rows[it.row()] += std::abs(it.value());
      col += std::abs(it.value());
    }
    col_max = std::max(col_max, col);
  }
  return std::sqrt(col_max * rows.maxCoeff());
}

using Clock = std::chrono::steady_clock;

// Index of entry (row, col) in the value array of a compressed
// column-major matrix; the entry must be stored.
int value_index(const SparseMatrix& m, int row, int col) {
  const int* inner = m.innerIndexPtr();
  const int begin = m.outerIndexPtr()[col];
  const int end = m.outerIndexPtr()[col + 1];
  const int* it = std::lower_bound(inner + begin, inner + end, row);
  if (it == inner + end || *it != row) {
    throw Error("Jacobian pattern is missing an element-block entry");
  }
  return static_cast<int>(it - inner);
}

}  // namespace

void StepConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw InvalidArgument("time step must be positive and finite");
  }
  if (!(newton_tol > 0.0)) throw InvalidArgument("newton_tol must be positive");
  if (newton_max_iter < 1) throw InvalidArgument("newton_max_iter must be >= 1");
  if (!(linear.tolerance > 0.0)) {
    throw InvalidArgument("linear solver tolerance must be positive");
  }
}

std::optional<std::string> solvability_warning(const GLParams& params,
                                               double tau) {
  const double product = tau * params.gamma;
  if (product < 2.0) return std::nullopt;
  std::ostringstream os;
  os << "tau * gamma = " << product
     << " >= 2: existence of a solution of each step is not guaranteed";
  return os.str();
}

Eigen::VectorXd pack(const Eigen::VectorXcd& z) {
  Eigen::VectorXd x(2 * z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    x[2 * i] = z[i].real();
    x[2 * i + 1] = z[i].imag();
  }
  return x;
}

Eigen::VectorXcd unpack(const Eigen::VectorXd& x) {
  Eigen::VectorXcd z(x.size() / 2);
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = {x[2 * i], x[2 * i + 1]};
  return z;
}

struct CrankNicolsonStepper::Solvers {
  SparseDirectSolver direct;
  std::optional<ComplexDirectSolver> linear_part;  // GMRES preconditioner
  std::optional<ComplexDirectSolver> fixed_point;
};

CrankNicolsonStepper::CrankNicolsonStepper(std::shared_ptr<const DGSpace> space,
                                           SparseOperator stiffness,
                                           SparseOperator mass,
                                           ManufacturedCase model,
                                           StepConfig cfg)
    : space_(std::move(space)),
      stiffness_(std::move(stiffness)),
      mass_(std::move(mass)),
      model_(std::move(model)),
      cfg_(cfg),
      solvers_(std::make_unique<Solvers>()) {
  cfg_.validate();
  model_.params.validate();
  warning_ = solvability_warning(model_.params, cfg_.tau);
  solvers_->direct = SparseDirectSolver(cfg_.linear.tolerance);
  build_linear_part();
}

CrankNicolsonStepper::CrankNicolsonStepper(std::shared_ptr<const DGSpace> space,
                                           const SipgConfig& sipg,
                                           ManufacturedCase model,
                                           StepConfig cfg)
    : CrankNicolsonStepper(space, assemble_stiffness(*space, sipg),
                           assemble_mass(*space), std::move(model), cfg) {}

CrankNicolsonStepper::~CrankNicolsonStepper() = default;
CrankNicolsonStepper::CrankNicolsonStepper(CrankNicolsonStepper&&) noexcept =
    default;
CrankNicolsonStepper& CrankNicolsonStepper::operator=(
    CrankNicolsonStepper&&) noexcept = default;

void CrankNicolsonStepper::build_linear_part() {
  const GLParams& p = model_.params;
  const double shift = 2.0 / cfg_.tau - p.gamma;
  const int n = space_->num_dofs();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * static_cast<std::size_t>(mass_.matrix().nonZeros()) +
                   4 * static_cast<std::size_t>(stiffness_.matrix().nonZeros()));
  const SparseMatrix& m = mass_.matrix();
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      const int i = static_cast<int>(it.row());
      const int j = static_cast<int>(it.col());
      triplets.emplace_back(2 * i, 2 * j, shift * it.value());
      triplets.emplace_back(2 * i + 1, 2 * j + 1, shift * it.value());
    }
  }
  const SparseMatrix& a = stiffness_.matrix();
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      const int i = static_cast<int>(it.row());
      const int j = static_cast<int>(it.col());
      // (nu + i alpha) acting on (Re, Im).
      triplets.emplace_back(2 * i, 2 * j, p.nu * it.value());
      triplets.emplace_back(2 * i, 2 * j + 1, -p.alpha * it.value());
      triplets.emplace_back(2 * i + 1, 2 * j, p.alpha * it.value());
      triplets.emplace_back(2 * i + 1, 2 * j + 1, p.nu * it.value());
    }
  }
  // Explicit zeros on every element block keep the pattern independent of
  // the values.
  const int nb = space_->dofs_per_element();
  for (int e = 0; e < space_->mesh().num_elements(); ++e) {
    const int d0 = 2 * space_->dof(e, 0);
    for (int j = 0; j < 2 * nb; ++j) {
      for (int i = 0; i < 2 * nb; ++i) triplets.emplace_back(d0 + i, d0 + j, 0.0);
    }
  }
  linear_real_.resize(2 * n, 2 * n);
  linear_real_.setFromTriplets(triplets.begin(), triplets.end());
  linear_real_.makeCompressed();
  jacobian_ = linear_real_;

  block_offsets_.clear();
  block_offsets_.reserve(static_cast<std::size_t>(space_->mesh().num_elements()) *
                         4 * nb * nb);
  for (int e = 0; e < space_->mesh().num_elements(); ++e) {
    const int d0 = 2 * space_->dof(e, 0);
    for (int j = 0; j < 2 * nb; ++j) {
      for (int i = 0; i < 2 * nb; ++i) {
        block_offsets_.push_back(value_index(linear_real_, d0 + i, d0 + j));
      }
    }
  }

  if (cfg_.linear.kind == LinearSolverConfig::Kind::iterative) {
    Eigen::SparseMatrix<Complex> lc =
        (shift * m.cast<Complex>() + p.diffusion() * a.cast<Complex>());
    solvers_->linear_part.emplace(cfg_.linear.tolerance);
    solvers_->linear_part->factorize(lc);
  }
}

Eigen::VectorXcd CrankNicolsonStepper::load(double t_prev) const {
  if (model_.homogeneous) return Eigen::VectorXcd::Zero(space_->num_dofs());
  const double t_half = t_prev + 0.5 * cfg_.tau;
  return assemble_load(*space_, [this, t_half](double x, double y) {
    return source_term(model_, x, y, t_half);
  });
}

Eigen::VectorXcd CrankNicolsonStepper::residual(
    const Eigen::VectorXcd& w, const Eigen::VectorXcd& u_prev,
    const Eigen::VectorXcd& f) const {
  const GLParams& p = model_.params;
  const ComplexField wf(space_, w);
  return (2.0 / cfg_.tau) * mass_.apply(w - u_prev) +
         p.diffusion() * stiffness_.apply(w) +
         p.nonlinearity() * cubic_weak(wf) - p.gamma * mass_.apply(w) - f;
}

const SparseMatrix& CrankNicolsonStepper::jacobian(const Eigen::VectorXcd& w) {
  const GLParams& p = model_.params;
  const QuadratureRule& rule = space_->volume_rule();
  const Tabulation& tab = space_->volume_tab();
  const int nb = space_->dofs_per_element();
  Eigen::Matrix2d rotation;
  rotation << p.kappa, -p.beta, p.beta, p.kappa;

  std::copy_n(linear_real_.valuePtr(), linear_real_.nonZeros(),
              jacobian_.valuePtr());
  double* values = jacobian_.valuePtr();
  Eigen::MatrixXd block(2 * nb, 2 * nb);
  std::size_t offset = 0;
  for (int e = 0; e < space_->mesh().num_elements(); ++e) {
    const Eigen::VectorXcd wq =
        tab.values * w.segment(space_->dof(e, 0), nb);
    const double det = space_->geometry(e).det;
    block.setZero();
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Matrix2d jq =
          rule.weights[q] * det * (rotation * cubic_jacobian_block(wq[q]));
      const auto phi = tab.values.row(q);
      for (int j = 0; j < nb; ++j) {
        for (int i = 0; i < nb; ++i) {
          const double pp = phi[i] * phi[j];
          block(2 * i, 2 * j) += pp * jq(0, 0);
          block(2 * i, 2 * j + 1) += pp * jq(0, 1);
          block(2 * i + 1, 2 * j) += pp * jq(1, 0);
          block(2 * i + 1, 2 * j + 1) += pp * jq(1, 1);
        }
      }
    }
    for (int j = 0; j < 2 * nb; ++j) {
      for (int i = 0; i < 2 * nb; ++i) values[block_offsets_[offset++]] += block(i, j);
    }
  }
  return jacobian_;
}

NewtonResult CrankNicolsonStepper::solve_newton(const Eigen::VectorXcd& u_prev,
                                                const Eigen::VectorXcd& f,
                                                double reference) {
  auto residual_fn = [&](const Eigen::VectorXd& x) {
    return pack(residual(unpack(x), u_prev, f));
  };
  JacobianSolve solve;
  if (cfg_.linear.kind == LinearSolverConfig::Kind::direct) {
    solve = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& r, int&) {
      solvers_->direct.factorize(jacobian(unpack(x)));
      return solvers_->direct.solve(r);
    };
  } else {
    solve = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& r,
                int& iterations) {
      const SparseMatrix& jac = jacobian(unpack(x));
      const ComplexDirectSolver& pre = *solvers_->linear_part;
      const KrylovResult kr = gmres(
          [&jac](const Eigen::VectorXd& v) -> Eigen::VectorXd { return jac * v; },
          [&pre](const Eigen::VectorXd& v) { return pack(pre.solve_raw(unpack(v))); },
          r, Eigen::VectorXd::Zero(r.size()), cfg_.linear.tolerance,
          cfg_.linear.max_iterations, 50, norm_bound(jac));
      iterations = kr.iterations;
      return kr.x;
    };
  }
  NewtonConfig ncfg{cfg_.newton_tol, cfg_.newton_max_iter};
  return newton_solve(residual_fn, solve, pack(u_prev), ncfg, reference);
}

Eigen::VectorXcd CrankNicolsonStepper::solve_fixed_point(
    const Eigen::VectorXcd& u_prev, const Eigen::VectorXcd& f, double reference,
    StepReport& report) {
  // Lag |w|^2: [(2/tau - gamma) M + (nu + i alpha) A + (kappa + i beta) M_{|w|^2}] w_new
  //   = (2/tau) M u_prev + f.
  const GLParams& p = model_.params;
  const double shift = 2.0 / cfg_.tau - p.gamma;
  const Eigen::SparseMatrix<Complex> base =
      shift * mass_.matrix().cast<Complex>() +
      p.diffusion() * stiffness_.matrix().cast<Complex>();
  const Eigen::VectorXcd rhs = (2.0 / cfg_.tau) * mass_.apply(u_prev) + f;
  const QuadratureRule& rule = space_->volume_rule();
  const Tabulation& tab = space_->volume_tab();
  const int nb = space_->dofs_per_element();

  if (!solvers_->fixed_point) solvers_->fixed_point.emplace(cfg_.linear.tolerance);
  Eigen::VectorXcd w = u_prev;
  double rnorm = residual(w, u_prev, f).norm();
  const double target = cfg_.newton_tol * std::max(reference, rnorm);
  for (int it = 0; it < cfg_.fixed_point_max_iter; ++it) {
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(static_cast<std::size_t>(space_->num_dofs()) * nb);
    for (int e = 0; e < space_->mesh().num_elements(); ++e) {
      const Eigen::VectorXcd wq = tab.values * w.segment(space_->dof(e, 0), nb);
      Eigen::VectorXd weight(rule.size());
      for (int q = 0; q < rule.size(); ++q) {
        weight[q] = rule.weights[q] * space_->geometry(e).det * std::norm(wq[q]);
      }
      const Eigen::MatrixXd local =
          tab.values.transpose() * weight.asDiagonal() * tab.values;
      const int d0 = space_->dof(e, 0);
      for (int j = 0; j < nb; ++j) {
        for (int i = 0; i < nb; ++i) {
          triplets.emplace_back(d0 + i, d0 + j, p.nonlinearity() * local(i, j));
        }
      }
    }
    Eigen::SparseMatrix<Complex> weighted(space_->num_dofs(), space_->num_dofs());
    weighted.setFromTriplets(triplets.begin(), triplets.end());
    solvers_->fixed_point->factorize(base + weighted);
    w = solvers_->fixed_point->solve(rhs);
    rnorm = residual(w, u_prev, f).norm();
    report.residual_history.push_back(rnorm);
    ++report.newton_iterations;
    if (rnorm <= target) {
      report.final_residual = rnorm;
      return w;
    }
  }
  throw NewtonDiverged("fixed-point fallback did not converge, residual " +
                           std::to_string(rnorm),
                       pack(w), report.residual_history);
}

std::pair<ComplexField, StepReport> CrankNicolsonStepper::step(
    const ComplexField& u_prev, double t_prev, int level) {
  const auto start = Clock::now();
  StepReport report;
  report.level = level;
  report.t = t_prev + cfg_.tau;
  const Eigen::VectorXcd& up = u_prev.coeffs();
  const Eigen::VectorXcd f = load(t_prev);
  const double reference =
      ((2.0 / cfg_.tau) * mass_.apply(up)).norm() + f.norm();

  Eigen::VectorXcd w;
  try {
    NewtonResult nr = solve_newton(up, f, reference);
    report.newton_iterations = nr.iterations;
    report.linear_iterations = nr.linear_iterations;
    report.residual_history = nr.residual_history;
    report.initial_residual = nr.residual_history.front();
    report.final_residual = nr.residual_history.back();
    report.reference = nr.reference;
    w = unpack(nr.x);
  } catch (const NewtonDiverged&) {
    if (!cfg_.fixed_point_fallback) throw;
    report = StepReport{};
    report.level = level;
    report.t = t_prev + cfg_.tau;
    report.used_fallback = true;
    report.reference = reference;
    report.initial_residual = residual(up, up, f).norm();
    w = solve_fixed_point(up, f, reference, report);
  }
  ComplexField next(u_prev.space_ptr(), 2.0 * w - up);
  report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return {std::move(next), std::move(report)};
}

std::pair<ComplexField, StepReport> cn_step(
    std::shared_ptr<const DGSpace> space, const SparseOperator& stiffness,
    const SparseOperator& mass, const ManufacturedCase& model,
    const ComplexField& u_prev, double t_prev, const StepConfig& cfg) {
  CrankNicolsonStepper stepper(std::move(space), stiffness, mass, model, cfg);
  return stepper.step(u_prev, t_prev);
}

int steps_for(double t_final, double tau) {
  if (!(t_final > 0.0) || !(tau > 0.0)) {
    throw InvalidArgument("final time and time step must be positive");
  }
  const double ratio = t_final / tau;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    std::ostringstream os;
    os << "T / tau = " << ratio << " is not a positive integer";
    throw InvalidArgument(os.str());
  }
  return static_cast<int>(rounded);
}

RunResult run_from(CrankNicolsonStepper& stepper, ComplexField initial,
                   const RunOptions& options) {
  const double t_final = stepper.model().params.t_final;
  const int steps = steps_for(t_final, stepper.config().tau);
  // The step size actually used is T / N so that t_N = T exactly.
  const double tau = t_final / steps;

  RunResult result{initial, initial, {}, {}, t_final, steps};
  if (options.keep_trajectory) result.trajectory.push_back(initial);
  for (const auto& observer : options.observers) observer(0, 0.0, initial);

  ComplexField current = std::move(initial);
  for (int n = 1; n <= steps; ++n) {
    const double t_prev = (n - 1) * tau;
    try {
      auto [next, report] = stepper.step(current, t_prev, n);
      report.t = n * tau;
      current = std::move(next);
      if (options.on_report) options.on_report(report);
      result.reports.push_back(std::move(report));
    } catch (const NewtonDiverged& err) {
      throw StepFailed(n, err.what());
    } catch (const LinearSolveFailed& err) {
      throw StepFailed(n, err.what());
    }
    if (options.keep_trajectory) result.trajectory.push_back(current);
    for (const auto& observer : options.observers) observer(n, n * tau, current);
  }
  result.final = std::move(current);
  return result;
}

RunResult run(std::shared_ptr<const DGSpace> space, const SipgConfig& sipg,
              const ManufacturedCase& model, const StepConfig& cfg,
              const RunOptions& options) {
  StepConfig effective = cfg;
  const int steps = steps_for(model.params.t_final, cfg.tau);
  effective.tau = model.params.t_final / steps;
  CrankNicolsonStepper stepper(space, sipg, model, effective);
  RitzProjector projector(space, stepper.stiffness(), cfg.linear.tolerance);
  ComplexField initial = projector.project(model.laplacian_at(0.0));
  return run_from(stepper, std::move(initial), options);
}

}  // namespace glcn
