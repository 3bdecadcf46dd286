#include "glcn/linear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/SparseLU>

#include "glcn/error.hpp"

namespace glcn {

namespace {

constexpr int kMaxRefinements = 4;

// Componentwise backward error max_i |r_i| / (|A||x| + |b|)_i: once it sits
// at a few ulps, x is as good as a double-precision vector can be.
constexpr double kRoundoffFloor = 64.0 * std::numeric_limits<double>::epsilon();

template <typename Matrix, typename Vector>
double backward_error(const Matrix& a, const Vector& x, const Vector& b,
                      const Vector& r) {
  Eigen::VectorXd scale = b.cwiseAbs();
  for (Eigen::Index j = 0; j < a.outerSize(); ++j) {
    for (typename Matrix::InnerIterator it(a, j); it; ++it) {
      scale[it.row()] += std::abs(it.value()) * std::abs(x[j]);
    }
  }
  double eta = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (scale[i] > 0.0) eta = std::max(eta, std::abs(r[i]) / scale[i]);
  }
  return eta;
}

std::string scientific(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

template <typename Matrix, typename Factor, typename Vector>
Vector refine(const Matrix& a, const Factor& lu, const Vector& b,
              double tolerance, int& steps) {
  const double bnorm = b.norm();
  Vector x = lu.solve(b);
  steps = 0;
  if (bnorm == 0.0) return x;
  Vector r = b - a * x;
  double rel = r.norm() / bnorm;
  while (rel > tolerance && steps < kMaxRefinements) {
    const Vector next = x + lu.solve(r);
    const Vector next_r = b - a * next;
    const double next_rel = next_r.norm() / bnorm;
    ++steps;
    if (!(next_rel < rel)) break;  // stagnated
    x = next;
    r = next_r;
    rel = next_rel;
  }
  if (rel <= tolerance) return x;
  const double eta = backward_error(a, x, b, r);
  if (eta <= kRoundoffFloor) return x;
  throw LinearSolveFailed("sparse direct solve reached relative residual " +
                              scientific(rel) + " (backward error " +
                              scientific(eta) + ")",
                          rel);
}

}  // namespace

std::string to_string(LinearSolverConfig::Kind kind) {
  return kind == LinearSolverConfig::Kind::direct ? "direct" : "iterative";
}

LinearSolverConfig::Kind linear_solver_kind_from_string(const std::string& s) {
  if (s == "direct") return LinearSolverConfig::Kind::direct;
  if (s == "iterative") return LinearSolverConfig::Kind::iterative;
  throw InvalidArgument("unknown linear solver '" + s + "'");
}

struct SparseDirectSolver::Impl {
  Eigen::SparseMatrix<double> matrix;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  Eigen::Index analyzed_nnz = -1;
  Eigen::Index analyzed_rows = -1;
};

SparseDirectSolver::SparseDirectSolver(double tolerance)
    : impl_(std::make_unique<Impl>()), tolerance_(tolerance) {}
SparseDirectSolver::~SparseDirectSolver() = default;
SparseDirectSolver::SparseDirectSolver(SparseDirectSolver&&) noexcept = default;
SparseDirectSolver& SparseDirectSolver::operator=(SparseDirectSolver&&) noexcept =
    default;

void SparseDirectSolver::factorize(const Eigen::SparseMatrix<double>& matrix) {
  impl_->matrix = matrix;
  impl_->matrix.makeCompressed();
  if (impl_->analyzed_nnz != impl_->matrix.nonZeros() ||
      impl_->analyzed_rows != impl_->matrix.rows()) {
    impl_->lu.analyzePattern(impl_->matrix);
    impl_->analyzed_nnz = impl_->matrix.nonZeros();
    impl_->analyzed_rows = impl_->matrix.rows();
  }
  impl_->lu.factorize(impl_->matrix);
  if (impl_->lu.info() != Eigen::Success) {
    impl_->analyzed_nnz = -1;
    throw LinearSolveFailed("sparse LU factorization failed: " +
                                impl_->lu.lastErrorMessage(),
                            std::numeric_limits<double>::infinity());
  }
}

Eigen::VectorXd SparseDirectSolver::solve(const Eigen::VectorXd& rhs) const {
  return refine(impl_->matrix, impl_->lu, rhs, tolerance_, last_refinements_);
}

Eigen::VectorXd SparseDirectSolver::solve_raw(const Eigen::VectorXd& rhs) const {
  return impl_->lu.solve(rhs);
}

struct ComplexDirectSolver::Impl {
  Eigen::SparseMatrix<std::complex<double>> matrix;
  Eigen::SparseLU<Eigen::SparseMatrix<std::complex<double>>,
                  Eigen::COLAMDOrdering<int>>
      lu;
};

ComplexDirectSolver::ComplexDirectSolver(double tolerance)
    : impl_(std::make_unique<Impl>()), tolerance_(tolerance) {}
ComplexDirectSolver::~ComplexDirectSolver() = default;
ComplexDirectSolver::ComplexDirectSolver(ComplexDirectSolver&&) noexcept = default;
ComplexDirectSolver& ComplexDirectSolver::operator=(ComplexDirectSolver&&) noexcept =
    default;

void ComplexDirectSolver::factorize(
    const Eigen::SparseMatrix<std::complex<double>>& matrix) {
  impl_->matrix = matrix;
  impl_->matrix.makeCompressed();
  impl_->lu.compute(impl_->matrix);
  if (impl_->lu.info() != Eigen::Success) {
    throw LinearSolveFailed("complex sparse LU factorization failed: " +
                                impl_->lu.lastErrorMessage(),
                            std::numeric_limits<double>::infinity());
  }
}

Eigen::VectorXcd ComplexDirectSolver::solve(const Eigen::VectorXcd& rhs) const {
  int steps = 0;
  return refine(impl_->matrix, impl_->lu, rhs, tolerance_, steps);
}

Eigen::VectorXcd ComplexDirectSolver::solve_raw(const Eigen::VectorXcd& rhs) const {
  return impl_->lu.solve(rhs);
}

KrylovResult gmres(const LinearMap& apply, const LinearMap& precondition,
                   const Eigen::VectorXd& rhs, Eigen::VectorXd x0,
                   double tolerance, int max_iterations, int restart,
                   double matrix_norm) {
  KrylovResult result;
  result.x = std::move(x0);
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    result.x.setZero();
    return result;
  }
  const Eigen::Index n = rhs.size();
  Eigen::MatrixXd basis(n, restart + 1);
  Eigen::MatrixXd hessenberg = Eigen::MatrixXd::Zero(restart + 1, restart);
  Eigen::VectorXd cs(restart);
  Eigen::VectorXd sn(restart);
  Eigen::VectorXd g(restart + 1);

  Eigen::VectorXd r = rhs - apply(result.x);
  double rel = r.norm() / bnorm;
  auto at_floor = [&] {
    return matrix_norm > 0.0 &&
           r.norm() <= kRoundoffFloor * (matrix_norm * result.x.norm() + bnorm);
  };
  while (rel > tolerance && result.iterations < max_iterations) {
    const double cycle_start = rel;
    const double beta = r.norm();
    basis.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    hessenberg.setZero();
    int used = 0;
    for (int j = 0; j < restart && result.iterations < max_iterations; ++j) {
      Eigen::VectorXd w = apply(precondition(basis.col(j)));
      for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt
        hessenberg(i, j) = basis.col(i).dot(w);
        w -= hessenberg(i, j) * basis.col(i);
      }
      hessenberg(j + 1, j) = w.norm();
      if (hessenberg(j + 1, j) > 0.0) basis.col(j + 1) = w / hessenberg(j + 1, j);
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * hessenberg(i, j) + sn[i] * hessenberg(i + 1, j);
        hessenberg(i + 1, j) = -sn[i] * hessenberg(i, j) + cs[i] * hessenberg(i + 1, j);
        hessenberg(i, j) = t;
      }
      const double rho = std::hypot(hessenberg(j, j), hessenberg(j + 1, j));
      cs[j] = hessenberg(j, j) / rho;
      sn[j] = hessenberg(j + 1, j) / rho;
      hessenberg(j, j) = rho;
      hessenberg(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      ++result.iterations;
      used = j + 1;
      if (std::abs(g[j + 1]) / bnorm <= 0.1 * tolerance) break;
    }
    const Eigen::VectorXd y = hessenberg.topLeftCorner(used, used)
                                  .triangularView<Eigen::Upper>()
                                  .solve(g.head(used));
    result.x += precondition(basis.leftCols(used) * y);
    r = rhs - apply(result.x);
    rel = r.norm() / bnorm;
    if (rel > 0.5 * cycle_start && at_floor()) break;
  }
  result.relative_residual = rel;
  if (!(rel <= tolerance) && !at_floor()) {
    throw LinearSolveFailed("GMRES stopped at relative residual " +
                                scientific(rel) + " after " +
                                std::to_string(result.iterations) + " iterations",
                            rel);
  }
  return result;
}

}  // namespace glcn
