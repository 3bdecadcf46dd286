#pragma once

#include <functional>
#include <memory>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace glcn {

struct LinearSolverConfig {
  enum class Kind { direct, iterative };

  Kind kind = Kind::direct;
  /// Required relative residual ||b - A x|| / ||b||.
  double tolerance = 1e-12;
  /// Iteration cap for the iterative variant.
  int max_iterations = 200;
};

std::string to_string(LinearSolverConfig::Kind kind);
LinearSolverConfig::Kind linear_solver_kind_from_string(const std::string& s);

/// Sparse LU with a few steps of iterative refinement. Throws
/// LinearSolveFailed when the factorization fails or the refined residual
/// stays above the tolerance.
class SparseDirectSolver {
 public:
  explicit SparseDirectSolver(double tolerance = 1e-12);
  ~SparseDirectSolver();
  SparseDirectSolver(SparseDirectSolver&&) noexcept;
  SparseDirectSolver& operator=(SparseDirectSolver&&) noexcept;

  /// Factorizes; the sparsity pattern analysis is reused while the pattern
  /// (nonzero count and dimension) stays the same.
  void factorize(const Eigen::SparseMatrix<double>& matrix);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  /// Solves without refinement or residual check (preconditioner use).
  Eigen::VectorXd solve_raw(const Eigen::VectorXd& rhs) const;

  int refinement_steps() const { return last_refinements_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double tolerance_;
  mutable int last_refinements_ = 0;
};

/// Complex sparse LU, same contract as SparseDirectSolver.
class ComplexDirectSolver {
 public:
  explicit ComplexDirectSolver(double tolerance = 1e-12);
  ~ComplexDirectSolver();
  ComplexDirectSolver(ComplexDirectSolver&&) noexcept;
  ComplexDirectSolver& operator=(ComplexDirectSolver&&) noexcept;

  void factorize(const Eigen::SparseMatrix<std::complex<double>>& matrix);
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;
  Eigen::VectorXcd solve_raw(const Eigen::VectorXcd& rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double tolerance_;
};

struct KrylovResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;
};

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Restarted GMRES with right preconditioning, so the monitored residual is
/// the true residual of A x = b. Throws LinearSolveFailed when the
/// tolerance is not reached within max_iterations. With matrix_norm > 0
/// (an estimate of ||A||_2), a restart cycle that stagnates with
/// ||r|| <= 64 eps (||A|| ||x|| + ||b||) is accepted as converged.
KrylovResult gmres(const LinearMap& apply, const LinearMap& precondition,
                   const Eigen::VectorXd& rhs, Eigen::VectorXd x0,
                   double tolerance, int max_iterations, int restart = 50,
                   double matrix_norm = 0.0);

}  // namespace glcn
