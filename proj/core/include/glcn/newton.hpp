#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "glcn/error.hpp"

namespace glcn {

struct NewtonConfig {
  /// Converged when ||R(x)|| <= tolerance * reference.
  double tolerance = 1e-11;
  int max_iterations = 50;
};

struct NewtonResult {
  Eigen::VectorXd x;
  std::vector<double> residual_history;  // ||R|| before each update and at exit
  int iterations = 0;
  int linear_iterations = 0;
  double reference = 0.0;
};

/// Raised when the residual is not reduced below the tolerance in time.
class NewtonDiverged : public Error {
 public:
  NewtonDiverged(const std::string& what, Eigen::VectorXd last_iterate,
                 std::vector<double> residual_history)
      : Error(what),
        last_iterate_(std::move(last_iterate)),
        residual_history_(std::move(residual_history)) {}

  const Eigen::VectorXd& last_iterate() const { return last_iterate_; }
  const std::vector<double>& residual_history() const { return residual_history_; }

 private:
  Eigen::VectorXd last_iterate_;
  std::vector<double> residual_history_;
};

using ResidualFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Returns the Newton correction d with J(x) d = r; may report the number of
/// inner linear iterations through the last argument.
using JacobianSolve = std::function<Eigen::VectorXd(
    const Eigen::VectorXd& x, const Eigen::VectorXd& r, int& linear_iterations)>;

/// Plain Newton iteration x <- x - J(x)^{-1} R(x). At least one update is
/// taken. `reference` scales the tolerance; it is raised to ||R(x0)|| when
/// that is larger.
NewtonResult newton_solve(const ResidualFunction& residual,
                          const JacobianSolve& solve, Eigen::VectorXd x0,
                          const NewtonConfig& cfg, double reference);

}  // namespace glcn
