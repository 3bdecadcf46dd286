#include "glcn/newton.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace glcn {

NewtonResult newton_solve(const ResidualFunction& residual,
                          const JacobianSolve& solve, Eigen::VectorXd x0,
                          const NewtonConfig& cfg, double reference) {
  NewtonResult result;
  result.x = std::move(x0);
  Eigen::VectorXd r = residual(result.x);
  double rnorm = r.norm();
  result.residual_history.push_back(rnorm);
  result.reference = std::max(reference, rnorm);
  const double target = cfg.tolerance * result.reference;

  while (true) {
    if (result.iterations >= cfg.max_iterations || !std::isfinite(rnorm)) {
      throw NewtonDiverged("Newton residual " + std::to_string(rnorm) +
                               " above target " + std::to_string(target) +
                               " after " + std::to_string(result.iterations) +
                               " iterations",
                           result.x, result.residual_history);
    }
    int linear = 0;
    result.x -= solve(result.x, r, linear);
    result.linear_iterations += linear;
    ++result.iterations;
    r = residual(result.x);
    rnorm = r.norm();
    result.residual_history.push_back(rnorm);
    if (rnorm <= target) return result;
  }
}

}  // namespace glcn
