#pragma once

#include <memory>

#include "glcn/linear_solver.hpp"
#include "glcn/sparse.hpp"

namespace glcn {

/// Standard penalty scaling with the polynomial trace-inequality constant.
inline double default_penalty(int degree) {
  return 10.0 * (degree + 1) * (degree + 1);
}

struct SipgConfig {
  double penalty = 40.0;
  int degree = 1;

  static SipgConfig with_default_penalty(int degree) {
    return {default_penalty(degree), degree};
  }
  void validate() const;
};

/// Block-diagonal mass matrix, (M u, v) = int u v^*.
SparseOperator assemble_mass(const DGSpace& space);

/// Symmetric interior penalty form
///   a_h(u, v) = sum_K int grad u . grad v^*
///             - sum_E int {grad u . n_E} [v^*] - sum_E int [u] {grad v^* . n_E}
///             + sum_E (lambda / h_E) int [u][v^*],
/// with {v} = [v] = v|_K on boundary edges.
SparseOperator assemble_stiffness(const DGSpace& space, const SipgConfig& cfg);

/// Gram matrix of the DG inner product: broken H1 seminorm plus
/// (1 / h_E) weighted jumps over all edges.
SparseOperator assemble_dg_inner(const DGSpace& space);

/// Weighted load vector b_i = int f phi_i.
Eigen::VectorXcd assemble_load(const DGSpace& space, const ScalarFunction& f);

/// Elliptic projection: a_h(R_h u, v) = -(Laplacian u, v) for all v. The
/// stiffness factorization is kept so repeated projections are cheap.
class RitzProjector {
 public:
  RitzProjector(std::shared_ptr<const DGSpace> space, const SipgConfig& cfg,
                double tolerance = 1e-12);
  /// Reuses an assembled stiffness operator.
  RitzProjector(std::shared_ptr<const DGSpace> space, SparseOperator stiffness,
                double tolerance = 1e-12);

  const SparseOperator& stiffness() const { return stiffness_; }

  /// Solves A r = b with b_i = -int laplacian * phi_i.
  ComplexField project(const ScalarFunction& laplacian) const;

  /// Relative residual of the last projection.
  double last_residual() const { return last_residual_; }

 private:
  std::shared_ptr<const DGSpace> space_;
  SparseOperator stiffness_;
  SparseDirectSolver solver_;
  mutable double last_residual_ = 0.0;
};

ComplexField ritz_project(std::shared_ptr<const DGSpace> space,
                          const SipgConfig& cfg,
                          const ScalarFunction& laplacian);

}  // namespace glcn
