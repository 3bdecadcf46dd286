#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "glcn/mesh.hpp"

namespace glcn {

/// Nodal Lagrange basis of P_k on the reference triangle, with nodes on the
/// principal lattice (i/k, j/k), i + j <= k.
class ReferenceBasis {
 public:
  explicit ReferenceBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Point>& nodes() const { return nodes_; }

  void values(Point ref, std::span<double> out) const;
  void gradients(Point ref, std::span<std::array<double, 2>> out) const;

  Eigen::VectorXd values(Point ref) const;

  /// Exponents (a, b) of the monomial xi^a eta^b spanning P_k.
  const std::vector<std::array<int, 2>>& monomials() const { return monomials_; }

 private:
  int degree_;
  std::vector<Point> nodes_;
  std::vector<std::array<int, 2>> monomials_;
  // coefficients_(m, i): weight of monomial m in basis function i.
  Eigen::MatrixXd coefficients_;
};

/// Basis values and reference gradients at the points of a rule:
/// rows are quadrature points, columns are basis functions.
struct Tabulation {
  Eigen::MatrixXd values;
  Eigen::MatrixXd d_xi;
  Eigen::MatrixXd d_eta;
};

Tabulation tabulate(const ReferenceBasis& basis, std::span<const Point> points);

}  // namespace glcn
