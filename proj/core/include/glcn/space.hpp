#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>

#include <Eigen/Dense>

#include "glcn/basis.hpp"
#include "glcn/mesh.hpp"
#include "glcn/quadrature.hpp"

namespace glcn {

using Complex = std::complex<double>;
using ComplexGradient = std::array<Complex, 2>;

/// Pointwise complex function of (x, y).
using ScalarFunction = std::function<Complex(double, double)>;
using GradientFunction = std::function<ComplexGradient(double, double)>;

/// Affine map x = origin + jacobian * (xi, eta) of one element.
struct ElementGeometry {
  Point origin;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d inverse_transpose;
  double det = 0.0;  // twice the area

  double area() const { return 0.5 * det; }
};

/// Broken P_k space over a mesh. Dofs are element-major and contiguous:
/// dof(e, i) = e * dofs_per_element + i.
class DGSpace {
 public:
  DGSpace(std::shared_ptr<const Mesh> mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  int degree() const { return basis_.degree(); }
  int dofs_per_element() const { return basis_.size(); }
  int num_dofs() const { return mesh_->num_elements() * dofs_per_element(); }
  int dof(int element, int local) const {
    return element * dofs_per_element() + local;
  }

  const ReferenceBasis& basis() const { return basis_; }
  const ElementGeometry& geometry(int element) const {
    return geometry_.at(element);
  }

  /// Volume rule, exact to degree >= 4k (cubic term and L4 norm).
  const QuadratureRule& volume_rule() const { return volume_rule_; }
  const Tabulation& volume_tab() const { return volume_tab_; }
  /// Elevated rule for errors against exact solutions, exact to >= 4k + 2.
  const QuadratureRule& error_rule() const { return error_rule_; }
  const Tabulation& error_tab() const { return error_tab_; }
  /// Gauss rule on edges, exact to degree >= 2k + 1.
  const QuadratureRule& edge_rule() const { return edge_rule_; }
  const QuadratureRule& error_edge_rule() const { return error_edge_rule_; }

  /// Physical gradients of all basis functions at row q of a tabulation.
  Eigen::Matrix<double, Eigen::Dynamic, 2> physical_gradients(
      int element, const Tabulation& tab, int q) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  ReferenceBasis basis_;
  std::vector<ElementGeometry> geometry_;
  QuadratureRule volume_rule_;
  Tabulation volume_tab_;
  QuadratureRule error_rule_;
  Tabulation error_tab_;
  QuadratureRule edge_rule_;
  QuadratureRule error_edge_rule_;
};

/// Coefficient vector of a function in the broken space.
class ComplexField {
 public:
  explicit ComplexField(std::shared_ptr<const DGSpace> space);
  ComplexField(std::shared_ptr<const DGSpace> space, Eigen::VectorXcd coeffs);

  const DGSpace& space() const { return *space_; }
  const std::shared_ptr<const DGSpace>& space_ptr() const { return space_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  Eigen::VectorXcd& coeffs() { return coeffs_; }
  int size() const { return static_cast<int>(coeffs_.size()); }

  auto element_coeffs(int element) const {
    return coeffs_.segment(space_->dof(element, 0), space_->dofs_per_element());
  }

  bool all_finite() const;

 private:
  std::shared_ptr<const DGSpace> space_;
  Eigen::VectorXcd coeffs_;
};

}  // namespace glcn
