#include "glcn/space.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "glcn/error.hpp"

namespace glcn {

DGSpace::DGSpace(std::shared_ptr<const Mesh> mesh, int degree)
    : mesh_(std::move(mesh)),
      basis_(degree),
      volume_rule_(triangle_rule(std::max(4 * degree, 2))),
      error_rule_(triangle_rule(4 * degree + 2)),
      edge_rule_(line_rule(2 * degree + 1)),
      error_edge_rule_(line_rule(4 * degree + 2)) {
  if (!mesh_) throw InvalidArgument("DGSpace needs a mesh");
  volume_tab_ = tabulate(basis_, volume_rule_.points);
  error_tab_ = tabulate(basis_, error_rule_.points);

  geometry_.reserve(mesh_->num_elements());
  for (int e = 0; e < mesh_->num_elements(); ++e) {
    const Point a = mesh_->vertex(e, 0);
    const Point b = mesh_->vertex(e, 1);
    const Point c = mesh_->vertex(e, 2);
    ElementGeometry g;
    g.origin = a;
    g.jacobian << b.x - a.x, c.x - a.x, b.y - a.y, c.y - a.y;
    g.det = g.jacobian.determinant();
    g.inverse_transpose = g.jacobian.inverse().transpose();
    geometry_.push_back(g);
  }
}

Eigen::Matrix<double, Eigen::Dynamic, 2> DGSpace::physical_gradients(
    int element, const Tabulation& tab, int q) const {
  const Eigen::Matrix2d& inv_t = geometry_[element].inverse_transpose;
  Eigen::Matrix<double, Eigen::Dynamic, 2> ref(dofs_per_element(), 2);
  ref.col(0) = tab.d_xi.row(q).transpose();
  ref.col(1) = tab.d_eta.row(q).transpose();
  return ref * inv_t.transpose();
}

ComplexField::ComplexField(std::shared_ptr<const DGSpace> space)
    : space_(std::move(space)) {
  if (!space_) throw InvalidArgument("ComplexField needs a space");
  coeffs_ = Eigen::VectorXcd::Zero(space_->num_dofs());
}

ComplexField::ComplexField(std::shared_ptr<const DGSpace> space,
                           Eigen::VectorXcd coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (!space_) throw InvalidArgument("ComplexField needs a space");
  if (coeffs_.size() != space_->num_dofs()) {
    throw InvalidArgument("coefficient vector length does not match the space");
  }
}

bool ComplexField::all_finite() const {
  return coeffs_.real().allFinite() && coeffs_.imag().allFinite();
}

}  // namespace glcn
