#include "glcn/sipg.hpp"

#include <cmath>
#include <vector>

#include "glcn/error.hpp"

namespace glcn {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_block(Triplets& out, int row0, int col0, const Eigen::MatrixXd& block) {
  for (int j = 0; j < block.cols(); ++j) {
    for (int i = 0; i < block.rows(); ++i) {
      out.emplace_back(row0 + i, col0 + j, block(i, j));
    }
  }
}

Eigen::MatrixXd local_mass(const DGSpace& space, int element) {
  const QuadratureRule& rule = space.volume_rule();
  const Tabulation& tab = space.volume_tab();
  const Eigen::VectorXd w =
      Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), rule.size());
  return space.geometry(element).det *
         (tab.values.transpose() * w.asDiagonal() * tab.values);
}

Eigen::MatrixXd local_gradient(const DGSpace& space, int element) {
  const QuadratureRule& rule = space.volume_rule();
  const Tabulation& tab = space.volume_tab();
  const int nb = space.dofs_per_element();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nb, nb);
  for (int q = 0; q < rule.size(); ++q) {
    const auto g = space.physical_gradients(element, tab, q);
    k.noalias() += rule.weights[q] * (g * g.transpose());
  }
  return space.geometry(element).det * k;
}

// Basis values and normal derivatives of one element side at a point of an
// edge.
void trace_basis(const DGSpace& space, const EdgeTrace& trace, double s,
                 const Point& normal, Eigen::Ref<Eigen::VectorXd> values,
                 Eigen::Ref<Eigen::VectorXd> normal_derivs) {
  const ReferenceBasis& basis = space.basis();
  const Point ref = trace.reference_point(s);
  basis.values(ref, std::span<double>(values.data(), values.size()));
  std::vector<std::array<double, 2>> g(basis.size());
  basis.gradients(ref, g);
  const Eigen::Matrix2d& inv_t = space.geometry(trace.element).inverse_transpose;
  const Eigen::Vector2d n(normal.x, normal.y);
  for (int i = 0; i < basis.size(); ++i) {
    normal_derivs[i] = (inv_t * Eigen::Vector2d(g[i][0], g[i][1])).dot(n);
  }
}

// Face terms of an interior penalty form; `consistency` scales the two
// {grad . n}[.] terms (1 for SIPG, 0 for the DG inner product).
void assemble_faces(const DGSpace& space, double consistency, double penalty,
                    Triplets& out) {
  const Mesh& mesh = space.mesh();
  const QuadratureRule& rule = space.edge_rule();
  const int nb = space.dofs_per_element();
  for (int ei = 0; ei < mesh.num_edges(); ++ei) {
    const Edge& edge = mesh.edges()[ei];
    const TracePair traces = mesh.trace_pairing(ei);
    const bool interior = traces.right.has_value();
    const int n = interior ? 2 * nb : nb;
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd jump(n);
    Eigen::VectorXd avg(n);
    for (int q = 0; q < rule.size(); ++q) {
      const double s = rule.points[q].x;
      const double w = rule.weights[q] * edge.length;
      trace_basis(space, traces.left, s, edge.normal, jump.head(nb),
                  avg.head(nb));
      if (interior) {
        trace_basis(space, *traces.right, s, edge.normal, jump.tail(nb),
                    avg.tail(nb));
        jump.tail(nb) *= -1.0;
        avg *= 0.5;
      }
      local.noalias() += w * (penalty / edge.length * jump * jump.transpose() -
                              consistency * (jump * avg.transpose() +
                                             avg * jump.transpose()));
    }
    const int l0 = space.dof(edge.left, 0);
    add_block(out, l0, l0, local.topLeftCorner(nb, nb));
    if (interior) {
      const int r0 = space.dof(edge.right, 0);
      add_block(out, l0, r0, local.topRightCorner(nb, nb));
      add_block(out, r0, l0, local.bottomLeftCorner(nb, nb));
      add_block(out, r0, r0, local.bottomRightCorner(nb, nb));
    }
  }
}

SparseOperator assemble_interior_penalty(const DGSpace& space,
                                         double consistency, double penalty) {
  const int nb = space.dofs_per_element();
  Triplets triplets;
  triplets.reserve(static_cast<std::size_t>(space.num_dofs()) * nb * 4);
  for (int e = 0; e < space.mesh().num_elements(); ++e) {
    add_block(triplets, space.dof(e, 0), space.dof(e, 0), local_gradient(space, e));
  }
  assemble_faces(space, consistency, penalty, triplets);
  SparseMatrix a(space.num_dofs(), space.num_dofs());
  a.setFromTriplets(triplets.begin(), triplets.end());
  return SparseOperator(std::move(a), true);
}

}  // namespace

void SipgConfig::validate() const {
  if (!(penalty > 0.0) || !std::isfinite(penalty)) {
    throw InvalidArgument("SIPG penalty must be positive and finite");
  }
  if (degree < 1) throw InvalidArgument("SIPG degree must be >= 1");
}

SparseOperator assemble_mass(const DGSpace& space) {
  const int nb = space.dofs_per_element();
  Triplets triplets;
  triplets.reserve(static_cast<std::size_t>(space.num_dofs()) * nb);
  for (int e = 0; e < space.mesh().num_elements(); ++e) {
    add_block(triplets, space.dof(e, 0), space.dof(e, 0), local_mass(space, e));
  }
  SparseMatrix m(space.num_dofs(), space.num_dofs());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SparseOperator(std::move(m), true);
}

SparseOperator assemble_stiffness(const DGSpace& space, const SipgConfig& cfg) {
  cfg.validate();
  return assemble_interior_penalty(space, 1.0, cfg.penalty);
}

SparseOperator assemble_dg_inner(const DGSpace& space) {
  return assemble_interior_penalty(space, 0.0, 1.0);
}

Eigen::VectorXcd assemble_load(const DGSpace& space, const ScalarFunction& f) {
  const Mesh& mesh = space.mesh();
  const QuadratureRule& rule = space.error_rule();
  const Tabulation& tab = space.error_tab();
  const int nb = space.dofs_per_element();
  Eigen::VectorXcd load(space.num_dofs());
  Eigen::VectorXcd fq(rule.size());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double det = space.geometry(e).det;
    for (int q = 0; q < rule.size(); ++q) {
      const Point x = mesh.map_to_physical(e, rule.points[q]);
      fq[q] = rule.weights[q] * det * f(x.x, x.y);
    }
    load.segment(space.dof(e, 0), nb) = tab.values.transpose() * fq;
  }
  return load;
}

RitzProjector::RitzProjector(std::shared_ptr<const DGSpace> space,
                             const SipgConfig& cfg, double tolerance)
    : space_(std::move(space)),
      stiffness_(assemble_stiffness(*space_, cfg)),
      solver_(tolerance) {
  solver_.factorize(stiffness_.matrix());
}

RitzProjector::RitzProjector(std::shared_ptr<const DGSpace> space,
                             SparseOperator stiffness, double tolerance)
    : space_(std::move(space)), stiffness_(std::move(stiffness)), solver_(tolerance) {
  solver_.factorize(stiffness_.matrix());
}

ComplexField RitzProjector::project(const ScalarFunction& laplacian) const {
  const Eigen::VectorXcd b = -assemble_load(*space_, laplacian);
  Eigen::VectorXcd r(b.size());
  r.real() = solver_.solve(b.real());
  r.imag() = solver_.solve(b.imag());
  const double bnorm = b.norm();
  last_residual_ =
      bnorm == 0.0 ? 0.0 : (b - stiffness_.apply(r)).norm() / bnorm;
  return ComplexField(space_, std::move(r));
}

ComplexField ritz_project(std::shared_ptr<const DGSpace> space,
                          const SipgConfig& cfg,
                          const ScalarFunction& laplacian) {
  return RitzProjector(std::move(space), cfg).project(laplacian);
}

}  // namespace glcn
