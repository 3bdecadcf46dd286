#include "glcn/norms.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "glcn/error.hpp"

namespace glcn {

namespace {

void check_element(const ComplexField& field, int element) {
  if (element < 0 || element >= field.space().mesh().num_elements()) {
    throw InvalidArgument("element index " + std::to_string(element) +
                          " out of range");
  }
}

// Calls visit(edge, 1 / h_E, weight * h_E, jump) for every edge quadrature
// point, where jump = (u - exact)|_left - (u - exact)|_right on interior
// edges and (u - exact)|_K on boundary edges.
template <typename Visit>
void for_each_jump(const ComplexField& field, const QuadratureRule& rule,
                   const ScalarFunction* exact, Visit&& visit) {
  const DGSpace& space = field.space();
  const Mesh& mesh = space.mesh();
  const ReferenceBasis& basis = space.basis();
  Eigen::VectorXd phi(basis.size());
  for (int ei = 0; ei < mesh.num_edges(); ++ei) {
    const Edge& edge = mesh.edges()[ei];
    const TracePair traces = mesh.trace_pairing(ei);
    for (int q = 0; q < rule.size(); ++q) {
      const double s = rule.points[q].x;
      auto side_value = [&](const EdgeTrace& trace) {
        const Point ref = trace.reference_point(s);
        basis.values(ref, std::span<double>(phi.data(), phi.size()));
        Complex v = phi.cast<Complex>().dot(field.element_coeffs(trace.element));
        if (exact != nullptr) {
          const Point x = mesh.map_to_physical(trace.element, ref);
          v -= (*exact)(x.x, x.y);
        }
        return v;
      };
      Complex jump = side_value(traces.left);
      if (traces.right) jump -= side_value(*traces.right);
      visit(edge, rule.weights[q] * edge.length, jump);
    }
  }
}

}  // namespace

Complex evaluate(const ComplexField& field, int element, Point ref) {
  check_element(field, element);
  const Eigen::VectorXd phi = field.space().basis().values(ref);
  return phi.cast<Complex>().dot(field.element_coeffs(element));
}

ComplexGradient evaluate_gradient(const ComplexField& field, int element,
                                  Point ref) {
  check_element(field, element);
  const DGSpace& space = field.space();
  const int nb = space.dofs_per_element();
  std::vector<std::array<double, 2>> g(nb);
  space.basis().gradients(ref, g);
  const Eigen::Matrix2d& inv_t = space.geometry(element).inverse_transpose;
  const auto c = field.element_coeffs(element);
  ComplexGradient out{0.0, 0.0};
  for (int i = 0; i < nb; ++i) {
    const Eigen::Vector2d gp = inv_t * Eigen::Vector2d(g[i][0], g[i][1]);
    out[0] += gp[0] * c[i];
    out[1] += gp[1] * c[i];
  }
  return out;
}

ComplexField interpolate(std::shared_ptr<const DGSpace> space,
                         const ScalarFunction& f) {
  ComplexField field(space);
  const Mesh& mesh = space->mesh();
  const auto& nodes = space->basis().nodes();
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
      const Point x = mesh.map_to_physical(e, nodes[i]);
      field.coeffs()[space->dof(e, i)] = f(x.x, x.y);
    }
  }
  return field;
}

double l2_norm(const ComplexField& field) {
  const DGSpace& space = field.space();
  const QuadratureRule& rule = space.volume_rule();
  const Tabulation& tab = space.volume_tab();
  double sum = 0.0;
  for (int e = 0; e < space.mesh().num_elements(); ++e) {
    const Eigen::VectorXcd u = tab.values * field.element_coeffs(e);
    double local = 0.0;
    for (int q = 0; q < rule.size(); ++q) local += rule.weights[q] * std::norm(u[q]);
    sum += local * space.geometry(e).det;
  }
  return std::sqrt(sum);
}

double lp_norm(const ComplexField& field, int p) {
  if (p != 4) throw InvalidArgument("lp_norm supports p = 4 only");
  const DGSpace& space = field.space();
  const QuadratureRule& rule = space.volume_rule();
  const Tabulation& tab = space.volume_tab();
  double sum = 0.0;
  for (int e = 0; e < space.mesh().num_elements(); ++e) {
    const Eigen::VectorXcd u = tab.values * field.element_coeffs(e);
    double local = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const double m2 = std::norm(u[q]);
      local += rule.weights[q] * m2 * m2;
    }
    sum += local * space.geometry(e).det;
  }
  return std::pow(sum, 0.25);
}

DgNormParts dg_norm_parts(const ComplexField& field) {
  const DGSpace& space = field.space();
  const QuadratureRule& rule = space.volume_rule();
  const Tabulation& tab = space.volume_tab();
  DgNormParts parts;
  for (int e = 0; e < space.mesh().num_elements(); ++e) {
    const auto c = field.element_coeffs(e);
    double local = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const auto grads = space.physical_gradients(e, tab, q);
      const Complex gx = grads.col(0).cast<Complex>().dot(c);
      const Complex gy = grads.col(1).cast<Complex>().dot(c);
      local += rule.weights[q] * (std::norm(gx) + std::norm(gy));
    }
    parts.volume += local * space.geometry(e).det;
  }
  for_each_jump(field, space.edge_rule(), nullptr,
                [&](const Edge& edge, double w, Complex jump) {
                  const double term = w / edge.length * std::norm(jump);
                  (edge.is_boundary() ? parts.boundary_jumps
                                      : parts.interior_jumps) += term;
                });
  return parts;
}

double dg_norm(const ComplexField& field) {
  return std::sqrt(dg_norm_parts(field).total());
}

double l2_error(const ComplexField& field, const ScalarFunction& exact) {
  const DGSpace& space = field.space();
  const Mesh& mesh = space.mesh();
  const QuadratureRule& rule = space.error_rule();
  const Tabulation& tab = space.error_tab();
  double sum = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Eigen::VectorXcd u = tab.values * field.element_coeffs(e);
    double local = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Point x = mesh.map_to_physical(e, rule.points[q]);
      local += rule.weights[q] * std::norm(exact(x.x, x.y) - u[q]);
    }
    sum += local * space.geometry(e).det;
  }
  return std::sqrt(sum);
}

double dg_error(const ComplexField& field, const ScalarFunction& exact,
                const GradientFunction& exact_gradient) {
  const DGSpace& space = field.space();
  const Mesh& mesh = space.mesh();
  const QuadratureRule& rule = space.error_rule();
  const Tabulation& tab = space.error_tab();
  double sum = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto c = field.element_coeffs(e);
    double local = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const auto grads = space.physical_gradients(e, tab, q);
      const Point x = mesh.map_to_physical(e, rule.points[q]);
      const ComplexGradient g = exact_gradient(x.x, x.y);
      local += rule.weights[q] * (std::norm(g[0] - grads.col(0).cast<Complex>().dot(c)) +
                                  std::norm(g[1] - grads.col(1).cast<Complex>().dot(c)));
    }
    sum += local * space.geometry(e).det;
  }
  for_each_jump(field, space.error_edge_rule(), &exact,
                [&](const Edge& edge, double w, Complex jump) {
                  sum += w / edge.length * std::norm(jump);
                });
  return std::sqrt(sum);
}

void write_field_csv(const ComplexField& field, std::ostream& os) {
  const auto precision = os.precision(17);
  os << "dof,re,im\n";
  for (int i = 0; i < field.size(); ++i) {
    os << i << ',' << field.coeffs()[i].real() << ',' << field.coeffs()[i].imag()
       << '\n';
  }
  os.precision(precision);
}

}  // namespace glcn
