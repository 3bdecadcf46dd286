#include "glcn/model.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "glcn/error.hpp"

namespace glcn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

ManufacturedCase example1() {
  ManufacturedCase c;
  c.name = "example1";
  c.domain = {0.0, 1.0, 0.0, 1.0};
  c.params = GLParams{};
  c.u = [](double x, double y, double t) {
    return std::sin(kPi * x) * std::sin(kPi * y) * std::exp(kI * (t * t));
  };
  c.u_t = [](double x, double y, double t) {
    return 2.0 * t * kI * std::sin(kPi * x) * std::sin(kPi * y) *
           std::exp(kI * (t * t));
  };
  c.gradient = [](double x, double y, double t) {
    const Complex phase = kPi * std::exp(kI * (t * t));
    return ComplexGradient{std::cos(kPi * x) * std::sin(kPi * y) * phase,
                           std::sin(kPi * x) * std::cos(kPi * y) * phase};
  };
  c.laplacian = [](double x, double y, double t) {
    return -2.0 * kPi * kPi * std::sin(kPi * x) * std::sin(kPi * y) *
           std::exp(kI * (t * t));
  };
  return c;
}

// p(x) = (1+x)^4 (1-x)^4 = (1 - x^2)^4 and its derivatives.
double bump(double x) {
  const double s = 1.0 - x * x;
  return s * s * s * s;
}
double bump_d1(double x) {
  const double s = 1.0 - x * x;
  return -8.0 * x * s * s * s;
}
double bump_d2(double x) {
  const double s = 1.0 - x * x;
  return -8.0 * s * s * s + 48.0 * x * x * s * s;
}

ManufacturedCase example2() {
  ManufacturedCase c;
  c.name = "example2";
  c.domain = {-1.0, 1.0, -1.0, 1.0};
  c.params = GLParams{};
  c.u = [](double x, double y, double t) {
    return bump(x) * bump(y) * std::exp(kI * t);
  };
  c.u_t = [](double x, double y, double t) {
    return kI * bump(x) * bump(y) * std::exp(kI * t);
  };
  c.gradient = [](double x, double y, double t) {
    const Complex phase = std::exp(kI * t);
    return ComplexGradient{bump_d1(x) * bump(y) * phase,
                           bump(x) * bump_d1(y) * phase};
  };
  c.laplacian = [](double x, double y, double t) {
    return (bump_d2(x) * bump(y) + bump(x) * bump_d2(y)) * std::exp(kI * t);
  };
  return c;
}

}  // namespace

void GLParams::validate() const {
  for (double v : {nu, alpha, kappa, beta, gamma, t_final}) {
    if (!std::isfinite(v)) throw InvalidArgument("model parameters must be finite");
  }
  if (!(nu > 0.0)) throw InvalidArgument("nu must be positive");
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  if (!(t_final > 0.0)) throw InvalidArgument("final time must be positive");
}

void ParamOverrides::apply(GLParams& params) const {
  if (nu) params.nu = *nu;
  if (alpha) params.alpha = *alpha;
  if (kappa) params.kappa = *kappa;
  if (beta) params.beta = *beta;
  if (gamma) params.gamma = *gamma;
}

ScalarFunction ManufacturedCase::u_at(double t) const {
  return [f = u, t](double x, double y) { return f(x, y, t); };
}

GradientFunction ManufacturedCase::gradient_at(double t) const {
  return [f = gradient, t](double x, double y) { return f(x, y, t); };
}

ScalarFunction ManufacturedCase::laplacian_at(double t) const {
  return [f = laplacian, t](double x, double y) { return f(x, y, t); };
}

Complex source_term(const ManufacturedCase& c, double x, double y, double t) {
  const GLParams& p = c.params;
  const Complex u = c.u(x, y, t);
  return c.u_t(x, y, t) - p.diffusion() * c.laplacian(x, y, t) +
         p.nonlinearity() * cubic(u) - p.gamma * u;
}

Complex forcing(const ManufacturedCase& c, double x, double y, double t) {
  return c.homogeneous ? Complex{} : source_term(c, x, y, t);
}

std::vector<ManufacturedCase> builtin_cases() { return {example1(), example2()}; }

ManufacturedCase find_case(const std::string& name) {
  for (auto& c : builtin_cases()) {
    if (c.name == name) return c;
  }
  throw InvalidArgument("unknown case '" + name + "'");
}

ManufacturedCase sine_mode_case(std::string name, const Rect& domain,
                                const GLParams& params,
                                std::vector<SineMode> modes) {
  domain.validate();
  ManufacturedCase c;
  c.name = std::move(name);
  c.domain = domain;
  c.params = params;
  c.homogeneous = true;
  const double lx = domain.width();
  const double ly = domain.height();
  const double x0 = domain.x0;
  const double y0 = domain.y0;
  auto shared = std::make_shared<const std::vector<SineMode>>(std::move(modes));
  c.u = [=](double x, double y, double) {
    Complex sum{};
    for (const SineMode& m : *shared) {
      sum += m.amplitude * std::sin(m.m * kPi * (x - x0) / lx) *
             std::sin(m.n * kPi * (y - y0) / ly);
    }
    return sum;
  };
  c.u_t = [](double, double, double) { return Complex{}; };
  c.gradient = [=](double x, double y, double) {
    ComplexGradient g{0.0, 0.0};
    for (const SineMode& m : *shared) {
      const double kx = m.m * kPi / lx;
      const double ky = m.n * kPi / ly;
      g[0] += m.amplitude * kx * std::cos(kx * (x - x0)) * std::sin(ky * (y - y0));
      g[1] += m.amplitude * ky * std::sin(kx * (x - x0)) * std::cos(ky * (y - y0));
    }
    return g;
  };
  c.laplacian = [=](double x, double y, double) {
    Complex sum{};
    for (const SineMode& m : *shared) {
      const double kx = m.m * kPi / lx;
      const double ky = m.n * kPi / ly;
      sum -= (kx * kx + ky * ky) * m.amplitude * std::sin(kx * (x - x0)) *
             std::sin(ky * (y - y0));
    }
    return sum;
  };
  return c;
}

Eigen::Matrix2d cubic_jacobian_block(Complex w) {
  const double a = w.real();
  const double b = w.imag();
  Eigen::Matrix2d j;
  j << 3.0 * a * a + b * b, 2.0 * a * b, 2.0 * a * b, a * a + 3.0 * b * b;
  return j;
}

Eigen::VectorXcd cubic_weak(const ComplexField& w) {
  const DGSpace& space = w.space();
  const QuadratureRule& rule = space.volume_rule();
  const Tabulation& tab = space.volume_tab();
  const int nb = space.dofs_per_element();
  Eigen::VectorXcd out(space.num_dofs());
  Eigen::VectorXcd nq(rule.size());
  for (int e = 0; e < space.mesh().num_elements(); ++e) {
    const Eigen::VectorXcd wq = tab.values * w.element_coeffs(e);
    const double det = space.geometry(e).det;
    for (int q = 0; q < rule.size(); ++q) nq[q] = rule.weights[q] * det * cubic(wq[q]);
    out.segment(space.dof(e, 0), nb) = tab.values.transpose() * nq;
  }
  return out;
}

}  // namespace glcn
