#include "glcn_cli/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "glcn/harness.hpp"
#include "glcn/norms.hpp"
#include "glcn/quadrature.hpp"

namespace glcn::cli {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::shared_ptr<const DGSpace> make_space(const Rect& domain, int n, int k) {
  auto mesh = std::make_shared<const Mesh>(build_structured(domain, n));
  return std::make_shared<const DGSpace>(mesh, k);
}

const Rect kUnitSquare{0.0, 1.0, 0.0, 1.0};

// Smooth random datum: a few low Dirichlet modes with decaying amplitudes.
ManufacturedCase random_case(std::mt19937_64& rng, const GLParams& params) {
  std::uniform_int_distribution<int> mode(1, 4);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::vector<SineMode> modes;
  for (int i = 0; i < 3; ++i) {
    SineMode m;
    m.m = mode(rng);
    m.n = mode(rng);
    const double decay = 2.0 / (m.m * m.m + m.n * m.n);
    m.amplitude = Complex{amp(rng), amp(rng)} * decay;
    modes.push_back(m);
  }
  return sine_mode_case("random", kUnitSquare, params, std::move(modes));
}

std::vector<double> norm_history(const ManufacturedCase& model, double tau,
                                 double newton_tol) {
  auto space = make_space(model.domain, 6, 2);
  StepConfig cfg;
  cfg.tau = tau;
  cfg.newton_tol = newton_tol;
  std::vector<double> norms;
  RunOptions options;
  options.observers.push_back(
      [&norms](int, double, const ComplexField& u) { norms.push_back(l2_norm(u)); });
  run(space, SipgConfig::with_default_penalty(2), model, cfg, options);
  return norms;
}

}  // namespace

SuiteResult quadrature_suite() {
  SuiteResult r{"quadrature", true, ""};
  double worst = 0.0;
  for (int d = 0; d <= 16; ++d) {
    const QuadratureRule tri = triangle_rule(d);
    if (tri.degree < d) r.passed = false;
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; a + b <= d; ++b) {
        double sum = 0.0;
        for (int q = 0; q < tri.size(); ++q) {
          sum += tri.weights[q] * std::pow(tri.points[q].x, a) *
                 std::pow(tri.points[q].y, b);
        }
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        worst = std::max(worst, std::abs(sum - exact) / exact);
      }
    }
    const QuadratureRule line = line_rule(d);
    if (line.degree < d) r.passed = false;
    for (int p = 0; p <= d; ++p) {
      double sum = 0.0;
      for (int q = 0; q < line.size(); ++q) {
        sum += line.weights[q] * std::pow(line.points[q].x, p);
      }
      worst = std::max(worst, std::abs(sum - 1.0 / (p + 1)) * (p + 1));
    }
  }
  if (worst > 1e-12) r.passed = false;
  r.detail = "max relative monomial error " + fmt("%.2e", worst) + " up to degree 16";
  return r;
}

SuiteResult mesh_suite() {
  SuiteResult r{"mesh", true, ""};
  std::ostringstream why;
  for (const Rect& domain : {kUnitSquare, Rect{-1.0, 1.0, -1.0, 1.0}}) {
    for (int n = 1; n <= 6; ++n) {
      const Mesh mesh = build_structured(domain, n);
      const int v = mesh.num_vertices();
      const int e = mesh.num_edges();
      const int t = mesh.num_elements();
      bool ok = v == (n + 1) * (n + 1) && t == 2 * n * n &&
                e == 3 * n * n + 2 * n && v - e + t == 1 &&
                mesh.num_boundary_edges() == 4 * n;
      double area = 0.0;
      for (int k = 0; k < t; ++k) {
        ok = ok && mesh.signed_area(k) > 0.0;
        area += mesh.signed_area(k);
      }
      ok = ok && std::abs(area - domain.area()) <= 1e-12 * domain.area();
      for (const Edge& edge : mesh.edges()) {
        ok = ok && std::abs(std::hypot(edge.normal.x, edge.normal.y) - 1.0) < 1e-14;
        if (!edge.is_boundary()) continue;
        const Point a = mesh.vertices()[edge.vertices[0]];
        const Point b = mesh.vertices()[edge.vertices[1]];
        const double step = 1e-3 * edge.length;
        const double x = 0.5 * (a.x + b.x) + step * edge.normal.x;
        const double y = 0.5 * (a.y + b.y) + step * edge.normal.y;
        const bool outside =
            x < domain.x0 || x > domain.x1 || y < domain.y0 || y > domain.y1;
        ok = ok && outside;
      }
      if (!ok) {
        r.passed = false;
        why << " failed at n=" << n;
      }
    }
  }
  r.detail = r.passed ? "counts, orientation, area and normals for n = 1..6"
                      : "mesh checks" + why.str();
  return r;
}

SuiteResult symmetry_suite(const SuiteOptions& opts) {
  SuiteResult r{"sipg-symmetry", true, ""};
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    for (int n : {2, 4}) {
      auto space = make_space(kUnitSquare, n, k);
      const SparseOperator a = assemble_stiffness(
          *space, {opts.penalty.value_or(default_penalty(k)), k});
      const double scale = a.matrix().coeffs().cwiseAbs().maxCoeff();
      worst = std::max(worst, a.max_asymmetry() / scale);
    }
  }
  r.passed = worst <= 1e-12;
  r.detail = "max |A - A^T| / max |A| = " + fmt("%.2e", worst);
  return r;
}

SuiteResult coercivity_suite(const SuiteOptions& opts) {
  SuiteResult r{"coercivity", true, ""};
  double smallest = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 3; ++k) {
    for (int n : {2, 4}) {
      auto space = make_space(kUnitSquare, n, k);
      const Eigen::MatrixXd a =
          assemble_stiffness(*space, {opts.penalty.value_or(default_penalty(k)), k})
              .matrix();
      const Eigen::MatrixXd d = assemble_dg_inner(*space).matrix();
      const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(
          0.5 * (a + a.transpose()), d, Eigen::EigenvaluesOnly);
      smallest = std::min(smallest, eig.eigenvalues().minCoeff());
    }
  }
  r.passed = smallest > 0.0;
  r.detail = "min a_h(v,v) / |v|_DG^2 = " + fmt("%.4e", smallest) +
             (opts.penalty ? " at lambda " + fmt("%g", *opts.penalty)
                           : std::string(" at default lambda"));
  return r;
}

SuiteResult jacobian_suite(const SuiteOptions& opts) {
  SuiteResult r{"jacobian-fd", true, ""};
  ManufacturedCase model = find_case("example1");
  model.params.gamma = opts.gamma;
  auto space = make_space(model.domain, 4, 2);
  StepConfig cfg;
  cfg.tau = opts.tau;
  CrankNicolsonStepper stepper(space, SipgConfig::with_default_penalty(2), model, cfg);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto random_vector = [&](int size) {
    Eigen::VectorXcd v(size);
    for (int i = 0; i < size; ++i) v[i] = {uni(rng), uni(rng)};
    return v;
  };
  const int n = space->num_dofs();
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const Eigen::VectorXcd w = random_vector(n);
    const Eigen::VectorXcd u_prev = random_vector(n);
    const Eigen::VectorXcd f = stepper.load(0.0);
    const Eigen::VectorXd d = pack(random_vector(n));
    const Eigen::VectorXd jd = stepper.jacobian(w) * d;
    const double eps = 1e-6;
    const Eigen::VectorXd x = pack(w);
    const Eigen::VectorXd fd =
        (pack(stepper.residual(unpack(x + eps * d), u_prev, f)) -
         pack(stepper.residual(unpack(x - eps * d), u_prev, f))) /
        (2.0 * eps);
    worst = std::max(worst, (jd - fd).norm() / jd.norm());
  }
  r.passed = worst <= 1e-5;
  r.detail = "relative |J d - FD| = " + fmt("%.2e", worst) + " at tau " +
             fmt("%g", opts.tau) + ", gamma " + fmt("%g", opts.gamma);
  return r;
}

SuiteResult energy_suite(const SuiteOptions& opts) {
  SuiteResult r{"energy-identity", true, ""};
  std::mt19937_64 rng(opts.seed + 17);
  const double tau = 0.01;
  double worst = 0.0;
  for (double gamma : {-1.0, 0.0, 1.0}) {
    GLParams params;
    params.gamma = gamma;
    params.t_final = 5 * tau;
    const ManufacturedCase model = random_case(rng, params);
    auto space = make_space(model.domain, 6, 2);
    const SipgConfig sipg = SipgConfig::with_default_penalty(2);
    const SparseOperator stiffness = assemble_stiffness(*space, sipg);
    StepConfig cfg;
    cfg.tau = tau;
    cfg.newton_tol = opts.newton_tol;
    CrankNicolsonStepper stepper(space, stiffness, assemble_mass(*space), model, cfg);
    ComplexField u = RitzProjector(space, stiffness).project(model.laplacian_at(0.0));
    for (int n = 1; n <= 5; ++n) {
      const auto [next, report] = stepper.step(u, (n - 1) * tau, n);
      const ComplexField w(space, 0.5 * (next.coeffs() + u.coeffs()));
      const double un = l2_norm(next);
      const double up = l2_norm(u);
      const double ww = l2_norm(w);
      const double aww = stiffness.pairing(w, w).real();
      const double l4 = std::pow(lp_norm(w, 4), 4);
      const double p = model.params.nu;
      const double k = model.params.kappa;
      const double lhs = (un * un - up * up) / (2.0 * tau) + p * aww + k * l4 -
                         gamma * ww * ww;
      const double scale = (un * un + up * up) / (2.0 * tau) + p * std::abs(aww) +
                           k * l4 + std::abs(gamma) * ww * ww;
      worst = std::max(worst, std::abs(lhs) / (opts.newton_tol * scale));
      u = next;
    }
  }
  r.passed = worst <= 100.0;
  r.detail = "max |identity| / (newton_tol * scale) = " + fmt("%.3g", worst);
  return r;
}

SuiteResult decay_suite(const SuiteOptions& opts) {
  SuiteResult r{"decay", true, ""};
  std::mt19937_64 rng(opts.seed + 101);
  GLParams params;
  params.gamma = -1.0;
  params.t_final = 1.0;  // 100 steps of 0.01
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < opts.samples; ++s) {
    const std::vector<double> norms =
        norm_history(random_case(rng, params), 0.01, opts.newton_tol);
    for (std::size_t n = 1; n < norms.size(); ++n) {
      worst = std::max(worst, norms[n] - norms[n - 1]);
    }
  }
  r.passed = worst <= 1e-9;
  r.detail = std::to_string(opts.samples) +
             " samples, max |u^n| - |u^{n-1}| = " + fmt("%.3e", worst);
  return r;
}

SuiteResult growth_suite(const SuiteOptions& opts) {
  SuiteResult r{"growth", true, ""};
  std::mt19937_64 rng(opts.seed + 202);
  GLParams params;
  params.gamma = 1.0;
  params.t_final = 2.0;  // 4 steps of 0.5
  const double bound_factor = std::exp(2.0 * params.gamma * params.t_final);
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < opts.samples; ++s) {
    const std::vector<double> norms =
        norm_history(random_case(rng, params), 0.5, opts.newton_tol);
    for (double v : norms) worst = std::max(worst, v - bound_factor * norms.front());
  }
  r.passed = worst <= 1e-8;
  r.detail = std::to_string(opts.samples) + " samples, max |u^n| - e^{2 gamma T}|u^0| = " +
             fmt("%.3e", worst);
  return r;
}

SuiteResult ritz_suite(const SuiteOptions& opts) {
  SuiteResult r{"ritz-orders", true, ""};
  constexpr double pi = std::numbers::pi;
  const ScalarFunction u = [](double x, double y) {
    return Complex{std::sin(pi * x) * std::sin(pi * y), 0.0};
  };
  const GradientFunction grad = [](double x, double y) {
    return ComplexGradient{pi * std::cos(pi * x) * std::sin(pi * y),
                           pi * std::sin(pi * x) * std::cos(pi * y)};
  };
  const ScalarFunction lap = [](double x, double y) {
    return Complex{-2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y), 0.0};
  };
  std::ostringstream detail;
  for (int k = 1; k <= 3; ++k) {
    const std::vector<int> cells{4, 8, 16};
    std::vector<double> l2;
    std::vector<double> dg;
    for (int n : cells) {
      auto space = make_space(kUnitSquare, n, k);
      const ComplexField rh = ritz_project(
          space, {opts.penalty.value_or(default_penalty(k)), k}, lap);
      l2.push_back(l2_error(rh, u));
      dg.push_back(dg_error(rh, u, grad));
    }
    detail << "k=" << k << ":";
    for (std::size_t i = 1; i < cells.size(); ++i) {
      const double ratio = static_cast<double>(cells[i]) / cells[i - 1];
      const double ol2 = std::log(l2[i - 1] / l2[i]) / std::log(ratio);
      const double odg = std::log(dg[i - 1] / dg[i]) / std::log(ratio);
      if (std::abs(ol2 - (k + 1)) > 0.2 || std::abs(odg - k) > 0.2) r.passed = false;
      detail << " " << fmt("%.3f", ol2) << "/" << fmt("%.3f", odg);
    }
    if (k < 3) detail << ";";
    detail << (k < 3 ? " " : "");
  }
  r.detail = "L2/DG orders " + detail.str();
  return r;
}

std::vector<SuiteResult> run_all_suites(const SuiteOptions& opts) {
  return {quadrature_suite(),   mesh_suite(),         symmetry_suite(opts),
          coercivity_suite(opts), jacobian_suite(opts), energy_suite(opts),
          decay_suite(opts),    growth_suite(opts),   ritz_suite(opts)};
}

}  // namespace glcn::cli
