#pragma once

#include <optional>
#include <string>
#include <vector>

namespace glcn::cli {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteOptions {
  std::optional<double> penalty;  // default 10 (k + 1)^2 per degree
  double tau = 0.01;              // Jacobian check only
  double gamma = 1.0;             // Jacobian check only
  double newton_tol = 1e-11;
  int samples = 5;                // random initial data per decay suite
  unsigned long long seed = 1;
};

/// Triangle and line rules integrate monomials up to their declared degree.
SuiteResult quadrature_suite();

/// Entity counts, orientation, areas and outward boundary normals.
SuiteResult mesh_suite();

/// Stiffness symmetric to 1e-12 relative to its largest entry.
SuiteResult symmetry_suite(const SuiteOptions& opts);

/// min a_h(v, v) / ||v||_DG^2 > 0 over n in {2, 4}, k in {1, 2, 3}.
SuiteResult coercivity_suite(const SuiteOptions& opts);

/// Assembled Newton Jacobian against central differences of the residual.
SuiteResult jacobian_suite(const SuiteOptions& opts);

/// Real part of the scheme tested with the average:
/// (|u^n|^2 - |u^{n-1}|^2) / (2 tau) + nu a_h(w, w) + kappa |w|_4^4 - gamma |w|^2 = 0.
SuiteResult energy_suite(const SuiteOptions& opts);

/// gamma = -1, tau = 0.01, 100 steps, f = 0: |u^n| <= |u^{n-1}| + 1e-9.
SuiteResult decay_suite(const SuiteOptions& opts);

/// gamma = 1, tau = 0.5, f = 0: |u^n| <= e^{2 gamma T} |u^0| + 1e-8.
SuiteResult growth_suite(const SuiteOptions& opts);

/// Elliptic projection of sin(pi x) sin(pi y): orders k + 1 (L2) and k (DG)
/// within 0.2 over n in {4, 8, 16}.
SuiteResult ritz_suite(const SuiteOptions& opts);

std::vector<SuiteResult> run_all_suites(const SuiteOptions& opts);

}  // namespace glcn::cli
