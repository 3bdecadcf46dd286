#include "glcn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "glcn/error.hpp"

namespace glcn {

QuadratureRule gauss_legendre(int m) {
  if (m < 1) throw InvalidArgument("Gauss-Legendre rule needs m >= 1");
  QuadratureRule rule;
  rule.degree = 2 * m - 1;
  rule.points.resize(m);
  rule.weights.resize(m);
  // Newton iteration on P_m over [-1, 1], then shift to [0, 1].
  auto legendre = [m](double z) {
    double p0 = 1.0;
    double p1 = z;
    for (int j = 2; j <= m; ++j) {
      const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, m * (z * p1 - p0) / (z * z - 1.0)};
  };
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(z);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double dp = legendre(z).second;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.points[i].x = 0.5 * (1.0 - z);
    rule.points[m - 1 - i].x = 0.5 * (1.0 + z);
    rule.weights[i] = 0.5 * w;
    rule.weights[m - 1 - i] = 0.5 * w;
  }
  if (m % 2 == 1) rule.points[m / 2].x = 0.5;
  return rule;
}

QuadratureRule line_rule(int degree) {
  const int m = std::max(1, (degree + 2) / 2);
  return gauss_legendre(m);
}

QuadratureRule triangle_rule(int degree) {
  // xi = u, eta = (1 - u) v with Jacobian (1 - u): the u-direction sees one
  // extra degree.
  const int m = std::max(1, (degree + 3) / 2);
  const QuadratureRule g = gauss_legendre(m);
  QuadratureRule rule;
  rule.degree = 2 * m - 2;
  rule.points.reserve(static_cast<std::size_t>(m) * m);
  rule.weights.reserve(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i) {
    const double u = g.points[i].x;
    for (int j = 0; j < m; ++j) {
      const double v = g.points[j].x;
      rule.points.push_back({u, (1.0 - u) * v});
      rule.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

}  // namespace glcn
