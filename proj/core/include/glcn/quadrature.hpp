#pragma once

#include <vector>

#include "glcn/mesh.hpp"

namespace glcn {

/// Points and weights on the reference triangle {xi, eta >= 0, xi + eta <= 1}
/// (weights sum to 1/2) or on the unit interval (points stored in .x, weights
/// sum to 1). `degree` is the total polynomial degree integrated exactly.
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss-Legendre rule with m points on [0, 1]; exact to degree 2m - 1.
QuadratureRule gauss_legendre(int m);

/// Gauss rule on [0, 1] exact to at least the given degree.
QuadratureRule line_rule(int degree);

/// Collapsed (Duffy) tensor Gauss rule on the reference triangle, exact to
/// at least the given total degree.
QuadratureRule triangle_rule(int degree);

}  // namespace glcn
