#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "glcn/space.hpp"

namespace glcn {

/// Coefficients of u_t - (nu + i alpha) Lap u + (kappa + i beta)|u|^2 u
/// - gamma u = f, plus the final time.
struct GLParams {
  double nu = 1.0;
  double alpha = 1.0;
  double kappa = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double t_final = 1.0;

  Complex diffusion() const { return {nu, alpha}; }
  Complex nonlinearity() const { return {kappa, beta}; }
  void validate() const;
};

/// Optional replacements for individual coefficients of a built-in case.
struct ParamOverrides {
  std::optional<double> nu;
  std::optional<double> alpha;
  std::optional<double> kappa;
  std::optional<double> beta;
  std::optional<double> gamma;

  void apply(GLParams& params) const;
  bool empty() const { return !nu && !alpha && !kappa && !beta && !gamma; }
};

using SpaceTimeFunction = std::function<Complex(double, double, double)>;
using SpaceTimeGradient = std::function<ComplexGradient(double, double, double)>;

/// A closed-form solution vanishing on the boundary, with its time
/// derivative, gradient and Laplacian. `homogeneous` forces f = 0; the
/// solution then only supplies the initial datum.
struct ManufacturedCase {
  std::string name;
  Rect domain;
  GLParams params;
  SpaceTimeFunction u;
  SpaceTimeFunction u_t;
  SpaceTimeGradient gradient;
  SpaceTimeFunction laplacian;
  bool homogeneous = false;

  ScalarFunction u_at(double t) const;
  GradientFunction gradient_at(double t) const;
  ScalarFunction laplacian_at(double t) const;
};

/// f = u_t - (nu + i alpha) Lap u + (kappa + i beta)|u|^2 u - gamma u.
Complex source_term(const ManufacturedCase& c, double x, double y, double t);

/// Right-hand side actually used by the scheme: zero for homogeneous cases.
Complex forcing(const ManufacturedCase& c, double x, double y, double t);

/// example1: sin(pi x) sin(pi y) e^{i t^2} on (0,1)^2.
/// example2: (1+x)^4 (1-x)^4 (1+y)^4 (1-y)^4 e^{i t} on (-1,1)^2.
/// All coefficients equal to 1.
std::vector<ManufacturedCase> builtin_cases();
ManufacturedCase find_case(const std::string& name);

struct SineMode {
  int m = 1;
  int n = 1;
  Complex amplitude{1.0, 0.0};
};

/// Time-independent sum of Dirichlet sine modes over a rectangle, flagged
/// homogeneous: a smooth initial datum with a closed-form Laplacian.
ManufacturedCase sine_mode_case(std::string name, const Rect& domain,
                                const GLParams& params,
                                std::vector<SineMode> modes);

/// N(w) = |w|^2 w.
inline Complex cubic(Complex w) { return std::norm(w) * w; }

/// Real Jacobian d(Re N, Im N) / d(a, b) of N at w = a + ib.
Eigen::Matrix2d cubic_jacobian_block(Complex w);

/// Entries int |w|^2 w phi_i over the volume rule.
Eigen::VectorXcd cubic_weak(const ComplexField& w);

}  // namespace glcn
