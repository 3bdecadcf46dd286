#pragma once

#include <iosfwd>

#include "glcn/space.hpp"

namespace glcn {

Complex evaluate(const ComplexField& field, int element, Point ref);
ComplexGradient evaluate_gradient(const ComplexField& field, int element,
                                  Point ref);

/// Nodal interpolation at the principal lattice of each element.
ComplexField interpolate(std::shared_ptr<const DGSpace> space,
                         const ScalarFunction& f);

double l2_norm(const ComplexField& field);

/// (sum_K int_K |u|^p)^(1/p); only p = 4 is supported.
double lp_norm(const ComplexField& field, int p);

/// Squared contributions to the DG norm, kept apart for diagnostics.
struct DgNormParts {
  double volume = 0.0;           // sum_K int_K |grad u|^2
  double interior_jumps = 0.0;   // sum over interior edges of (1/h_E) int |[u]|^2
  double boundary_jumps = 0.0;   // same over boundary edges, [u] = u|_K

  double total() const { return volume + interior_jumps + boundary_jumps; }
};

DgNormParts dg_norm_parts(const ComplexField& field);
double dg_norm(const ComplexField& field);

/// ||u - u_h|| with the elevated error rule.
double l2_error(const ComplexField& field, const ScalarFunction& exact);

/// ||u - u_h||_DG with the elevated rules; the exact solution's gradient is
/// needed for the volume term, its trace for the jump terms.
double dg_error(const ComplexField& field, const ScalarFunction& exact,
                const GradientFunction& exact_gradient);

/// CSV dump: dof,re,im.
void write_field_csv(const ComplexField& field, std::ostream& os);

}  // namespace glcn
