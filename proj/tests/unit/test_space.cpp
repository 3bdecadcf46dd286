#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "glcn/error.hpp"
#include "glcn/model.hpp"
#include "glcn/norms.hpp"
#include "glcn/sipg.hpp"

using namespace glcn;

namespace {

std::shared_ptr<const DGSpace> unit_space(int n, int k) {
  auto mesh = std::make_shared<const Mesh>(build_structured({0, 1, 0, 1}, n));
  return std::make_shared<const DGSpace>(mesh, k);
}

}  // namespace

TEST(Space, DofLayout) {
  auto space = unit_space(3, 2);
  EXPECT_EQ(space->dofs_per_element(), 6);
  EXPECT_EQ(space->num_dofs(), 18 * 6);
  EXPECT_EQ(space->dof(4, 2), 26);
  EXPECT_THROW(ComplexField(space, Eigen::VectorXcd::Zero(5)), InvalidArgument);
}

TEST(Space, RuleDegrees) {
  for (int k = 1; k <= 3; ++k) {
    auto space = unit_space(1, k);
    EXPECT_GE(space->volume_rule().degree, 4 * k);
    EXPECT_GE(space->error_rule().degree, 4 * k + 2);
    EXPECT_GE(space->edge_rule().degree, 2 * k + 1);
    EXPECT_GE(space->error_edge_rule().degree, 4 * k + 2);
  }
}

TEST(Space, LocalP1MassMatrix) {
  auto space = unit_space(2, 1);
  const SparseOperator m = assemble_mass(*space);
  const double area = space->mesh().signed_area(0);
  const Eigen::MatrixXd dense = Eigen::MatrixXd(m.matrix()).topLeftCorner(3, 3);
  Eigen::Matrix3d expected;
  expected << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  expected *= area / 12.0;
  EXPECT_LT((dense - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Space, MassMatchesL2Norm) {
  auto space = unit_space(3, 2);
  Eigen::VectorXcd c = Eigen::VectorXcd::Random(space->num_dofs());
  const ComplexField u(space, c);
  const SparseOperator m = assemble_mass(*space);
  EXPECT_NEAR(std::sqrt(m.pairing(u, u).real()), l2_norm(u), 1e-13);
  EXPECT_NEAR(m.pairing(u, u).imag(), 0.0, 1e-13);
}

TEST(Space, InterpolationReproducesPolynomials) {
  auto space = unit_space(2, 3);
  const ScalarFunction p = [](double x, double y) {
    return Complex{x * x * y - 2.0 * y * y * y, x * y};
  };
  const ComplexField u = interpolate(space, p);
  EXPECT_LT(l2_error(u, p), 1e-13);
  EXPECT_NEAR(std::abs(evaluate(u, 3, {0.2, 0.3}) -
                       p(space->mesh().map_to_physical(3, {0.2, 0.3}).x,
                         space->mesh().map_to_physical(3, {0.2, 0.3}).y)),
              0.0, 1e-13);
  EXPECT_THROW(evaluate(u, 99, {0.2, 0.2}), InvalidArgument);
}

TEST(Space, GradientOfInterpolant) {
  auto space = unit_space(2, 2);
  const ComplexField u = interpolate(space, [](double x, double y) {
    return Complex{x * x + 3.0 * y, -x * y};
  });
  const int e = 5;
  const Point ref{0.25, 0.25};
  const Point x = space->mesh().map_to_physical(e, ref);
  const ComplexGradient g = evaluate_gradient(u, e, ref);
  EXPECT_NEAR(std::abs(g[0] - Complex{2.0 * x.x, -x.y}), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(g[1] - Complex{3.0, -x.x}), 0.0, 1e-12);
}

TEST(Norms, ExactSolutionNormIsOneHalf) {
  // ||sin(pi x) sin(pi y) e^{i t^2}|| = 1/2 for every t.
  auto space = unit_space(8, 2);
  const ManufacturedCase c = find_case("example1");
  const ComplexField zero(space);
  for (double t : {0.0, 0.7, 2.0}) EXPECT_NEAR(l2_error(zero, c.u_at(t)), 0.5, 1e-10);
}

TEST(Norms, DgNormOfConstantCountsBoundaryEdges) {
  // Only boundary jumps survive: sum over 4n edges of (1/h_E) |E| = 4n.
  for (int n : {1, 2, 5}) {
    auto space = unit_space(n, 1);
    const ComplexField one(space, Eigen::VectorXcd::Ones(space->num_dofs()));
    const DgNormParts parts = dg_norm_parts(one);
    EXPECT_NEAR(parts.volume, 0.0, 1e-14);
    EXPECT_NEAR(parts.interior_jumps, 0.0, 1e-14);
    EXPECT_NEAR(parts.boundary_jumps, 4.0 * n, 1e-12);
    EXPECT_NEAR(dg_norm(one), std::sqrt(4.0 * n), 1e-12);
  }
}

TEST(Norms, DgNormMatchesGramMatrix) {
  auto space = unit_space(3, 2);
  const ComplexField u(space, Eigen::VectorXcd::Random(space->num_dofs()));
  const SparseOperator d = assemble_dg_inner(*space);
  EXPECT_NEAR(std::sqrt(d.pairing(u, u).real()), dg_norm(u), 1e-12);
}

TEST(Norms, L4NormOfConstant) {
  auto space = unit_space(2, 1);
  const ComplexField u(space, Eigen::VectorXcd::Constant(space->num_dofs(), {0.0, 2.0}));
  EXPECT_NEAR(lp_norm(u, 4), 2.0, 1e-13);
  EXPECT_THROW(lp_norm(u, 3), InvalidArgument);
}

TEST(Norms, ErrorsVanishForExactPolynomial) {
  auto space = unit_space(3, 4);
  // x(1-x)y(1-y) lies in P_4 and vanishes on the boundary.
  const ScalarFunction u = [](double x, double y) {
    return Complex{x * (1 - x) * y * (1 - y), 0.0};
  };
  const GradientFunction g = [](double x, double y) {
    return ComplexGradient{(1 - 2 * x) * y * (1 - y), x * (1 - x) * (1 - 2 * y)};
  };
  const ComplexField ui = interpolate(space, u);
  EXPECT_LT(l2_error(ui, u), 1e-14);
  EXPECT_LT(dg_error(ui, u, g), 1e-12);
}

TEST(Norms, FieldCsvHeader) {
  auto space = unit_space(1, 1);
  const ComplexField u(space, Eigen::VectorXcd::Constant(6, {1.5, -2.0}));
  std::ostringstream os;
  write_field_csv(u, os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "dof,re,im");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "0,");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
}
