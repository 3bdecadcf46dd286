#include <cmath>

#include <gtest/gtest.h>

#include "glcn/newton.hpp"

using namespace glcn;

namespace {

// R(x) = (x0^2 - 2, x1^3 - 3 x1 - 1) with its exact Jacobian.
Eigen::VectorXd residual(const Eigen::VectorXd& x) {
  Eigen::VectorXd r(2);
  r << x[0] * x[0] - 2.0, x[1] * x[1] * x[1] - 3.0 * x[1] - 1.0;
  return r;
}

Eigen::VectorXd solve(const Eigen::VectorXd& x, const Eigen::VectorXd& r, int&) {
  return Eigen::VectorXd{{r[0] / (2.0 * x[0]), r[1] / (3.0 * x[1] * x[1] - 3.0)}};
}

}  // namespace

TEST(Newton, ConvergesQuadratically) {
  const NewtonResult res =
      newton_solve(residual, solve, Eigen::VectorXd{{1.0, 2.0}}, {1e-14, 50}, 1.0);
  EXPECT_NEAR(res.x[0], std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(residual(res.x).norm(), 0.0, 1e-13);
  const auto& h = res.residual_history;
  ASSERT_GE(h.size(), 4u);
  // Tail: r_{m+1} <= C r_m^2 with a modest C.
  for (std::size_t m = h.size() - 3; m + 1 < h.size(); ++m) {
    if (h[m + 1] > 1e-15) EXPECT_LE(h[m + 1], 10.0 * h[m] * h[m]);
  }
  EXPECT_EQ(res.iterations + 1, static_cast<int>(h.size()));
}

TEST(Newton, TakesAtLeastOneUpdate) {
  auto zero = [](const Eigen::VectorXd& x) -> Eigen::VectorXd { return x * 0.0; };
  auto id = [](const Eigen::VectorXd&, const Eigen::VectorXd& r, int&) { return r; };
  const NewtonResult res = newton_solve(zero, id, Eigen::VectorXd::Zero(3), {}, 0.0);
  EXPECT_EQ(res.iterations, 1);
  EXPECT_TRUE(res.x.isZero());
}

TEST(Newton, ReferenceRaisedToInitialResidual) {
  const NewtonResult res =
      newton_solve(residual, solve, Eigen::VectorXd{{1.0, 2.0}}, {1e-3, 50}, 1e-30);
  EXPECT_DOUBLE_EQ(res.reference, residual(Eigen::VectorXd{{1.0, 2.0}}).norm());
}

TEST(Newton, DivergenceCarriesHistory) {
  // x^2 + 1 has no real root.
  auto r = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd{{x[0] * x[0] + 1.0}};
  };
  auto s = [](const Eigen::VectorXd& x, const Eigen::VectorXd& res, int&) {
    return Eigen::VectorXd{{res[0] / (2.0 * x[0])}};
  };
  try {
    newton_solve(r, s, Eigen::VectorXd{{0.5}}, {1e-12, 8}, 1.0);
    FAIL() << "expected NewtonDiverged";
  } catch (const NewtonDiverged& e) {
    EXPECT_EQ(e.residual_history().size(), 9u);
    EXPECT_EQ(e.last_iterate().size(), 1);
  }
}
