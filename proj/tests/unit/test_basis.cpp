#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "glcn/basis.hpp"
#include "glcn/error.hpp"

using namespace glcn;

TEST(Basis, DimensionOfPk) {
  for (int k = 1; k <= 5; ++k) {
    EXPECT_EQ(ReferenceBasis(k).size(), (k + 1) * (k + 2) / 2);
  }
  EXPECT_THROW(ReferenceBasis(0), InvalidArgument);
}

TEST(Basis, KroneckerAtNodes) {
  for (int k = 1; k <= 4; ++k) {
    const ReferenceBasis b(k);
    for (int i = 0; i < b.size(); ++i) {
      const Eigen::VectorXd v = b.values(b.nodes()[i]);
      for (int j = 0; j < b.size(); ++j) EXPECT_NEAR(v[j], i == j ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(Basis, PartitionOfUnityAndReproduction) {
  const ReferenceBasis b(3);
  for (const Point p : {Point{0.1, 0.2}, Point{0.5, 0.25}, Point{0.0, 1.0}}) {
    const Eigen::VectorXd v = b.values(p);
    EXPECT_NEAR(v.sum(), 1.0, 1e-13);
    // Reproduces xi^2 eta through nodal interpolation.
    double interp = 0.0;
    for (int i = 0; i < b.size(); ++i) {
      interp += v[i] * b.nodes()[i].x * b.nodes()[i].x * b.nodes()[i].y;
    }
    EXPECT_NEAR(interp, p.x * p.x * p.y, 1e-13);
  }
}

TEST(Basis, GradientsMatchFiniteDifferences) {
  for (int k = 1; k <= 3; ++k) {
    const ReferenceBasis b(k);
    const Point p{0.23, 0.31};
    std::vector<std::array<double, 2>> g(b.size());
    b.gradients(p, g);
    const double eps = 1e-6;
    const Eigen::VectorXd dx =
        (b.values({p.x + eps, p.y}) - b.values({p.x - eps, p.y})) / (2 * eps);
    const Eigen::VectorXd dy =
        (b.values({p.x, p.y + eps}) - b.values({p.x, p.y - eps})) / (2 * eps);
    for (int i = 0; i < b.size(); ++i) {
      EXPECT_NEAR(g[i][0], dx[i], 1e-7);
      EXPECT_NEAR(g[i][1], dy[i], 1e-7);
    }
  }
}

TEST(Basis, TabulationShapes) {
  const ReferenceBasis b(2);
  const std::vector<Point> pts{{0.1, 0.1}, {0.2, 0.3}, {0.6, 0.1}, {0.3, 0.3}};
  const Tabulation t = tabulate(b, pts);
  EXPECT_EQ(t.values.rows(), 4);
  EXPECT_EQ(t.values.cols(), 6);
  EXPECT_EQ(t.d_xi.rows(), 4);
  EXPECT_EQ(t.d_eta.cols(), 6);
  for (int q = 0; q < 4; ++q) EXPECT_NEAR(t.d_xi.row(q).sum(), 0.0, 1e-12);
}
