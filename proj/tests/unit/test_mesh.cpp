#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "glcn/error.hpp"
#include "glcn/mesh.hpp"

using namespace glcn;

namespace {
const Rect kUnit{0.0, 1.0, 0.0, 1.0};
}

TEST(Mesh, EulerCharacteristicAndCounts) {
  for (int n = 1; n <= 8; ++n) {
    const Mesh m = build_structured(kUnit, n);
    EXPECT_EQ(m.num_vertices(), (n + 1) * (n + 1));
    EXPECT_EQ(m.num_elements(), 2 * n * n);
    EXPECT_EQ(m.num_edges(), 3 * n * n + 2 * n);
    EXPECT_EQ(m.num_boundary_edges(), 4 * n);
    EXPECT_EQ(m.num_vertices() - m.num_edges() + m.num_elements(), 1);
  }
}

TEST(Mesh, SingleCellLayout) {
  const Mesh m = build_structured(kUnit, 1);
  ASSERT_EQ(m.num_elements(), 2);
  // Diagonal from (0,0) to (1,1).
  const std::array<int, 3> lower = m.elements()[0];
  const std::array<int, 3> upper = m.elements()[1];
  EXPECT_EQ(m.vertices()[lower[1]].x, 1.0);
  EXPECT_EQ(m.vertices()[lower[1]].y, 0.0);
  EXPECT_EQ(m.vertices()[upper[2]].x, 0.0);
  EXPECT_EQ(m.vertices()[upper[2]].y, 1.0);
  EXPECT_DOUBLE_EQ(m.signed_area(0), 0.5);
  EXPECT_DOUBLE_EQ(m.signed_area(1), 0.5);
  EXPECT_EQ(m.num_interior_edges(), 1);
}

TEST(Mesh, ReportedSizeIsCellWidth) {
  EXPECT_DOUBLE_EQ(build_structured(kUnit, 10).h(), 0.1);
  const Mesh m = build_structured({-1.0, 1.0, -1.0, 1.0}, 10);
  EXPECT_DOUBLE_EQ(m.h(), 0.2);
  EXPECT_NEAR(m.max_diameter(), 0.2 * std::sqrt(2.0), 1e-15);
}

TEST(Mesh, AreasSumToDomain) {
  const Rect r{-1.0, 1.0, -1.0, 1.0};
  const Mesh m = build_structured(r, 7);
  double area = 0.0;
  for (int e = 0; e < m.num_elements(); ++e) {
    EXPECT_GT(m.signed_area(e), 0.0);
    area += m.signed_area(e);
  }
  EXPECT_NEAR(area, 4.0, 1e-13);
}

TEST(Mesh, NormalsPointFromLeftToRight) {
  const Mesh m = build_structured(kUnit, 3);
  for (const Edge& edge : m.edges()) {
    EXPECT_NEAR(std::hypot(edge.normal.x, edge.normal.y), 1.0, 1e-14);
    const Point a = m.vertices()[edge.vertices[0]];
    const Point b = m.vertices()[edge.vertices[1]];
    // Normal is orthogonal to the edge.
    EXPECT_NEAR((b.x - a.x) * edge.normal.x + (b.y - a.y) * edge.normal.y, 0.0, 1e-14);
    // And points away from the centroid of the left element.
    Point c{0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
      c.x += m.vertex(edge.left, i).x / 3.0;
      c.y += m.vertex(edge.left, i).y / 3.0;
    }
    const double mx = 0.5 * (a.x + b.x) - c.x;
    const double my = 0.5 * (a.y + b.y) - c.y;
    EXPECT_GT(mx * edge.normal.x + my * edge.normal.y, 0.0);
  }
}

TEST(Mesh, TracesAgreeOnBothSides) {
  const Mesh m = build_structured(kUnit, 4);
  for (int e = 0; e < m.num_edges(); ++e) {
    const TracePair tp = m.trace_pairing(e);
    const Edge& edge = m.edges()[e];
    for (double s : {0.0, 0.3, 1.0}) {
      const Point a = m.vertices()[edge.vertices[0]];
      const Point b = m.vertices()[edge.vertices[1]];
      const Point expected{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
      const Point left = m.map_to_physical(tp.left.element, tp.left.reference_point(s));
      EXPECT_NEAR(left.x, expected.x, 1e-14);
      EXPECT_NEAR(left.y, expected.y, 1e-14);
      if (tp.right) {
        const Point right =
            m.map_to_physical(tp.right->element, tp.right->reference_point(s));
        EXPECT_NEAR(right.x, expected.x, 1e-14);
        EXPECT_NEAR(right.y, expected.y, 1e-14);
      }
    }
  }
}

TEST(Mesh, RejectsBadInput) {
  EXPECT_THROW(build_structured(kUnit, 0), InvalidArgument);
  EXPECT_THROW(build_structured({1.0, 0.0, 0.0, 1.0}, 2), InvalidArgument);
  // Clockwise triangle.
  EXPECT_THROW(Mesh(kUnit, {{0, 0}, {0, 1}, {1, 0}}, {{{0, 1, 2}}}, 1.0),
               InvalidArgument);
}

TEST(Mesh, TextDumpSections) {
  const Mesh m = build_structured(kUnit, 2);
  std::ostringstream os;
  m.write(os);
  const std::string text = os.str();
  EXPECT_NE(text.find("vertices 9\n"), std::string::npos);
  EXPECT_NE(text.find("elements 8\n"), std::string::npos);
  EXPECT_NE(text.find("edges 16\n"), std::string::npos);
}
