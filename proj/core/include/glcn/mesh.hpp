#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

namespace glcn {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangle (x0, x1) x (y0, y1).
struct Rect {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  void validate() const;
};

/// An edge of the triangulation. The normal points from the left element to
/// the right element; on the boundary it is the outward normal of the domain.
struct Edge {
  std::array<int, 2> vertices{};
  Point normal;
  double length = 0.0;
  int left = -1;
  int right = -1;  // -1 on the boundary
  int left_local = -1;
  int right_local = -1;

  bool is_boundary() const { return right < 0; }
};

/// One side of an edge seen from an element: maps the edge arc-length
/// parameter s in [0, 1] (running from edge.vertices[0] to vertices[1]) to
/// reference coordinates of that element.
struct EdgeTrace {
  int element = -1;
  int local_edge = -1;
  bool reversed = false;

  Point reference_point(double s) const;
};

struct TracePair {
  EdgeTrace left;
  std::optional<EdgeTrace> right;
};

/// Conforming triangulation. Local edge e of an element joins its local
/// vertices e and (e + 1) % 3. Immutable after construction.
class Mesh {
 public:
  Mesh(Rect domain, std::vector<Point> vertices,
       std::vector<std::array<int, 3>> elements, double cell_size);

  const Rect& domain() const { return domain_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& elements() const { return elements_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::array<int, 3>& element_edges(int element) const {
    return element_edges_.at(element);
  }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_boundary_edges() const;
  int num_interior_edges() const { return num_edges() - num_boundary_edges(); }

  /// Reported mesh parameter: the cell edge length of the structured grid.
  double h() const { return cell_size_; }
  /// Largest element diameter.
  double max_diameter() const { return max_diameter_; }

  double signed_area(int element) const;
  double diameter(int element) const;
  Point vertex(int element, int local) const {
    return vertices_[elements_[element][local]];
  }

  /// Physical point of reference coordinates (xi, eta) in an element.
  Point map_to_physical(int element, Point ref) const;

  TracePair trace_pairing(int edge) const;

  /// Plain-text dump: vertices, elements and edges sections.
  void write(std::ostream& os) const;

 private:
  void build_edges();

  Rect domain_;
  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> elements_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> element_edges_;
  double cell_size_;
  double max_diameter_ = 0.0;
};

/// n x n grid of squares, each split by its lower-left to upper-right
/// diagonal into two counterclockwise triangles.
Mesh build_structured(const Rect& rect, int n);

TracePair edge_trace_pairing(const Mesh& mesh, int edge);

}  // namespace glcn
