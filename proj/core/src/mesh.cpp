#include "glcn/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <utility>

#include "glcn/error.hpp"

namespace glcn {

namespace {

constexpr std::array<Point, 3> kReferenceVertices{
    Point{0.0, 0.0}, Point{1.0, 0.0}, Point{0.0, 1.0}};

double distance(Point a, Point b) { return std::hypot(b.x - a.x, b.y - a.y); }

}  // namespace

void Rect::validate() const {
  if (!(std::isfinite(x0) && std::isfinite(x1) && std::isfinite(y0) &&
        std::isfinite(y1))) {
    throw InvalidArgument("rectangle bounds must be finite");
  }
  if (!(x0 < x1) || !(y0 < y1)) {
    throw InvalidArgument("rectangle requires x0 < x1 and y0 < y1");
  }
}

Point EdgeTrace::reference_point(double s) const {
  const double t = reversed ? 1.0 - s : s;
  const Point a = kReferenceVertices[local_edge];
  const Point b = kReferenceVertices[(local_edge + 1) % 3];
  return {(1.0 - t) * a.x + t * b.x, (1.0 - t) * a.y + t * b.y};
}

Mesh::Mesh(Rect domain, std::vector<Point> vertices,
           std::vector<std::array<int, 3>> elements, double cell_size)
    : domain_(domain),
      vertices_(std::move(vertices)),
      elements_(std::move(elements)),
      cell_size_(cell_size) {
  for (int e = 0; e < num_elements(); ++e) {
    if (!(signed_area(e) > 0.0)) {
      throw InvalidArgument("element " + std::to_string(e) +
                            " is not counterclockwise");
    }
    max_diameter_ = std::max(max_diameter_, diameter(e));
  }
  build_edges();
}

void Mesh::build_edges() {
  std::map<std::pair<int, int>, int> lookup;
  element_edges_.assign(elements_.size(), {-1, -1, -1});
  for (int e = 0; e < num_elements(); ++e) {
    for (int j = 0; j < 3; ++j) {
      const int a = elements_[e][j];
      const int b = elements_[e][(j + 1) % 3];
      const auto key = std::minmax(a, b);
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        Edge edge;
        edge.vertices = {a, b};
        const Point pa = vertices_[a];
        const Point pb = vertices_[b];
        edge.length = distance(pa, pb);
        // Outward normal of a counterclockwise element.
        edge.normal = {(pb.y - pa.y) / edge.length,
                       -(pb.x - pa.x) / edge.length};
        edge.left = e;
        edge.left_local = j;
        lookup.emplace(key, num_edges());
        element_edges_[e][j] = num_edges();
        edges_.push_back(edge);
      } else {
        Edge& edge = edges_[it->second];
        if (edge.right >= 0) {
          throw InvalidArgument("non-manifold edge: more than two elements");
        }
        edge.right = e;
        edge.right_local = j;
        element_edges_[e][j] = it->second;
      }
    }
  }
}

int Mesh::num_boundary_edges() const {
  return static_cast<int>(std::count_if(
      edges_.begin(), edges_.end(), [](const Edge& e) { return e.is_boundary(); }));
}

double Mesh::signed_area(int element) const {
  const Point a = vertex(element, 0);
  const Point b = vertex(element, 1);
  const Point c = vertex(element, 2);
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double Mesh::diameter(int element) const {
  const Point a = vertex(element, 0);
  const Point b = vertex(element, 1);
  const Point c = vertex(element, 2);
  return std::max({distance(a, b), distance(b, c), distance(c, a)});
}

Point Mesh::map_to_physical(int element, Point ref) const {
  const Point a = vertex(element, 0);
  const Point b = vertex(element, 1);
  const Point c = vertex(element, 2);
  return {a.x + (b.x - a.x) * ref.x + (c.x - a.x) * ref.y,
          a.y + (b.y - a.y) * ref.x + (c.y - a.y) * ref.y};
}

TracePair Mesh::trace_pairing(int edge_index) const {
  const Edge& edge = edges_.at(edge_index);
  auto side = [&](int element, int local) {
    EdgeTrace trace;
    trace.element = element;
    trace.local_edge = local;
    trace.reversed = elements_[element][local] != edge.vertices[0];
    return trace;
  };
  TracePair pair{side(edge.left, edge.left_local), std::nullopt};
  if (!edge.is_boundary()) pair.right = side(edge.right, edge.right_local);
  return pair;
}

void Mesh::write(std::ostream& os) const {
  const auto precision = os.precision(17);
  os << "vertices " << num_vertices() << '\n';
  for (int i = 0; i < num_vertices(); ++i) {
    os << i << ' ' << vertices_[i].x << ' ' << vertices_[i].y << '\n';
  }
  os << "elements " << num_elements() << '\n';
  for (int i = 0; i < num_elements(); ++i) {
    os << i << ' ' << elements_[i][0] << ' ' << elements_[i][1] << ' '
       << elements_[i][2] << '\n';
  }
  os << "edges " << num_edges() << '\n';
  for (int i = 0; i < num_edges(); ++i) {
    const Edge& e = edges_[i];
    os << i << ' ' << e.vertices[0] << ' ' << e.vertices[1] << ' ' << e.left
       << ' ' << e.right << ' ' << e.normal.x << ' ' << e.normal.y << '\n';
  }
  os.precision(precision);
}

Mesh build_structured(const Rect& rect, int n) {
  rect.validate();
  if (n < 1) throw InvalidArgument("structured mesh needs n >= 1");

  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      // Endpoints are set exactly so boundary vertices lie on the rectangle.
      const double x = i == n ? rect.x1 : rect.x0 + rect.width() * i / n;
      const double y = j == n ? rect.y1 : rect.y0 + rect.height() * j / n;
      vertices.push_back({x, y});
    }
  }

  std::vector<std::array<int, 3>> elements;
  elements.reserve(2 * static_cast<std::size_t>(n) * n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = id(i, j);
      const int v10 = id(i + 1, j);
      const int v01 = id(i, j + 1);
      const int v11 = id(i + 1, j + 1);
      elements.push_back({v00, v10, v11});
      elements.push_back({v00, v11, v01});
    }
  }
  return Mesh(rect, std::move(vertices), std::move(elements), rect.width() / n);
}

TracePair edge_trace_pairing(const Mesh& mesh, int edge) {
  return mesh.trace_pairing(edge);
}

}  // namespace glcn
