#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <map>
#include <set>

#include "oracles.hpp"
#include "plap/domain_io.hpp"
#include "plap/mesh.hpp"
#include "plap/triangulation.hpp"

using namespace plap;
namespace fs = std::filesystem;

namespace {

// Boundary vertices recomputed from scratch: endpoints of edges owned by one cell.
std::set<int> boundary_from_cells(const Mesh& m) {
  std::set<int> out;
  if (m.dim == 1) {
    std::map<int, int> count;
    for (const auto& c : m.cells) {
      ++count[c[0]];
      ++count[c[1]];
    }
    for (auto [v, n] : count)
      if (n == 1) out.insert(v);
    return out;
  }
  std::map<std::pair<int, int>, int> count;
  for (const auto& c : m.cells)
    for (int k = 0; k < 3; ++k) {
      const int a = c[k], b = c[(k + 1) % 3];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  for (const auto& [e, n] : count)
    if (n == 1) {
      out.insert(e.first);
      out.insert(e.second);
    }
  return out;
}

void check_mesh_invariants(const Mesh& m, double expected_area) {
  double cells = 0.0, weights = 0.0;
  for (double a : m.cell_measures) {
    CHECK(a > 0);
    cells += a;
  }
  for (double w : m.vertex_weights) {
    CHECK(w > 0);
    weights += w;
  }
  CHECK(std::fabs(cells - expected_area) <= 1e-9 * expected_area);
  CHECK(std::fabs(weights - expected_area) <= 1e-9 * expected_area);
  const std::set<int> b = boundary_from_cells(m);
  CHECK(std::set<int>(m.boundary_vertices.begin(), m.boundary_vertices.end()) == b);
  CHECK(m.max_edge_length() <= 1.5 * m.h + 1e-12);
}

}  // namespace

TEST_CASE("interval mesh") {
  const Mesh m = build_mesh(oracle::unit_interval(), 0.25);
  CHECK(m.num_cells() == 4);
  CHECK(m.num_vertices() == 5);
  check_mesh_invariants(m, 1.0);
  CHECK(m.boundary_vertices == std::vector<int>{0, 4});
  CHECK(m.boundary_normals(0) == std::vector<Point>{{-1, 0}});
  CHECK(m.boundary_normals(4) == std::vector<Point>{{1, 0}});
}

TEST_CASE("square mesh") {
  const Mesh m = build_mesh(oracle::square(), 0.4);
  check_mesh_invariants(m, 4.0);
  // Corner vertices carry two normals.
  const int corner = m.nearest_vertex({1, 1});
  CHECK(m.boundary_normals(corner).size() == 2);
  CHECK_THROWS_AS(build_mesh(oracle::square(), 1.5), InputError);  // h above diam/2
  check_mesh_invariants(build_mesh(oracle::square(), 1.0), 4.0);
  CHECK_THROWS_AS(build_mesh(oracle::square(), 0.0), InputError);
}

TEST_CASE("disk mesh area matches the inscribed polygon") {
  for (double h : {0.05, 0.1, 0.2}) {
    const Mesh m = build_mesh(Domain::disk({0, 0}, 1.0), h);
    const double area = oracle::inscribed_ngon_area(oracle::ngon_count_for_spacing(1.0, h), 1.0);
    check_mesh_invariants(m, area);
  }
  const Mesh fine = build_mesh(Domain::disk({0, 0}, 1.0), 0.05);
  CHECK(std::fabs(fine.total_measure() - std::numbers::pi) <= 0.005 * std::numbers::pi);
}

TEST_CASE("mesh invariants on the suite and the L-shape") {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(fs::path(PLAP_TEST_DATA_DIR) / "suite")) files.push_back(e.path());
  files.push_back(fs::path(PLAP_TEST_DATA_DIR) / "l_shape.json");
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    CAPTURE(f.filename().string());
    const Domain d = load_domain(f);
    const double diam = intrinsic_diameter(d).value;
    for (double frac : {0.06, 0.03}) {
      const Mesh m = build_mesh(d, frac * diam);
      const double area = d.kind() == DomainKind::Disk
                              ? oracle::inscribed_ngon_area(oracle::ngon_count_for_spacing(d.radius(), m.h), d.radius())
                              : volume(d);
      check_mesh_invariants(m, area);
    }
  }
}

TEST_CASE("mesh is deterministic") {
  const Domain d = Domain::convex_polygon({{0, 0}, {1.7, 0.2}, {1.4, 1.3}, {0.1, 0.9}});
  const Mesh a = build_mesh(d, 0.1), b = build_mesh(d, 0.1);
  CHECK(a.checksum == b.checksum);
  CHECK(a.vertices == b.vertices);
  CHECK(a.checksum != build_mesh(d, 0.11).checksum);
}

TEST_CASE("assemble_mesh rejects bad input") {
  CHECK_THROWS_AS(assemble_mesh(2, {{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}, 1.0), InputError);
  // Vertex 3 is not used by any cell.
  CHECK_THROWS_AS(assemble_mesh(2, {{0, 0}, {1, 0}, {0, 1}, {5, 5}}, {{0, 1, 2}}, 1.0), InputError);
  // Clockwise cells are reoriented.
  const Mesh m = assemble_mesh(2, {{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}}, 1.0);
  CHECK(m.cell_measures[0] == doctest::Approx(0.5));
}

TEST_CASE("constrained Delaunay keeps the boundary") {
  const std::vector<Point> boundary{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  const std::vector<Point> interior{{0.5, 0.5}, {1.5, 0.5}, {0.5, 1.5}};
  const Triangulation t = constrained_delaunay(boundary, interior, 0.0);
  double area = 0.0;
  for (const auto& tri : t.triangles) {
    const double a = 0.5 * orient(t.vertices[tri[0]], t.vertices[tri[1]], t.vertices[tri[2]]);
    CHECK(a > 0);
    area += a;
    // No triangle covers the notch.
    const Point c = (1.0 / 3.0) * (t.vertices[tri[0]] + t.vertices[tri[1]] + t.vertices[tri[2]]);
    CHECK_FALSE((c.x > 1 && c.y > 1));
  }
  CHECK(area == doctest::Approx(3.0));
}

TEST_CASE("locator interpolates linear data exactly") {
  const Mesh m = build_mesh(Domain::disk({0, 0}, 1.0), 0.2);
  std::vector<double> v(m.num_vertices());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 2 * m.vertices[i].x - m.vertices[i].y + 0.5;
  const MeshLocator loc(m);
  for (Point q : {Point{0.1, 0.2}, Point{-0.5, 0.3}, Point{0.0, -0.8}})
    CHECK(loc.interpolate(v, q) == doctest::Approx(2 * q.x - q.y + 0.5));
  CHECK(std::isnan(loc.interpolate(v, {2.0, 0.0})));

  const Mesh mi = build_mesh(oracle::unit_interval(), 0.1);
  std::vector<double> vi(mi.num_vertices());
  for (std::size_t i = 0; i < vi.size(); ++i) vi[i] = 3 * mi.vertices[i].x;
  CHECK(MeshLocator(mi).interpolate(vi, {0.37, 0}) == doctest::Approx(1.11));
}
