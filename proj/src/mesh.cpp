#include "plap/mesh.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <map>
#include <numeric>

#include "plap/triangulation.hpp"

namespace plap {

namespace {

std::uint64_t fnv1a(std::uint64_t hash, const void* data, std::size_t n) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    hash ^= bytes[i];
    hash *= 1099511628211ull;
  }
  return hash;
}

bool is_axis_aligned_rectangle(const Domain& d) {
  if (d.kind() != DomainKind::ConvexPolygon || d.vertices().size() != 4) return false;
  const auto& v = d.vertices();
  for (std::size_t i = 0; i < 4; ++i) {
    const Point e = v[(i + 1) % 4] - v[i];
    if (e.x != 0.0 && e.y != 0.0) return false;
  }
  return true;
}

int pieces(double length, double h) {
  return std::max(1, static_cast<int>(std::ceil(length / h - 1e-9)));
}

Mesh interval_mesh(const Domain& d, double h) {
  const int n = pieces(d.b() - d.a(), h);
  std::vector<Point> verts(n + 1);
  for (int i = 0; i <= n; ++i) verts[i] = {i == n ? d.b() : d.a() + (d.b() - d.a()) * i / n, 0.0};
  std::vector<std::array<int, 3>> cells(n);
  for (int i = 0; i < n; ++i) cells[i] = {i, i + 1, -1};
  return assemble_mesh(1, std::move(verts), std::move(cells), h);
}

Mesh rectangle_mesh(const Domain& d, double h) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const Point& p : d.vertices()) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const int nx = pieces(x1 - x0, h), ny = pieces(y1 - y0, h);
  std::vector<Point> verts;
  verts.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    const double y = j == ny ? y1 : y0 + (y1 - y0) * j / ny;
    for (int i = 0; i <= nx; ++i) verts.push_back({i == nx ? x1 : x0 + (x1 - x0) * i / nx, y});
  }
  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> cells;
  cells.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return assemble_mesh(2, std::move(verts), std::move(cells), h);
}

Mesh delaunay_mesh(const std::vector<Point>& polygon, double h) {
  std::vector<Point> boundary;
  for (std::size_t i = 0, n = polygon.size(); i < n; ++i) {
    const Point a = polygon[i], b = polygon[(i + 1) % n];
    const int k = pieces(distance(a, b), h);
    for (int s = 0; s < k; ++s) boundary.push_back(a + (static_cast<double>(s) / k) * (b - a));
  }
  const Domain shape = Domain::simple_polygon(polygon);
  double x0 = polygon[0].x, x1 = x0, y0 = polygon[0].y, y1 = y0;
  for (const Point& p : polygon) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  // Hexagonal lattice kept half a spacing away from the boundary.
  std::vector<Point> interior;
  const double dy = h * std::sqrt(3.0) / 2.0;
  int row = 0;
  for (double y = y0 + 0.5 * dy; y < y1; y += dy, ++row) {
    for (double x = x0 + (row % 2 ? 0.5 * h : 0.0); x < x1; x += h) {
      if (shape.distance_to_boundary({x, y}) >= 0.5 * h) interior.push_back({x, y});
    }
  }
  Triangulation tri = constrained_delaunay(boundary, interior, 1.5 * h * (1.0 - 1e-9));
  return assemble_mesh(2, std::move(tri.vertices), std::move(tri.triangles), h);
}

}  // namespace

Mesh assemble_mesh(int dim, std::vector<Point> vertices, std::vector<std::array<int, 3>> cells, double h) {
  if (dim != 1 && dim != 2) throw InputError("mesh: dimension must be 1 or 2");
  Mesh m;
  m.dim = dim;
  m.h = h;
  m.vertices = std::move(vertices);
  m.cells = std::move(cells);
  const std::size_t nv = m.vertices.size(), nc = m.cells.size();
  if (nc == 0) throw InputError("mesh: no cells");

  m.cell_measures.resize(nc);
  m.basis_gradients.resize(nc);
  m.vertex_weights.assign(nv, 0.0);
  for (std::size_t c = 0; c < nc; ++c) {
    auto& cell = m.cells[c];
    for (int k = 0; k < dim + 1; ++k)
      if (cell[k] < 0 || static_cast<std::size_t>(cell[k]) >= nv) throw InputError("mesh: cell index out of range");
    if (dim == 1) {
      if (m.vertices[cell[0]].x > m.vertices[cell[1]].x) std::swap(cell[0], cell[1]);
      const double len = m.vertices[cell[1]].x - m.vertices[cell[0]].x;
      if (!(len > 0)) throw InputError("mesh: degenerate segment");
      m.cell_measures[c] = len;
      m.basis_gradients[c] = {Point{-1.0 / len, 0.0}, Point{1.0 / len, 0.0}, Point{}};
    } else {
      double twice = orient(m.vertices[cell[0]], m.vertices[cell[1]], m.vertices[cell[2]]);
      if (twice < 0) {
        std::swap(cell[1], cell[2]);
        twice = -twice;
      }
      const Point a = m.vertices[cell[0]], b = m.vertices[cell[1]], cc = m.vertices[cell[2]];
      const double scale = std::max({distance(a, b), distance(b, cc), distance(cc, a)});
      if (!(twice > 1e-12 * scale * scale)) throw InputError("mesh: degenerate triangle");
      m.cell_measures[c] = 0.5 * twice;
      m.basis_gradients[c] = {(1.0 / twice) * Point{b.y - cc.y, cc.x - b.x},
                              (1.0 / twice) * Point{cc.y - a.y, a.x - cc.x},
                              (1.0 / twice) * Point{a.y - b.y, b.x - a.x}};
    }
    for (int k = 0; k < dim + 1; ++k) m.vertex_weights[cell[k]] += m.cell_measures[c] / (dim + 1);
  }

  // Vertex -> cell incidence in increasing cell order.
  m.vertex_cell_offsets.assign(nv + 1, 0);
  for (const auto& cell : m.cells)
    for (int k = 0; k < dim + 1; ++k) ++m.vertex_cell_offsets[cell[k] + 1];
  std::partial_sum(m.vertex_cell_offsets.begin(), m.vertex_cell_offsets.end(), m.vertex_cell_offsets.begin());
  m.vertex_cell_list.resize(m.vertex_cell_offsets.back());
  {
    std::vector<int> fill(m.vertex_cell_offsets.begin(), m.vertex_cell_offsets.end() - 1);
    for (std::size_t c = 0; c < nc; ++c)
      for (int k = 0; k < dim + 1; ++k) m.vertex_cell_list[fill[m.cells[c][k]]++] = static_cast<int>(c);
  }
  for (std::size_t v = 0; v < nv; ++v)
    if (m.vertex_cell_offsets[v] == m.vertex_cell_offsets[v + 1]) throw InputError("mesh: orphan vertex");

  std::vector<std::vector<int>> nbrs(nv);
  for (const auto& cell : m.cells)
    for (int k = 0; k < dim + 1; ++k)
      for (int l = 0; l < dim + 1; ++l)
        if (k != l) nbrs[cell[k]].push_back(cell[l]);
  m.vertex_nbr_offsets.assign(nv + 1, 0);
  for (std::size_t v = 0; v < nv; ++v) {
    std::sort(nbrs[v].begin(), nbrs[v].end());
    nbrs[v].erase(std::unique(nbrs[v].begin(), nbrs[v].end()), nbrs[v].end());
    m.vertex_nbr_offsets[v + 1] = m.vertex_nbr_offsets[v] + static_cast<int>(nbrs[v].size());
    m.vertex_nbr_list.insert(m.vertex_nbr_list.end(), nbrs[v].begin(), nbrs[v].end());
  }

  m.on_boundary.assign(nv, 0);
  if (dim == 1) {
    for (std::size_t v = 0; v < nv; ++v)
      if (m.vertex_cell_offsets[v + 1] - m.vertex_cell_offsets[v] == 1) m.on_boundary[v] = 1;
  } else {
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& cell : m.cells)
      for (int k = 0; k < 3; ++k) {
        const int p = cell[(k + 1) % 3], q = cell[(k + 2) % 3];
        ++edge_count[{std::min(p, q), std::max(p, q)}];
      }
    for (const auto& cell : m.cells)
      for (int k = 0; k < 3; ++k) {
        const int p = cell[(k + 1) % 3], q = cell[(k + 2) % 3];
        const int count = edge_count[{std::min(p, q), std::max(p, q)}];
        if (count > 2) throw InputError("mesh: non-manifold edge");
        if (count != 1) continue;
        const Point e = m.vertices[q] - m.vertices[p];
        m.boundary_edges.push_back({p, q, (1.0 / norm(e)) * Point{e.y, -e.x}});
        m.on_boundary[p] = m.on_boundary[q] = 1;
      }
  }
  for (std::size_t v = 0; v < nv; ++v)
    if (m.on_boundary[v]) m.boundary_vertices.push_back(static_cast<int>(v));

  std::uint64_t hash = 1469598103934665603ull;
  hash = fnv1a(hash, &dim, sizeof dim);
  hash = fnv1a(hash, m.vertices.data(), m.vertices.size() * sizeof(Point));
  hash = fnv1a(hash, m.cells.data(), m.cells.size() * sizeof(m.cells[0]));
  m.checksum = hash;
  return m;
}

Mesh build_mesh(const Domain& domain, double h) {
  const double diam = intrinsic_diameter(domain).value;
  if (!(h > 0)) throw InputError("build_mesh: h must be positive");
  if (!(h <= diam / 2.0)) throw InputError("build_mesh: h must not exceed diameter/2");
  switch (domain.kind()) {
    case DomainKind::Interval: return interval_mesh(domain, h);
    case DomainKind::Disk:
      return delaunay_mesh(inscribed_polygon_for_spacing(domain.center(), domain.radius(), h), h);
    default:
      if (is_axis_aligned_rectangle(domain)) return rectangle_mesh(domain, h);
      return delaunay_mesh(domain.vertices(), h);
  }
}

double Mesh::total_measure() const {
  double s = 0.0;
  for (double m : cell_measures) s += m;
  return s;
}

double Mesh::max_edge_length() const {
  double best = 0.0;
  for (const auto& cell : cells)
    for (int k = 0; k < nodes_per_cell(); ++k)
      for (int l = k + 1; l < nodes_per_cell(); ++l)
        best = std::max(best, distance(vertices[cell[k]], vertices[cell[l]]));
  return best;
}

int Mesh::nearest_vertex(Point p) const {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const double d = distance(vertices[i], p);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::vector<Point> Mesh::boundary_normals(int v) const {
  std::vector<Point> out;
  if (!on_boundary[v]) return out;
  if (dim == 1) {
    const int other = neighbors_of(v)[0];
    out.push_back({vertices[v].x < vertices[other].x ? -1.0 : 1.0, 0.0});
    return out;
  }
  for (const auto& e : boundary_edges) {
    if (e.v0 != v && e.v1 != v) continue;
    const bool dup = std::any_of(out.begin(), out.end(), [&](Point n) { return distance(n, e.normal) < 1e-9; });
    if (!dup) out.push_back(e.normal);
  }
  return out;
}

// ---------------------------------------------------------------------------

MeshLocator::MeshLocator(const Mesh& mesh) : mesh_(mesh) {
  lo_ = hi_ = mesh.vertices.front();
  for (const Point& p : mesh.vertices) {
    lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y)};
    hi_ = {std::max(hi_.x, p.x), std::max(hi_.y, p.y)};
  }
  const double cell_size = std::max(mesh.h, 1e-12);
  nx_ = std::clamp(static_cast<int>((hi_.x - lo_.x) / cell_size) + 1, 1, 1024);
  ny_ = mesh.dim == 1 ? 1 : std::clamp(static_cast<int>((hi_.y - lo_.y) / cell_size) + 1, 1, 1024);
  std::vector<std::vector<int>> buckets(nx_ * ny_);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    Point a = mesh.vertices[mesh.cells[c][0]], b = a;
    for (int k = 1; k < mesh.nodes_per_cell(); ++k) {
      const Point q = mesh.vertices[mesh.cells[c][k]];
      a = {std::min(a.x, q.x), std::min(a.y, q.y)};
      b = {std::max(b.x, q.x), std::max(b.y, q.y)};
    }
    const auto bx = [&](double x) {
      return std::clamp(static_cast<int>((x - lo_.x) / (hi_.x - lo_.x + 1e-300) * nx_), 0, nx_ - 1);
    };
    const auto by = [&](double y) {
      return std::clamp(static_cast<int>((y - lo_.y) / (hi_.y - lo_.y + 1e-300) * ny_), 0, ny_ - 1);
    };
    for (int j = by(a.y); j <= by(b.y); ++j)
      for (int i = bx(a.x); i <= bx(b.x); ++i) buckets[j * nx_ + i].push_back(static_cast<int>(c));
  }
  bucket_offsets_.push_back(0);
  for (const auto& b : buckets) {
    bucket_cells_.insert(bucket_cells_.end(), b.begin(), b.end());
    bucket_offsets_.push_back(static_cast<int>(bucket_cells_.size()));
  }
}

int MeshLocator::locate(Point p, std::array<double, 3>& bary) const {
  const double tol = 1e-10;
  if (p.x < lo_.x - tol * (hi_.x - lo_.x + 1) || p.x > hi_.x + tol * (hi_.x - lo_.x + 1)) return -1;
  const int i = std::clamp(static_cast<int>((p.x - lo_.x) / (hi_.x - lo_.x + 1e-300) * nx_), 0, nx_ - 1);
  const int j = std::clamp(static_cast<int>((p.y - lo_.y) / (hi_.y - lo_.y + 1e-300) * ny_), 0, ny_ - 1);
  const int b = j * nx_ + i;
  for (int s = bucket_offsets_[b]; s < bucket_offsets_[b + 1]; ++s) {
    const int c = bucket_cells_[s];
    const auto& cell = mesh_.cells[c];
    if (mesh_.dim == 1) {
      const double x0 = mesh_.vertices[cell[0]].x, x1 = mesh_.vertices[cell[1]].x;
      const double t = (p.x - x0) / (x1 - x0);
      if (t < -tol || t > 1 + tol) continue;
      bary = {1.0 - t, t, 0.0};
      return c;
    }
    const Point a = mesh_.vertices[cell[0]], bb = mesh_.vertices[cell[1]], cc = mesh_.vertices[cell[2]];
    const double area = orient(a, bb, cc);
    const double l0 = orient(p, bb, cc) / area, l1 = orient(a, p, cc) / area, l2 = orient(a, bb, p) / area;
    if (l0 < -tol || l1 < -tol || l2 < -tol) continue;
    bary = {l0, l1, l2};
    return c;
  }
  return -1;
}

double MeshLocator::interpolate(std::span<const double> values, Point p) const {
  std::array<double, 3> bary{};
  const int c = locate(p, bary);
  if (c < 0) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (int k = 0; k < mesh_.nodes_per_cell(); ++k) s += bary[k] * values[mesh_.cells[c][k]];
  return s;
}

}  // namespace plap
