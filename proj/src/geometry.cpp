#include "plap/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

#include "plap/discretize.hpp"
#include "plap/mesh.hpp"

namespace plap {

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Interval: return "interval";
    case DomainKind::ConvexPolygon: return "convex-polygon";
    case DomainKind::SimplePolygon: return "simple-polygon";
    case DomainKind::Disk: return "disk";
  }
  return "unknown";
}

DomainKind domain_kind_from_string(const std::string& name) {
  if (name == "interval") return DomainKind::Interval;
  if (name == "convex-polygon") return DomainKind::ConvexPolygon;
  if (name == "simple-polygon") return DomainKind::SimplePolygon;
  if (name == "disk") return DomainKind::Disk;
  throw InputError("kind: unknown domain kind '" + name + "'");
}

// ---------------------------------------------------------------------------
// Polygon primitives

double polygon_area(std::span<const Point> poly) {
  double twice = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) twice += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * twice;
}

bool polygon_is_convex(std::span<const Point> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = orient(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]);
    const int s = (c > 0) - (c < 0);
    if (s == 0) continue;
    if (sign == 0) sign = s;
    if (s != sign) return false;
  }
  return sign != 0;
}

namespace {

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0)))
    return true;
  const auto on_segment = [](Point p, Point q, Point r) {
    return orient(p, q, r) == 0.0 && std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
  };
  return on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b);
}

double point_segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

double polygon_boundary_distance(std::span<const Point> poly, Point p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, n = poly.size(); i < n; ++i)
    best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % n]));
  return best;
}

// Crossing-number test; boundary points may land on either side.
bool polygon_strictly_contains(std::span<const Point> poly, Point p) {
  bool inside = false;
  for (std::size_t i = 0, n = poly.size(), j = n - 1; i < n; j = i++) {
    const Point& a = poly[i];
    const Point& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

double polygon_extent(std::span<const Point> poly) {
  double best = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j) best = std::max(best, distance(poly[i], poly[j]));
  return best;
}

std::vector<Point> validated_polygon(std::vector<Point> v) {
  if (v.size() < 3) throw InputError("vertices: polygon needs at least 3 vertices");
  for (const Point& p : v)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InputError("vertices: non-finite coordinate");
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] == v[(i + 1) % v.size()]) throw InputError("vertices: repeated consecutive vertex");
  const double area = polygon_area(v);
  const double ext = polygon_extent(v);
  if (!(std::fabs(area) > 1e-14 * ext * ext)) throw InputError("vertices: polygon has zero area (collinear)");
  if (!polygon_is_simple(v)) throw InputError("vertices: polygon is self-intersecting");
  if (area < 0) std::reverse(v.begin(), v.end());
  return v;
}

}  // namespace

bool polygon_is_simple(std::span<const Point> poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = poly[i], b = poly[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || j == (i + 1) % n) continue;
      if (segments_intersect(a, b, poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

std::vector<Point> inscribed_polygon(Point center, double radius, int n) {
  std::vector<Point> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    out.push_back({center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
  }
  return out;
}

std::vector<Point> inscribed_polygon_for_spacing(Point center, double radius, double h) {
  // Edge of the inscribed n-gon is 2 r sin(pi/n).
  const double ratio = std::min(1.0, h / (2.0 * radius));
  int n = static_cast<int>(std::ceil(std::numbers::pi / std::asin(ratio)));
  n = std::max(n, 8);
  while (2.0 * radius * std::sin(std::numbers::pi / n) > h) ++n;
  return inscribed_polygon(center, radius, n);
}

// ---------------------------------------------------------------------------
// Domain

Domain Domain::interval(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw InputError("interval: non-finite endpoint");
  if (!(b > a)) throw InputError("interval: length must be positive");
  Domain d;
  d.kind_ = DomainKind::Interval;
  d.a_ = a;
  d.b_ = b;
  return d;
}

Domain Domain::convex_polygon(std::vector<Point> vertices) {
  Domain d;
  d.kind_ = DomainKind::ConvexPolygon;
  d.vertices_ = validated_polygon(std::move(vertices));
  if (!polygon_is_convex(d.vertices_)) throw InputError("vertices: polygon is not convex");
  return d;
}

Domain Domain::simple_polygon(std::vector<Point> vertices) {
  Domain d;
  d.kind_ = DomainKind::SimplePolygon;
  d.vertices_ = validated_polygon(std::move(vertices));
  return d;
}

Domain Domain::disk(Point center, double radius) {
  if (!std::isfinite(center.x) || !std::isfinite(center.y)) throw InputError("center: non-finite coordinate");
  if (!(radius > 0) || !std::isfinite(radius)) throw InputError("radius: must be positive");
  Domain d;
  d.kind_ = DomainKind::Disk;
  d.center_ = center;
  d.radius_ = radius;
  return d;
}

bool Domain::contains(Point p, double tol) const {
  switch (kind_) {
    case DomainKind::Interval: return p.x >= a_ - tol && p.x <= b_ + tol;
    case DomainKind::Disk: return distance(p, center_) <= radius_ + tol;
    default:
      return polygon_strictly_contains(vertices_, p) || polygon_boundary_distance(vertices_, p) <= tol;
  }
}

double Domain::distance_to_boundary(Point p) const {
  switch (kind_) {
    case DomainKind::Interval: return std::max(0.0, std::min(p.x - a_, b_ - p.x));
    case DomainKind::Disk: return std::max(0.0, radius_ - distance(p, center_));
    default:
      if (!polygon_strictly_contains(vertices_, p)) return 0.0;
      return polygon_boundary_distance(vertices_, p);
  }
}

double Domain::euclidean_extent() const {
  switch (kind_) {
    case DomainKind::Interval: return b_ - a_;
    case DomainKind::Disk: return 2.0 * radius_;
    default: return polygon_extent(vertices_);
  }
}

Point Domain::centroid() const {
  switch (kind_) {
    case DomainKind::Interval: return {0.5 * (a_ + b_), 0.0};
    case DomainKind::Disk: return center_;
    default: {
      double cx = 0, cy = 0;
      const std::size_t n = vertices_.size();
      for (std::size_t i = 0; i < n; ++i) {
        const Point p = vertices_[i], q = vertices_[(i + 1) % n];
        const double c = cross(p, q);
        cx += (p.x + q.x) * c;
        cy += (p.y + q.y) * c;
      }
      const double a6 = 6.0 * polygon_area(vertices_);
      return {cx / a6, cy / a6};
    }
  }
}

Domain Domain::scaled(double t) const {
  if (!(t > 0)) throw InputError("scale factor must be positive");
  Domain d = *this;
  d.a_ *= t;
  d.b_ *= t;
  d.center_ = t * d.center_;
  d.radius_ *= t;
  for (Point& p : d.vertices_) p = t * p;
  return d;
}

double volume(const Domain& domain) {
  switch (domain.kind()) {
    case DomainKind::Interval: return domain.b() - domain.a();
    case DomainKind::Disk: return std::numbers::pi * domain.radius() * domain.radius();
    default: return polygon_area(domain.vertices());
  }
}

// ---------------------------------------------------------------------------
// Geodesics in simple polygons: shortest paths bend only at reflex vertices,
// so a visibility graph over those vertices gives exact distances.

namespace {

class PolygonPaths {
 public:
  explicit PolygonPaths(std::span<const Point> poly) : poly_(poly.begin(), poly.end()) {
    scale_ = polygon_extent(poly_);
    const std::size_t n = poly_.size();
    for (std::size_t i = 0; i < n; ++i)
      if (orient(poly_[(i + n - 1) % n], poly_[i], poly_[(i + 1) % n]) < 0) reflex_.push_back(poly_[i]);
    const std::size_t r = reflex_.size();
    const double inf = std::numeric_limits<double>::infinity();
    graph_.assign(r * r, inf);
    for (std::size_t i = 0; i < r; ++i) {
      graph_[i * r + i] = 0.0;
      for (std::size_t j = i + 1; j < r; ++j)
        if (visible(reflex_[i], reflex_[j])) graph_[i * r + j] = graph_[j * r + i] = distance(reflex_[i], reflex_[j]);
    }
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
          graph_[i * r + j] = std::min(graph_[i * r + j], graph_[i * r + k] + graph_[k * r + j]);
  }

  bool inside_closed(Point p) const {
    return polygon_strictly_contains(poly_, p) || polygon_boundary_distance(poly_, p) <= 1e-10 * scale_;
  }

  bool visible(Point p, Point q) const {
    const double len = distance(p, q);
    if (len == 0.0) return true;
    const double eps = 1e-12 * len * scale_;
    const std::size_t n = poly_.size();
    std::vector<double> cuts{0.0, 1.0};
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = poly_[i], b = poly_[(i + 1) % n];
      const double o1 = orient(p, q, a), o2 = orient(p, q, b);
      const double o3 = orient(a, b, p), o4 = orient(a, b, q);
      const double eps_ab = 1e-12 * distance(a, b) * scale_;
      if (((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps)) &&
          ((o3 > eps_ab && o4 < -eps_ab) || (o3 < -eps_ab && o4 > eps_ab)))
        return false;
      if (std::fabs(o1) <= eps) {
        const double t = dot(a - p, q - p) / (len * len);
        if (t > 0.0 && t < 1.0) cuts.push_back(t);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i + 1] - cuts[i] < 1e-14) continue;
      const double t = 0.5 * (cuts[i] + cuts[i + 1]);
      if (!inside_closed(p + t * (q - p))) return false;
    }
    return true;
  }

  /// Shortest distances from `p` to every reflex vertex.
  std::vector<double> to_reflex(Point p) const {
    const std::size_t r = reflex_.size();
    std::vector<double> out(r, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < r; ++i) {
      if (!visible(p, reflex_[i])) continue;
      const double d = distance(p, reflex_[i]);
      for (std::size_t j = 0; j < r; ++j) out[j] = std::min(out[j], d + graph_[i * r + j]);
    }
    return out;
  }

  double distance_with(Point p, const std::vector<double>& from_p_to_reflex, Point q) const {
    double best = visible(p, q) ? distance(p, q) : std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < reflex_.size(); ++s) {
      if (from_p_to_reflex[s] + distance(reflex_[s], q) >= best) continue;
      if (visible(reflex_[s], q)) best = from_p_to_reflex[s] + distance(reflex_[s], q);
    }
    return best;
  }

  double distance_between(Point p, Point q) const { return distance_with(p, to_reflex(p), q); }

 private:
  std::vector<Point> poly_;
  std::vector<Point> reflex_;
  std::vector<double> graph_;
  double scale_ = 1.0;
};

std::vector<Point> sample_boundary(std::span<const Point> poly, double spacing) {
  std::vector<Point> out;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    const Point a = poly[i], b = poly[(i + 1) % n];
    const int pieces = std::max(1, static_cast<int>(std::ceil(distance(a, b) / spacing)));
    for (int k = 0; k < pieces; ++k) out.push_back(a + (static_cast<double>(k) / pieces) * (b - a));
  }
  return out;
}

void require_inside(const Domain& domain, Point p) {
  if (!domain.contains(p, 1e-10 * domain.euclidean_extent()))
    throw InputError("geodesic_distance: source point lies outside the domain");
}

DiameterResult finish_diameter(std::vector<std::pair<Point, Point>> pairs, double value) {
  for (auto& [p, q] : pairs)
    if (lex_less(q, p)) std::swap(p, q);
  std::sort(pairs.begin(), pairs.end(), [](const auto& e, const auto& f) {
    if (e.first != f.first) return lex_less(e.first, f.first);
    return lex_less(e.second, f.second);
  });
  DiameterResult out;
  out.value = value;
  out.first = pairs.front().first;
  out.second = pairs.front().second;
  out.maximal_pairs = std::move(pairs);
  return out;
}

}  // namespace

DiameterResult intrinsic_diameter(const Domain& domain, double boundary_spacing) {
  switch (domain.kind()) {
    case DomainKind::Interval:
      return finish_diameter({{{domain.a(), 0.0}, {domain.b(), 0.0}}}, domain.b() - domain.a());
    case DomainKind::Disk: {
      const Point c = domain.center();
      const double r = domain.radius();
      return finish_diameter({{{c.x - r, c.y}, {c.x + r, c.y}}}, 2.0 * r);
    }
    case DomainKind::ConvexPolygon: {
      const auto& v = domain.vertices();
      const double best = polygon_extent(v);
      std::vector<std::pair<Point, Point>> pairs;
      for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
          if (distance(v[i], v[j]) >= best * (1.0 - 1e-12)) pairs.emplace_back(v[i], v[j]);
      return finish_diameter(std::move(pairs), best);
    }
    case DomainKind::SimplePolygon: break;
  }

  const auto& poly = domain.vertices();
  const double spacing = boundary_spacing > 0 ? boundary_spacing : domain.euclidean_extent() / 200.0;
  const PolygonPaths paths(poly);
  const std::vector<Point> samples = sample_boundary(poly, spacing);
  const long n = static_cast<long>(samples.size());
  std::vector<double> row_best(n, 0.0);
  std::vector<long> row_arg(n, -1);
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) {
    const auto reach = paths.to_reflex(samples[i]);
    for (long j = i + 1; j < n; ++j) {
      const double d = paths.distance_with(samples[i], reach, samples[j]);
      if (d > row_best[i]) {
        row_best[i] = d;
        row_arg[i] = j;
      }
    }
  }
  const double best = *std::max_element(row_best.begin(), row_best.end());
  std::vector<std::pair<Point, Point>> pairs;
  for (long i = 0; i < n; ++i) {
    if (row_best[i] < best * (1.0 - 1e-12)) continue;
    const auto reach = paths.to_reflex(samples[i]);
    for (long j = i + 1; j < n; ++j)
      if (paths.distance_with(samples[i], reach, samples[j]) >= best * (1.0 - 1e-12))
        pairs.emplace_back(samples[i], samples[j]);
  }
  return finish_diameter(std::move(pairs), best);
}

double geodesic_distance(const Domain& domain, Point from, Point to) {
  require_inside(domain, from);
  require_inside(domain, to);
  if (domain.kind() == DomainKind::Interval) return std::fabs(to.x - from.x);
  if (domain.is_convex()) return distance(from, to);
  return PolygonPaths(domain.vertices()).distance_between(from, to);
}

ScalarField geodesic_distance(const Domain& domain, Point x0, const Mesh& mesh) {
  require_inside(domain, x0);
  ScalarField field(mesh);
  const long n = static_cast<long>(mesh.num_vertices());
  auto& out = field.values;
  if (domain.kind() == DomainKind::Interval) {
    for (long i = 0; i < n; ++i) out[i] = std::fabs(mesh.vertices[i].x - x0.x);
    return field;
  }
  if (domain.is_convex()) {
    for (long i = 0; i < n; ++i) out[i] = distance(mesh.vertices[i], x0);
    return field;
  }
  const PolygonPaths paths(domain.vertices());
  const auto reach = paths.to_reflex(x0);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = paths.distance_with(x0, reach, mesh.vertices[i]);
  for (long i = 0; i < n; ++i)
    if (!std::isfinite(out[i])) throw NumericalError("geodesic_distance: mesh vertex unreachable inside the polygon");
  return field;
}

// ---------------------------------------------------------------------------
// Inradius

namespace {

// Largest inscribed circle of a convex polygon: the optimum of the linear
// program max r s.t. n_i.x + r <= c_i sits on three active edge lines.
double convex_inradius(std::span<const Point> poly) {
  const std::size_t m = poly.size();
  std::vector<Point> normal(m);
  std::vector<double> offset(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Point e = poly[(i + 1) % m] - poly[i];
    normal[i] = (1.0 / norm(e)) * Point{e.y, -e.x};
    offset[i] = dot(normal[i], poly[i]);
  }
  const double slack = 1e-12 * polygon_extent(poly);
  double best = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k) {
        // [n_i 1; n_j 1; n_k 1] (x, y, r) = (c_i, c_j, c_k), Cramer's rule.
        const double a[3][3] = {{normal[i].x, normal[i].y, 1.0},
                                {normal[j].x, normal[j].y, 1.0},
                                {normal[k].x, normal[k].y, 1.0}};
        const double c[3] = {offset[i], offset[j], offset[k]};
        const auto det3 = [](const double q[3][3]) {
          return q[0][0] * (q[1][1] * q[2][2] - q[1][2] * q[2][1]) -
                 q[0][1] * (q[1][0] * q[2][2] - q[1][2] * q[2][0]) +
                 q[0][2] * (q[1][0] * q[2][1] - q[1][1] * q[2][0]);
        };
        const double det = det3(a);
        if (std::fabs(det) < 1e-12) continue;
        double sol[3];
        for (int col = 0; col < 3; ++col) {
          double q[3][3];
          for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) q[r][s] = s == col ? c[r] : a[r][s];
          sol[col] = det3(q) / det;
        }
        const Point x{sol[0], sol[1]};
        const double r = sol[2];
        if (r <= best) continue;
        bool feasible = true;
        for (std::size_t l = 0; l < m && feasible; ++l) feasible = dot(normal[l], x) + r <= offset[l] + slack;
        if (feasible) best = r;
      }
  return best;
}

double sampled_inradius(const Domain& domain) {
  const auto& poly = domain.vertices();
  double lo_x = poly[0].x, hi_x = lo_x, lo_y = poly[0].y, hi_y = lo_y;
  for (const Point& p : poly) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  const double step = std::max(hi_x - lo_x, hi_y - lo_y) / 100.0;
  std::vector<std::pair<double, Point>> seeds;
  for (double y = lo_y + 0.5 * step; y < hi_y; y += step)
    for (double x = lo_x + 0.5 * step; x < hi_x; x += step)
      if (double d = domain.distance_to_boundary({x, y}); d > 0) seeds.emplace_back(d, Point{x, y});
  std::sort(seeds.begin(), seeds.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  if (seeds.size() > 8) seeds.resize(8);
  double best = seeds.empty() ? 0.0 : seeds.front().first;
  const Point dirs[8] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {0.7071067811865476, 0.7071067811865476},
                         {-0.7071067811865476, 0.7071067811865476}, {0.7071067811865476, -0.7071067811865476},
                         {-0.7071067811865476, -0.7071067811865476}};
  for (auto [value, x] : seeds) {
    for (double s = step; s > 1e-12 * step; ) {
      bool improved = false;
      for (const Point& d : dirs) {
        const Point y = x + s * d;
        const double v = domain.distance_to_boundary(y);
        if (v > value) {
          value = v;
          x = y;
          improved = true;
        }
      }
      if (!improved) s *= 0.5;
    }
    best = std::max(best, value);
  }
  return best;
}

}  // namespace

double inradius(const Domain& domain) {
  switch (domain.kind()) {
    case DomainKind::Interval: return 0.5 * (domain.b() - domain.a());
    case DomainKind::Disk: return domain.radius();
    case DomainKind::ConvexPolygon: return convex_inradius(domain.vertices());
    case DomainKind::SimplePolygon: return sampled_inradius(domain);
  }
  return 0.0;
}

GeometryReport geometry_report(const Domain& domain) {
  GeometryReport r;
  r.diameter = intrinsic_diameter(domain).value;
  r.inradius = inradius(domain);
  r.volume = volume(domain);
  r.lambda_inf_neumann = 2.0 / r.diameter;
  r.lambda_inf_dirichlet = 1.0 / r.inradius;
  r.isodiametric_ball_radius =
      domain.dim() == 1 ? 0.5 * r.volume : std::sqrt(r.volume / std::numbers::pi);
  return r;
}

}  // namespace plap
