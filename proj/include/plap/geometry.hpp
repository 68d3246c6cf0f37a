#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plap/common.hpp"

namespace plap {

struct Mesh;
struct ScalarField;

enum class DomainKind { Interval, ConvexPolygon, SimplePolygon, Disk };

std::string to_string(DomainKind kind);
DomainKind domain_kind_from_string(const std::string& name);

/// Exact description of a bounded domain. Construction validates the shape;
/// polygons are stored counter-clockwise.
class Domain {
 public:
  static Domain interval(double a, double b);
  static Domain convex_polygon(std::vector<Point> vertices);
  static Domain simple_polygon(std::vector<Point> vertices);
  static Domain disk(Point center, double radius);

  DomainKind kind() const { return kind_; }
  int dim() const { return kind_ == DomainKind::Interval ? 1 : 2; }
  bool is_convex() const { return kind_ != DomainKind::SimplePolygon; }

  double a() const { return a_; }
  double b() const { return b_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  Point center() const { return center_; }
  double radius() const { return radius_; }

  /// Closed-domain membership with absolute slack `tol`.
  bool contains(Point p, double tol = 1e-12) const;

  /// Euclidean distance from an interior point to the boundary (0 outside).
  double distance_to_boundary(Point p) const;

  /// Euclidean (not intrinsic) diameter of the bounding geometry.
  double euclidean_extent() const;

  Point centroid() const;

  Domain scaled(double t) const;

 private:
  Domain() = default;

  DomainKind kind_ = DomainKind::Interval;
  double a_ = 0.0, b_ = 0.0;
  std::vector<Point> vertices_;
  Point center_;
  double radius_ = 0.0;
};

double polygon_area(std::span<const Point> polygon);
bool polygon_is_convex(std::span<const Point> polygon);
bool polygon_is_simple(std::span<const Point> polygon);

/// Regular n-gon inscribed in a circle, counter-clockwise from angle 0.
std::vector<Point> inscribed_polygon(Point center, double radius, int n);

/// Inscribed regular polygon with every edge no longer than `h`.
std::vector<Point> inscribed_polygon_for_spacing(Point center, double radius, double h);

double volume(const Domain& domain);

struct DiameterResult {
  double value = 0.0;
  Point first;   ///< lexicographically smaller endpoint
  Point second;
  /// Every endpoint pair realizing the diameter (within 1e-12 relative).
  /// Disks report the single pair along the first axis.
  std::vector<std::pair<Point, Point>> maximal_pairs;
};

/// Intrinsic (geodesic) diameter. `boundary_spacing` only matters for
/// nonconvex polygons; zero selects the default of extent/200.
DiameterResult intrinsic_diameter(const Domain& domain, double boundary_spacing = 0.0);

/// Shortest path length inside the closed domain between two points.
double geodesic_distance(const Domain& domain, Point from, Point to);

/// Per-vertex geodesic distance to `x0`.
ScalarField geodesic_distance(const Domain& domain, Point x0, const Mesh& mesh);

double inradius(const Domain& domain);

struct GeometryReport {
  double diameter = 0.0;
  double inradius = 0.0;
  double volume = 0.0;
  double lambda_inf_neumann = 0.0;
  double lambda_inf_dirichlet = 0.0;
  double isodiametric_ball_radius = 0.0;
};

GeometryReport geometry_report(const Domain& domain);

/// Limiting eigenvalue 2/diam of the ball with the same volume.
inline double ball_lambda_inf(const GeometryReport& report) {
  return 1.0 / report.isodiametric_ball_radius;
}

}  // namespace plap
