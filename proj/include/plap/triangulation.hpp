#pragma once

#include <array>
#include <span>
#include <vector>

#include "plap/common.hpp"

namespace plap {

struct Triangulation {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
};

/// Constrained Delaunay triangulation of a simple counter-clockwise polygon
/// with additional strictly interior points. Boundary vertices come first,
/// in polygon order. When `max_edge` > 0, triangles with a longer edge are
/// refined by centroid insertion until no edge exceeds it.
Triangulation constrained_delaunay(std::span<const Point> boundary,
                                   std::span<const Point> interior,
                                   double max_edge = 0.0);

}  // namespace plap
