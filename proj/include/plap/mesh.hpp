#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "plap/common.hpp"
#include "plap/geometry.hpp"

namespace plap {

/// Boundary facet of a 2D mesh with its outward unit normal.
struct BoundaryEdge {
  int v0 = -1;
  int v1 = -1;
  Point normal;
};

/// Conforming simplicial mesh (segments in 1D, triangles in 2D) with P1
/// basis gradients and lumped vertex weights precomputed.
struct Mesh {
  int dim = 2;
  double h = 0.0;
  std::vector<Point> vertices;
  /// Cell vertex indices; 1D cells use the first two slots, the third is -1.
  std::vector<std::array<int, 3>> cells;
  std::vector<double> cell_measures;
  std::vector<double> vertex_weights;
  /// Gradient of each local hat function, per cell.
  std::vector<std::array<Point, 3>> basis_gradients;
  std::vector<int> boundary_vertices;  // sorted
  std::vector<char> on_boundary;       // per vertex
  std::vector<BoundaryEdge> boundary_edges;

  // CSR adjacency.
  std::vector<int> vertex_cell_offsets, vertex_cell_list;
  std::vector<int> vertex_nbr_offsets, vertex_nbr_list;

  std::uint64_t checksum = 0;

  int nodes_per_cell() const { return dim + 1; }
  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_cells() const { return cells.size(); }
  double total_measure() const;
  double max_edge_length() const;

  std::span<const int> cells_of(int v) const {
    return {vertex_cell_list.data() + vertex_cell_offsets[v],
            vertex_cell_list.data() + vertex_cell_offsets[v + 1]};
  }
  std::span<const int> neighbors_of(int v) const {
    return {vertex_nbr_list.data() + vertex_nbr_offsets[v],
            vertex_nbr_list.data() + vertex_nbr_offsets[v + 1]};
  }

  /// Index of the vertex closest to `p` (lowest index on ties).
  int nearest_vertex(Point p) const;

  /// Outward normals of the boundary facets touching vertex `v`
  /// (one for smooth boundary points, two at corners, ±x in 1D).
  std::vector<Point> boundary_normals(int v) const;
};

/// Builds a mesh of the domain with target edge length `h`.
/// Intervals and axis-aligned rectangles get structured grids; other
/// polygons and disks a constrained Delaunay triangulation. Disks are
/// replaced by the inscribed regular polygon with edges no longer than h.
Mesh build_mesh(const Domain& domain, double h);

/// Assembles a mesh from raw vertices and cells, computing measures,
/// weights, boundary data and adjacency. Throws InputError on degenerate
/// or inverted cells.
Mesh assemble_mesh(int dim, std::vector<Point> vertices,
                   std::vector<std::array<int, 3>> cells, double h);

/// Point location and linear interpolation of vertex data.
class MeshLocator {
 public:
  explicit MeshLocator(const Mesh& mesh);

  /// Cell containing `p` and its barycentric coordinates, or -1.
  int locate(Point p, std::array<double, 3>& bary) const;

  /// P1 interpolant at `p`; NaN outside the mesh.
  double interpolate(std::span<const double> values, Point p) const;

 private:
  const Mesh& mesh_;
  Point lo_, hi_;
  int nx_ = 1, ny_ = 1;
  std::vector<int> bucket_offsets_, bucket_cells_;
};

}  // namespace plap
