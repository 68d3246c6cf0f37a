#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "plap/common.hpp"
#include "plap/mesh.hpp"

namespace plap {

/// One value per mesh vertex, tagged with the owning mesh's checksum.
struct ScalarField {
  std::vector<double> values;
  std::uint64_t mesh_id = 0;

  ScalarField() = default;
  explicit ScalarField(const Mesh& mesh) : values(mesh.num_vertices(), 0.0), mesh_id(mesh.checksum) {}
  ScalarField(const Mesh& mesh, std::vector<double> v);

  /// Samples `f` at every vertex.
  static ScalarField from_function(const Mesh& mesh, const std::function<double(Point)>& f);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  double max_abs() const;
};

/// Elementwise-constant gradient of the P1 interpolant, one vector per cell.
struct GradientField {
  std::vector<Point> vectors;
};

/// Measure-normalized p-norm ((1/|Omega|) sum_i w_i |f_i|^p)^(1/p) with
/// lumped vertex weights. Factored by max|f| so large p cannot overflow.
double p_norm(const ScalarField& f, double p, const Mesh& mesh);

GradientField gradient(const ScalarField& f, const Mesh& mesh);

/// Measure-normalized p-norm of |grad f| with cell measures as weights.
double grad_p_norm(const ScalarField& f, double p, const Mesh& mesh);

/// sum_i w_i |f_i|^(p-2) f_i, computed as M^(p-1) * (factored sum).
double constraint_value(const ScalarField& f, double p, const Mesh& mesh);

struct Projection {
  ScalarField field;
  double shift = 0.0;     ///< the constant c removed from the input
  double residual = 0.0;  ///< constraint_value of the result
  double scale = 0.0;     ///< tolerance reference: sum_i w_i |f_i - c|^(p-1)
};

/// Shifts `f` by the unique constant that makes constraint_value vanish.
/// The constraint is strictly decreasing in the shift and changes sign on
/// [min f, max f]; bisection runs until |g| <= rel_tol * scale.
Projection project_constraint(const ScalarField& f, double p, const Mesh& mesh, double rel_tol = 1e-12);

/// grad_p_norm / p_norm, the Rayleigh value whose p-th power is the
/// energy ratio. Invariant under scaling of f.
double rayleigh_quotient(const ScalarField& f, double p, const Mesh& mesh);

/// Deterministic pairwise summation.
double pairwise_sum(const double* data, std::size_t n);

}  // namespace plap
