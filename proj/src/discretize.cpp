#include "plap/discretize.hpp"

#include <algorithm>
#include <limits>

#include "plap/kernels.hpp"

namespace plap {

double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

ScalarField::ScalarField(const Mesh& mesh, std::vector<double> v) : values(std::move(v)), mesh_id(mesh.checksum) {
  if (values.size() != mesh.num_vertices()) throw InputError("ScalarField: value count does not match the mesh");
  for (double x : values)
    if (!std::isfinite(x)) throw InputError("ScalarField: non-finite value");
}

ScalarField ScalarField::from_function(const Mesh& mesh, const std::function<double(Point)>& f) {
  ScalarField out(mesh);
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) out.values[i] = f(mesh.vertices[i]);
  return out;
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  return m;
}

namespace {

void check_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("p-norm: exponent must be finite and >= 1");
}

void check_field(const ScalarField& f, const Mesh& mesh) {
  if (f.size() != mesh.num_vertices()) throw InputError("field size does not match the mesh");
}

double factored_norm(std::span<const double> weights, std::span<const double> values, double p, double volume) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  if (m == 0.0) return 0.0;
  const double s = kernels::parallel::power_sum(weights, values, m, p);
  return m * std::pow(s / volume, 1.0 / p);
}

}  // namespace

double p_norm(const ScalarField& f, double p, const Mesh& mesh) {
  check_exponent(p);
  check_field(f, mesh);
  if (f.values.empty()) throw InputError("p_norm: empty field");
  return factored_norm(mesh.vertex_weights, f.values, p, mesh.total_measure());
}

GradientField gradient(const ScalarField& f, const Mesh& mesh) {
  check_field(f, mesh);
  GradientField g;
  g.vectors.resize(mesh.num_cells());
  kernels::parallel::cell_gradients(mesh, f.values, g.vectors);
  return g;
}

double grad_p_norm(const ScalarField& f, double p, const Mesh& mesh) {
  check_exponent(p);
  const GradientField g = gradient(f, mesh);
  const std::vector<double> mags = kernels::magnitudes(g.vectors);
  return factored_norm(mesh.cell_measures, mags, p, mesh.total_measure());
}

double constraint_value(const ScalarField& f, double p, const Mesh& mesh) {
  check_field(f, mesh);
  const double m = f.max_abs();
  if (m == 0.0) return 0.0;
  return std::pow(m, p - 1.0) * kernels::parallel::signed_power_sum(mesh.vertex_weights, f.values, m, p - 1.0);
}

Projection project_constraint(const ScalarField& f, double p, const Mesh& mesh, double rel_tol) {
  check_field(f, mesh);
  if (!(p > 1.0)) throw InputError("project_constraint: p must exceed 1");
  const auto [lo_it, hi_it] = std::minmax_element(f.values.begin(), f.values.end());
  double lo = *lo_it, hi = *hi_it;
  const double spread = hi - lo;
  if (!(spread > 1e-14 * std::max(std::fabs(lo), std::fabs(hi)))) {
    throw InputError("project_constraint: constant field has no feasible shift");
  }

  std::vector<double> shifted(f.size());
  const auto& w = mesh.vertex_weights;
  // Values of g and of the tolerance reference in units of spread^(p-1).
  const auto evaluate = [&](double c, double& g, double& scale) {
    for (std::size_t i = 0; i < f.size(); ++i) shifted[i] = f.values[i] - c;
    g = kernels::parallel::signed_power_sum(w, shifted, spread, p - 1.0);
    scale = kernels::parallel::power_sum(w, shifted, spread, p - 1.0);
  };

  double c = 0.0, g = 0.0, scale = 0.0;
  if (p == 2.0) {
    double wsum = 0.0;
    std::vector<double> wf(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) wf[i] = w[i] * f.values[i];
    wsum = pairwise_sum(w.data(), w.size());
    c = pairwise_sum(wf.data(), wf.size()) / wsum;
    evaluate(c, g, scale);
  } else {
    // g(c) is strictly decreasing: g(lo) > 0 > g(hi).
    c = 0.5 * (lo + hi);
    for (int it = 0; it < 400; ++it) {
      evaluate(c, g, scale);
      if (std::fabs(g) <= rel_tol * scale) break;
      if (g > 0)
        lo = c;
      else
        hi = c;
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      c = mid;
    }
    evaluate(c, g, scale);
  }

  Projection out;
  out.shift = c;
  out.field = ScalarField(mesh);
  out.field.values = shifted;
  const double unit = std::pow(spread, p - 1.0);
  out.residual = g * unit;
  out.scale = scale * unit;
  return out;
}

double rayleigh_quotient(const ScalarField& f, double p, const Mesh& mesh) {
  const double denom = p_norm(f, p, mesh);
  if (!(denom > 0.0)) throw InputError("rayleigh_quotient: zero field");
  return grad_p_norm(f, p, mesh) / denom;
}

}  // namespace plap
