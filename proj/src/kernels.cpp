#include "plap/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plap/discretize.hpp"

namespace plap::kernels {

namespace {

inline double scaled_power(double v, double scale, double e) {
  const double r = std::fabs(v) / scale;
  return r == 0.0 ? (e == 0.0 ? 1.0 : 0.0) : std::pow(r, e);
}

inline Point cell_gradient(const Mesh& mesh, std::span<const double> u, std::size_t c) {
  const auto& cell = mesh.cells[c];
  const auto& g = mesh.basis_gradients[c];
  Point out{};
  for (int k = 0; k < mesh.nodes_per_cell(); ++k) out = out + u[cell[k]] * g[k];
  return out;
}

inline double cell_flux(const Mesh& mesh, std::span<const Point> grads, double G, double p, int c, int v) {
  const auto& cell = mesh.cells[c];
  int k = 0;
  while (cell[k] != v) ++k;
  const Point g = grads[c];
  const double weight = mesh.cell_measures[c] * scaled_power(norm(g), G, p - 2.0);
  return weight * dot((1.0 / G) * g, mesh.basis_gradients[c][k]);
}

}  // namespace

std::vector<double> magnitudes(std::span<const Point> grads) {
  std::vector<double> out(grads.size());
  for (std::size_t i = 0; i < grads.size(); ++i) out[i] = norm(grads[i]);
  return out;
}

namespace serial {

double power_sum(std::span<const double> w, std::span<const double> v, double scale, double e) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * scaled_power(v[i], scale, e);
  return s;
}

double signed_power_sum(std::span<const double> w, std::span<const double> v, double scale, double e) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = w[i] * scaled_power(v[i], scale, e);
    s += v[i] < 0 ? -t : (v[i] > 0 ? t : 0.0);
  }
  return s;
}

void cell_gradients(const Mesh& mesh, std::span<const double> u, std::span<Point> out) {
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) out[c] = cell_gradient(mesh, u, c);
}

void energy_gradient(const Mesh& mesh, std::span<const Point> grads, double G, double p, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c)
    for (int k = 0; k < mesh.nodes_per_cell(); ++k) {
      const int v = mesh.cells[c][k];
      out[v] += cell_flux(mesh, grads, G, p, static_cast<int>(c), v);
    }
}

void min_distances(std::span<const Point> a, std::span<const Point> b, std::span<double> out) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& q : b) best = std::min(best, distance(a[i], q));
    out[i] = best;
  }
}

}  // namespace serial

namespace parallel {

double power_sum(std::span<const double> w, std::span<const double> v, double scale, double e) {
  const long n = static_cast<long>(v.size());
  std::vector<double> terms(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) terms[i] = w[i] * scaled_power(v[i], scale, e);
  return pairwise_sum(terms.data(), terms.size());
}

double signed_power_sum(std::span<const double> w, std::span<const double> v, double scale, double e) {
  const long n = static_cast<long>(v.size());
  std::vector<double> terms(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const double t = w[i] * scaled_power(v[i], scale, e);
    terms[i] = v[i] < 0 ? -t : (v[i] > 0 ? t : 0.0);
  }
  return pairwise_sum(terms.data(), terms.size());
}

void cell_gradients(const Mesh& mesh, std::span<const double> u, std::span<Point> out) {
  const long n = static_cast<long>(mesh.num_cells());
#pragma omp parallel for schedule(static)
  for (long c = 0; c < n; ++c) out[c] = cell_gradient(mesh, u, c);
}

void energy_gradient(const Mesh& mesh, std::span<const Point> grads, double G, double p, std::span<double> out) {
  // Gather per vertex over its cell list: no write conflicts, fixed order.
  const long n = static_cast<long>(mesh.num_vertices());
#pragma omp parallel for schedule(static)
  for (long v = 0; v < n; ++v) {
    double s = 0.0;
    for (int c : mesh.cells_of(static_cast<int>(v))) s += cell_flux(mesh, grads, G, p, c, static_cast<int>(v));
    out[v] = s;
  }
}

void min_distances(std::span<const Point> a, std::span<const Point> b, std::span<double> out) {
  const long n = static_cast<long>(a.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& q : b) best = std::min(best, distance(a[i], q));
    out[i] = best;
  }
}

}  // namespace parallel

}  // namespace plap::kernels
