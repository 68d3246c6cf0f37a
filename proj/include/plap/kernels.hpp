#pragma once

// Data-parallel inner loops of the solver and the checks. Every kernel has a
// plain serial reference (kept for testing and benchmarking) and an OpenMP
// version. The OpenMP versions write per-element terms and reduce them with
// a fixed pairwise tree, so results do not depend on the thread count.

#include <span>
#include <vector>

#include "plap/common.hpp"
#include "plap/mesh.hpp"

namespace plap::kernels {

namespace serial {

/// sum_i w_i |v_i / scale|^e
double power_sum(std::span<const double> w, std::span<const double> v, double scale, double e);
/// sum_i w_i |v_i / scale|^e sign(v_i)
double signed_power_sum(std::span<const double> w, std::span<const double> v, double scale, double e);
void cell_gradients(const Mesh& mesh, std::span<const double> u, std::span<Point> out);
/// out_i = sum_{cells c at i} |c| |g_c/G|^(p-2) (g_c/G) . grad phi_i
void energy_gradient(const Mesh& mesh, std::span<const Point> grads, double G, double p, std::span<double> out);
/// out_i = min_j |a_i - b_j|
void min_distances(std::span<const Point> a, std::span<const Point> b, std::span<double> out);

}  // namespace serial

namespace parallel {

double power_sum(std::span<const double> w, std::span<const double> v, double scale, double e);
double signed_power_sum(std::span<const double> w, std::span<const double> v, double scale, double e);
void cell_gradients(const Mesh& mesh, std::span<const double> u, std::span<Point> out);
void energy_gradient(const Mesh& mesh, std::span<const Point> grads, double G, double p, std::span<double> out);
void min_distances(std::span<const Point> a, std::span<const Point> b, std::span<double> out);

}  // namespace parallel

/// Gradient magnitudes of a cell gradient array.
std::vector<double> magnitudes(std::span<const Point> grads);

}  // namespace plap::kernels
