// Serial reference kernels against their OpenMP versions on a disk mesh.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "plap/kernels.hpp"
#include "plap/mesh.hpp"

using namespace plap;

namespace {

struct Fixture {
  Mesh mesh;
  std::vector<double> u, w;
  std::vector<Point> grads, boundary;

  explicit Fixture(double h) : mesh(build_mesh(Domain::disk({0, 0}, 1.0), h)) {
    for (const Point& q : mesh.vertices) u.push_back(std::sin(3 * q.x) + q.y * q.y - 0.3);
    w = mesh.vertex_weights;
    grads.resize(mesh.num_cells());
    kernels::serial::cell_gradients(mesh, u, grads);
    for (int v : mesh.boundary_vertices) boundary.push_back(mesh.vertices[v]);
  }
};

const Fixture& fixture(benchmark::State& state) {
  static const Fixture coarse(0.04), fine(0.01);
  return state.range(0) == 0 ? coarse : fine;
}

template <bool Parallel>
void BM_PowerSum(benchmark::State& state) {
  const Fixture& f = fixture(state);
  for (auto _ : state) {
    const double s = Parallel ? kernels::parallel::power_sum(f.w, f.u, 1.5, 16.0)
                              : kernels::serial::power_sum(f.w, f.u, 1.5, 16.0);
    benchmark::DoNotOptimize(s);
  }
  state.counters["vertices"] = static_cast<double>(f.u.size());
}

template <bool Parallel>
void BM_SignedPowerSum(benchmark::State& state) {
  const Fixture& f = fixture(state);
  for (auto _ : state) {
    const double s = Parallel ? kernels::parallel::signed_power_sum(f.w, f.u, 1.5, 15.0)
                              : kernels::serial::signed_power_sum(f.w, f.u, 1.5, 15.0);
    benchmark::DoNotOptimize(s);
  }
}

template <bool Parallel>
void BM_CellGradients(benchmark::State& state) {
  const Fixture& f = fixture(state);
  std::vector<Point> out(f.mesh.num_cells());
  for (auto _ : state) {
    if (Parallel)
      kernels::parallel::cell_gradients(f.mesh, f.u, out);
    else
      kernels::serial::cell_gradients(f.mesh, f.u, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["cells"] = static_cast<double>(out.size());
}

template <bool Parallel>
void BM_EnergyGradient(benchmark::State& state) {
  const Fixture& f = fixture(state);
  std::vector<double> out(f.mesh.num_vertices());
  for (auto _ : state) {
    if (Parallel)
      kernels::parallel::energy_gradient(f.mesh, f.grads, 4.0, 16.0, out);
    else
      kernels::serial::energy_gradient(f.mesh, f.grads, 4.0, 16.0, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_MinDistances(benchmark::State& state) {
  const Fixture& f = fixture(state);
  std::vector<double> out(f.mesh.num_vertices());
  for (auto _ : state) {
    if (Parallel)
      kernels::parallel::min_distances(f.mesh.vertices, f.boundary, out);
    else
      kernels::serial::min_distances(f.mesh.vertices, f.boundary, out);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

// Arg 0: h = 0.04, arg 1: h = 0.01.
BENCHMARK(BM_PowerSum<false>)->Name("power_sum/serial")->Arg(0)->Arg(1);
BENCHMARK(BM_PowerSum<true>)->Name("power_sum/parallel")->Arg(0)->Arg(1);
BENCHMARK(BM_SignedPowerSum<false>)->Name("signed_power_sum/serial")->Arg(0)->Arg(1);
BENCHMARK(BM_SignedPowerSum<true>)->Name("signed_power_sum/parallel")->Arg(0)->Arg(1);
BENCHMARK(BM_CellGradients<false>)->Name("cell_gradients/serial")->Arg(0)->Arg(1);
BENCHMARK(BM_CellGradients<true>)->Name("cell_gradients/parallel")->Arg(0)->Arg(1);
BENCHMARK(BM_EnergyGradient<false>)->Name("energy_gradient/serial")->Arg(0)->Arg(1);
BENCHMARK(BM_EnergyGradient<true>)->Name("energy_gradient/parallel")->Arg(0)->Arg(1);
BENCHMARK(BM_MinDistances<false>)->Name("min_distances/serial")->Arg(0)->Arg(1);
BENCHMARK(BM_MinDistances<true>)->Name("min_distances/parallel")->Arg(0)->Arg(1);

BENCHMARK_MAIN();
