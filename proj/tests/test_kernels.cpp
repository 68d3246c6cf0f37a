#include <doctest.h>

#include <omp.h>

#include <random>

#include "oracles.hpp"
#include "plap/kernels.hpp"
#include "plap/mesh.hpp"

using namespace plap;
namespace ser = plap::kernels::serial;
namespace par = plap::kernels::parallel;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

}  // namespace

TEST_CASE("parallel kernels agree with the serial reference") {
  const Mesh m = build_mesh(Domain::disk({0, 0}, 1.0), 0.04);
  const Mesh mi = build_mesh(oracle::unit_interval(), 1.0 / 1024);
  for (const Mesh* mesh : {&m, &mi}) {
    const auto u = random_values(mesh->num_vertices(), 7);
    for (double e : {1.0, 3.0, 127.0}) {
      const double s = ser::power_sum(mesh->vertex_weights, u, 1.0, e);
      CHECK(par::power_sum(mesh->vertex_weights, u, 1.0, e) == doctest::Approx(s).epsilon(1e-12));
      const double t = ser::signed_power_sum(mesh->vertex_weights, u, 1.0, e);
      CHECK(par::signed_power_sum(mesh->vertex_weights, u, 1.0, e) == doctest::Approx(t).epsilon(1e-10).scale(s));
    }

    std::vector<Point> gs(mesh->num_cells()), gp(mesh->num_cells());
    ser::cell_gradients(*mesh, u, gs);
    par::cell_gradients(*mesh, u, gp);
    CHECK(gs == gp);

    double G = 0.0;
    for (const Point& g : gs) G = std::max(G, norm(g));
    for (double p : {2.0, 9.0, 64.0}) {
      std::vector<double> es(mesh->num_vertices()), ep(mesh->num_vertices());
      ser::energy_gradient(*mesh, gs, G, p, es);
      par::energy_gradient(*mesh, gs, G, p, ep);
      CHECK(es == ep);  // same per-vertex accumulation order
    }
  }
}

TEST_CASE("min_distances") {
  const std::vector<Point> a{{0, 0}, {1, 1}, {3, 0}};
  const std::vector<Point> b{{0, 1}, {2, 0}};
  std::vector<double> ds(3), dp(3);
  ser::min_distances(a, b, ds);
  par::min_distances(a, b, dp);
  CHECK(ds == dp);
  CHECK(ds[0] == doctest::Approx(1.0));
  CHECK(ds[1] == doctest::Approx(1.0));
  CHECK(ds[2] == doctest::Approx(1.0));
}

TEST_CASE("parallel results do not depend on the thread count") {
  const Mesh m = build_mesh(oracle::square(), 0.03);
  const auto u = random_values(m.num_vertices(), 11);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double one = par::power_sum(m.vertex_weights, u, 1.0, 5.0);
  const double one_signed = par::signed_power_sum(m.vertex_weights, u, 1.0, 5.0);
  omp_set_num_threads(std::max(4, saved));
  CHECK(par::power_sum(m.vertex_weights, u, 1.0, 5.0) == one);
  CHECK(par::signed_power_sum(m.vertex_weights, u, 1.0, 5.0) == one_signed);
  omp_set_num_threads(saved);
}
