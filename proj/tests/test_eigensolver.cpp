#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "plap/discretize.hpp"
#include "plap/eigensolver.hpp"
#include "plap/mesh.hpp"

using namespace plap;

namespace {

EigenResult solve(const Domain& d, const Mesh& m, double p, SolverOptions opts = {}) {
  return minimize_rayleigh(m, p, initial_guess(d, m, opts.seed), opts);
}

}  // namespace

TEST_CASE("oracle self-checks") {
  CHECK(oracle::interval_eigenvalue(2.0) == doctest::Approx(std::numbers::pi).epsilon(1e-9));
  CHECK(oracle::bessel_j1_prime_root() == doctest::Approx(1.8411837813).epsilon(1e-9));
  // The quadrature agrees with the Beta-function closed form.
  for (double p : {3.0, 16.0, 128.0})
    CHECK(oracle::interval_eigenvalue(p) ==
          doctest::Approx(std::pow(p - 1, 1 / p) * 2 * std::numbers::pi / (p * std::sin(std::numbers::pi / p)))
              .epsilon(1e-8));
}

TEST_CASE("solver options validation") {
  SolverOptions o;
  o.backtrack = 1.0;
  CHECK_THROWS_AS(o.validate(), InputError);
  o = {};
  o.tol_rel = 0;
  CHECK_THROWS_AS(o.validate(), InputError);
  const Mesh m = build_mesh(oracle::unit_interval(), 0.1);
  CHECK_THROWS_AS(minimize_rayleigh(m, 2.0, ScalarField::from_function(m, [](Point) { return 1.0; }), {}),
                  InputError);
}

TEST_CASE("interval p=2 matches pi") {
  const Domain d = oracle::unit_interval();
  const Mesh m = build_mesh(d, 1.0 / 256);
  const EigenResult r = solve(d, m, 2.0);
  CHECK(r.converged);
  CHECK(r.lambda_p == doctest::Approx(oracle::interval_eigenvalue(2.0)).epsilon(0.01));
  CHECK(r.euler_residual <= 1e-3);
  CHECK(p_norm(r.u, 2.0, m) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::fabs(r.final_constraint) <= r.constraint_scale * 1e-11);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].rayleigh <= r.trace[i - 1].rayleigh);
}

TEST_CASE("refinement reduces the error") {
  const Domain d = oracle::unit_interval();
  double prev = 0.0;
  for (int n : {32, 64, 128, 256}) {
    const Mesh m = build_mesh(d, 1.0 / n);
    const double err = std::fabs(solve(d, m, 2.0).lambda_p - std::numbers::pi);
    if (prev > 0) CHECK(err <= 0.6 * prev);
    prev = err;
  }
}

TEST_CASE("euler residual") {
  const Mesh m = build_mesh(oracle::unit_interval(), 1.0 / 256);
  EigenResult exact;
  exact.p = 2.0;
  exact.u = ScalarField::from_function(m, [](Point q) { return std::cos(std::numbers::pi * q.x); });
  exact.lambda_p = std::numbers::pi;
  CHECK(euler_residual(exact, m) <= 5e-3);

  EigenResult constant = exact;
  constant.u = ScalarField::from_function(m, [](Point) { return 1.0; });
  CHECK(euler_residual(constant, m) > 0.1);

  const Domain d = oracle::unit_interval();
  SolverOptions tight;
  tight.tol_rel = 1e-12;
  CHECK(solve(d, m, 4.0, tight).euler_residual <= 5e-3);
}

TEST_CASE("square and disk oracles") {
  const Domain sq = oracle::square();
  const Mesh ms = build_mesh(sq, 1.0 / 32);
  CHECK(solve(sq, ms, 2.0).lambda_p == doctest::Approx(std::numbers::pi / 2).epsilon(0.02));

  const Domain disk = Domain::disk({0, 0}, 1.0);
  const Mesh md = build_mesh(disk, 0.05);
  CHECK(solve(disk, md, 2.0).lambda_p == doctest::Approx(oracle::bessel_j1_prime_root()).epsilon(0.02));
}

TEST_CASE("payne-weinberger bound") {
  CHECK(payne_weinberger_bound(2.0, 3.0) == doctest::Approx(std::numbers::pi / 3.0).epsilon(1e-15));
  CHECK(std::fabs(payne_weinberger_bound(1e6, 1.5) - 2.0 / 1.5) <= 1e-4);
  CHECK(payne_weinberger_bound(4.0, 1.0) == doctest::Approx(2.9237).epsilon(1e-4));
  CHECK(payne_weinberger_bound(4.0, 1.0) == doctest::Approx(oracle::interval_eigenvalue(4.0)).epsilon(1e-8));
}

TEST_CASE("extrapolation") {
  std::vector<std::pair<double, double>> model;
  for (double p : {8.0, 16.0, 32.0, 64.0}) model.emplace_back(p, 0.7 + 3.0 / p);
  Extrapolation e = extrapolate_limit(model);
  CHECK(e.limit == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(e.slope == doctest::Approx(3.0).epsilon(1e-9));
  CHECK_FALSE(e.flagged);

  std::vector<std::pair<double, double>> constant{{2, 1.25}, {4, 1.25}, {8, 1.25}};
  CHECK(extrapolate_limit(constant).limit == doctest::Approx(1.25).epsilon(1e-14));

  std::vector<std::pair<double, double>> closed;
  for (double p : {32.0, 64.0, 128.0}) closed.emplace_back(p, oracle::interval_eigenvalue(p));
  CHECK(extrapolate_limit(closed).limit == doctest::Approx(2.0).epsilon(0.01));

  std::vector<std::pair<double, double>> two{{2, 3.0}, {4, 2.9}};
  e = extrapolate_limit(two);
  CHECK(e.flagged);
  CHECK(e.limit == 2.9);
}

TEST_CASE("upper-bound certificate") {
  const Domain d = oracle::unit_interval();
  const Mesh m = build_mesh(d, 1.0 / 256);
  const double b = upper_bound_certificate(m, d, {0, 0}, 128.0);
  CHECK(b == doctest::Approx(2.0).epsilon(0.03));
  CHECK(b >= 2.0 * (1 - 4.0 / 256));

  const Domain sq = oracle::square();
  const Mesh ms = build_mesh(sq, 1.0 / 16);
  CHECK(upper_bound_certificate(ms, sq, {-1, -1}, 64.0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(0.10));
  CHECK_THROWS_AS(upper_bound_certificate(ms, sq, {2, 2}, 4.0), InputError);

  // Dominates the solver on the same mesh.
  for (double p : {2.0, 8.0}) {
    const EigenResult r = solve(sq, ms, p);
    CHECK(upper_bound_certificate(ms, sq, sq.centroid(), p) >= r.lambda_p * (1 - 0.01));
  }
}

TEST_CASE("minimizer dominates random feasible fields") {
  const Domain d = Domain::convex_polygon({{0, 0}, {3, 0}, {2, 1}, {1, 1}});
  const Mesh m = build_mesh(d, 0.15);
  for (double p : {2.0, 6.0}) {
    const EigenResult r = solve(d, m, p);
    std::mt19937_64 gen(5);
    std::normal_distribution<double> n01;
    for (int k = 0; k < 100; ++k) {
      // Smooth random fields: low-order polynomials plus noise.
      const double a = n01(gen), b = n01(gen), c = n01(gen), e = n01(gen);
      ScalarField f = ScalarField::from_function(m, [&](Point q) { return a * q.x + b * q.y + c * q.x * q.y + e * q.x * q.x; });
      for (auto& v : f.values) v += 0.05 * n01(gen);
      const ScalarField w = project_constraint(f, p, m).field;
      CHECK(r.lambda_p <= rayleigh_quotient(w, p, m) + 1e-9);
    }
  }
}

TEST_CASE("sweep on the interval") {
  const Domain d = oracle::unit_interval();
  const Mesh m = build_mesh(d, 1.0 / 256);
  const std::vector<double> ps{2, 4, 8, 16, 32, 64};
  const SweepReport rep = sweep_p(d, m, ps, {});
  REQUIRE(rep.results.size() == ps.size());
  for (const auto& r : rep.results) CHECK(r.lambda_p == doctest::Approx(oracle::interval_eigenvalue(r.p)).epsilon(0.02));
  CHECK(rep.lambda_inf_exact == 2.0);
  for (const auto& [name, ok] : rep.verdicts) {
    CAPTURE(name);
    CHECK(ok);
  }
  for (std::size_t i = 1; i < rep.results.size(); ++i) {
    CHECK(std::isfinite(rep.warm_start_rayleigh[i]));
    CHECK(rep.warm_start_rayleigh[i] <= 3 * rep.results[i - 1].lambda_p);
  }
}

TEST_CASE("sweep input errors and partial reports") {
  const Domain d = oracle::unit_interval();
  const Mesh m = build_mesh(d, 1.0 / 64);
  const std::vector<double> bad1{1.5, 4}, bad2{4, 4}, empty{};
  CHECK_THROWS_AS(sweep_p(d, m, bad1, {}), InputError);
  CHECK_THROWS_AS(sweep_p(d, m, bad2, {}), InputError);
  CHECK_THROWS_AS(sweep_p(d, m, empty, {}), InputError);
  const std::vector<double> single{2};
  const SweepReport one = sweep_p(d, m, single, {});
  CHECK(one.extrapolation_flagged);
  CHECK_FALSE(one.verdicts.at("extrapolation_sufficient"));
}

TEST_CASE("initial guess and sign normalization") {
  const Domain d = oracle::square();
  const Mesh m = build_mesh(d, 0.1);
  const ScalarField a = initial_guess(d, m, 3), b = initial_guess(d, m, 3), c = initial_guess(d, m, 4);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  ScalarField f = ScalarField::from_function(m, [](Point q) { return q.x + q.y; });
  normalize_sign(f, d, m);
  // Lexicographically smallest diameter endpoint is (-1,-1).
  CHECK(f[m.nearest_vertex({-1, -1})] >= 0);
}
