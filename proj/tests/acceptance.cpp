// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "plap/analysis.hpp"
#include "plap/domain_io.hpp"
#include "plap/eigensolver.hpp"
#include "plap/mesh.hpp"
#include "plap/report_io.hpp"

using namespace plap;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

struct Computed {
  std::string name;
  double p, lambda, pw;
};
std::vector<Computed> computed;

void record(const std::string& name, const EigenResult& r, double diam) {
  computed.push_back({name, r.p, r.lambda_p, payne_weinberger_bound(r.p, diam)});
}

void record(const std::string& name, const SweepReport& s) {
  for (const auto& r : s.results) record(name, r, s.diameter);
}

EigenResult solve(const Domain& d, const Mesh& m, double p) {
  const SolverOptions opts;
  return minimize_rayleigh(m, p, initial_guess(d, m, opts.seed), opts);
}

std::vector<std::pair<std::string, Domain>> convex_suite() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(fs::path(PLAP_TEST_DATA_DIR) / "suite"))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<std::pair<std::string, Domain>> out;
  for (const auto& f : files) out.emplace_back(f.stem().string(), load_domain(f));
  return out;
}

}  // namespace

int main() {
  const std::vector<double> schedule = default_p_schedule();
  const SolverOptions opts;

  // 1. Interval, p = 2.
  const Domain interval = oracle::unit_interval();
  const Mesh mi = build_mesh(interval, 1.0 / 256);
  {
    const EigenResult r = solve(interval, mi, 2.0);
    record("interval", r, 1.0);
    const double e = rel(r.lambda_p, oracle::interval_eigenvalue(2.0));
    report(1, "1D oracle", e <= 0.01, fmt("Lambda_2 = %.6f, pi = %.6f, rel err %.2e (tol 1e-2)", r.lambda_p, std::numbers::pi, e));
  }

  // 2. Interval sweep against the closed form.
  const SweepReport si = sweep_p(interval, mi, schedule, opts);
  record("interval", si);
  {
    double worst = 0.0;
    int n = 0;
    for (const auto& r : si.results)
      if (r.p <= 64) {
        worst = std::max(worst, rel(r.lambda_p, oracle::interval_eigenvalue(r.p)));
        ++n;
      }
    report(2, "1D p-sweep", si.complete && n == 6 && worst <= 0.02,
           fmt("%d exponents 2..64, worst rel err vs closed form %.2e (tol 2e-2)", n, worst));
  }

  // 3. Square, p = 2.
  const Domain square = oracle::square();
  {
    const Mesh m = build_mesh(square, 1.0 / 64);
    const EigenResult r = solve(square, m, 2.0);
    record("square h=1/64", r, intrinsic_diameter(square).value);
    const double e = rel(r.lambda_p, std::numbers::pi / 2);
    report(3, "2D separable oracle", e <= 0.02,
           fmt("Lambda_2 = %.6f, pi/2 = %.6f, rel err %.2e (tol 2e-2), %zu vertices", r.lambda_p, std::numbers::pi / 2, e,
               m.num_vertices()));
  }

  // 4. Disk, p = 2.
  {
    const Domain disk = Domain::disk({0, 0}, 1.0);
    const Mesh m = build_mesh(disk, 0.03);
    const EigenResult r = solve(disk, m, 2.0);
    record("disk", r, 2.0);
    const double root = oracle::bessel_j1_prime_root();
    const double e = rel(r.lambda_p, root);
    report(4, "Disk oracle", e <= 0.02, fmt("Lambda_2 = %.6f, j'_11 = %.6f, rel err %.2e (tol 2e-2)", r.lambda_p, root, e));
  }

  // 5. Limit theorem.
  const Mesh ms = build_mesh(square, 1.0 / 16);
  const SweepReport ss = sweep_p(square, ms, schedule, opts);
  record("square", ss);
  {
    const double es = rel(ss.lambda_inf_estimate, 1.0 / std::sqrt(2.0));
    const double ei = rel(si.lambda_inf_estimate, 2.0);
    report(5, "Limit theorem", ss.complete && !ss.extrapolation_flagged && es <= 0.05 && ei <= 0.02,
           fmt("square %.5f vs 0.70711 (rel %.2e, tol 5e-2); interval %.5f vs 2 (rel %.2e, tol 2e-2)",
               ss.lambda_inf_estimate, es, si.lambda_inf_estimate, ei));
  }

  const Domain rectangle = oracle::rectangle();
  const Mesh mr = build_mesh(rectangle, 1.0 / 16);
  const SweepReport sr = sweep_p(rectangle, mr, schedule, opts);
  record("rectangle", sr);

  // 10 needs solves on the whole convex suite; they also feed 6.
  const auto suite = convex_suite();
  std::vector<std::pair<Mesh, SweepReport>> suite_runs;
  for (const auto& [name, d] : suite) {
    const Mesh m = build_mesh(d, intrinsic_diameter(d).value / 24);
    SweepReport s = sweep_p(d, m, schedule, opts);
    record(name, s);
    suite_runs.emplace_back(m, std::move(s));
  }

  // 6. Payne-Weinberger.
  {
    double worst = std::numeric_limits<double>::infinity();
    std::string where;
    for (const auto& c : computed) {
      const double ratio = c.lambda / c.pw;
      if (ratio < worst) {
        worst = ratio;
        where = c.name + " p=" + format_number(c.p);
      }
    }
    report(6, "Payne-Weinberger", worst >= 0.99,
           fmt("%zu (domain, p) pairs, min Lambda_p / bound = %.5f at %s (tol 0.99)", computed.size(), worst,
               where.c_str()));
  }

  // 7. Inequality scan.
  {
    bool ok = suite.size() >= 11;
    int equalities = 0, convex_polygons = 0;
    bool disk_equal = false;
    for (const auto& [name, d] : suite) {
      const GeometryReport g = geometry_report(d);
      const bool equal = std::fabs(g.lambda_inf_neumann - g.lambda_inf_dirichlet) <= 1e-12;
      ok = ok && g.lambda_inf_neumann <= g.lambda_inf_dirichlet + 1e-12;
      ok = ok && g.lambda_inf_neumann <= ball_lambda_inf(g) + 1e-12;
      if (equal) ++equalities;
      if (d.kind() == DomainKind::Disk) disk_equal = equal;
      if (d.kind() == DomainKind::ConvexPolygon) ++convex_polygons;
    }
    ok = ok && convex_polygons >= 10 && disk_equal && equalities == 1;
    report(7, "Inequality scan", ok,
           fmt("%d convex polygons + disk, %d equality row(s), disk equal: %s", convex_polygons, equalities,
               disk_equal ? "yes" : "no"));
  }

  // 8. Affine regression: u = x1 on the square.
  {
    const Mesh m = build_mesh(square, 0.05);
    const ScalarField u = ScalarField::from_function(m, [](Point q) { return q.x; });
    const ResidualReport r05 = infinity_residuals(u, 0.5, m, 1e-8);
    const ResidualReport r10 = infinity_residuals(u, 1.0, m, 1e-8);
    const ResidualReport r13 = infinity_residuals(u, 1.3, m, 1e-8);
    bool boundary_only = true, interior_only = true, interior_where = true;
    for (const auto& p : r05.points)
      if (p.residual > 1e-8) boundary_only = boundary_only && p.region == Region::Boundary && std::fabs(p.location.x) == 1.0;
    for (const auto& p : r13.points)
      if (p.residual > 1e-8) {
        interior_only = interior_only && p.region != Region::Boundary;
        interior_where = interior_where && std::fabs(p.location.x) > 1.0 / 1.3;
      }
    const bool ok = r10.pass && !r05.pass && !r13.pass && boundary_only && interior_only && interior_where;
    report(8, "Affine regression", ok,
           fmt("lambda=1 %s (max %.1e); lambda=0.5 %s at x=+-1 boundary (%.3f); lambda=1.3 %s in |x|>1/1.3 (%.3f)",
               r10.pass ? "pass" : "fail", std::max(r10.max_interior_violation, r10.max_boundary_violation),
               r05.pass ? "pass" : "fail", r05.max_boundary_violation, r13.pass ? "pass" : "fail",
               r13.max_interior_violation));
  }

  // 9. Properties at p = 64.
  {
    bool ok = true;
    std::string detail;
    const std::tuple<const char*, const Domain*, const Mesh*, const SweepReport*> cases[] = {
        {"interval", &interval, &mi, &si}, {"square", &square, &ms, &ss}, {"rectangle", &rectangle, &mr, &sr}};
    for (const auto& [name, d, m, s] : cases) {
      const auto it = std::find_if(s->results.begin(), s->results.end(), [](const EigenResult& r) { return r.p == 64; });
      if (it == s->results.end()) {
        ok = false;
        continue;
      }
      const PropertyVerdicts v = property_checks(*it, *d, *m);
      bool here = true;
      for (const char* key :
           {"sign_change", "sup_inf_symmetry", "hotspot_on_boundary", "hotspot_at_diameter_endpoints", "no_closed_nodal_domain"})
        here = here && v.verdicts.at(key).pass;
      ok = ok && here;
      detail += fmt("%s%s asym %.1e offset %.3g/%.3g", detail.empty() ? "" : "; ", name,
                    v.verdicts.at("sup_inf_symmetry").measured, v.verdicts.at("hotspot_at_diameter_endpoints").measured,
                    v.verdicts.at("hotspot_at_diameter_endpoints").threshold);
    }
    report(9, "Property suite at p=64", ok, detail);
  }

  // 10. Upper-bound certificate.
  {
    bool dominates = true, close = true;
    double worst_gap = std::numeric_limits<double>::infinity(), worst_limit = 0.0;
    for (std::size_t k = 0; k < suite.size(); ++k) {
      const Domain& d = suite[k].second;
      const auto& [m, s] = suite_runs[k];
      for (const auto& r : s.results) {
        const double cert = upper_bound_certificate(m, d, d.centroid(), r.p);
        worst_gap = std::min(worst_gap, cert / r.lambda_p);
        dominates = dominates && cert >= r.lambda_p * (1 - 0.01);
      }
      // The p=128 endpoint check needs no solve, so it gets a finer mesh.
      const DiameterResult diam = intrinsic_diameter(d);
      const Mesh fine = build_mesh(d, diam.value / 64);
      const double at_end = std::min(upper_bound_certificate(fine, d, diam.first, 128.0),
                                     upper_bound_certificate(fine, d, diam.second, 128.0));
      const double e = rel(at_end, 2.0 / diam.value);
      worst_limit = std::max(worst_limit, e);
      close = close && e <= 0.10;
    }
    report(10, "Upper-bound certificate", dominates && close,
           fmt("min certificate / Lambda_p = %.4f (tol 0.99); worst p=128 endpoint rel err vs 2/diam %.3f (tol 0.10)",
               worst_gap, worst_limit));
  }

  // 11. Determinism.
  {
    const auto run = [&] {
      const Mesh m = build_mesh(rectangle, 0.125);
      const SweepReport s = sweep_p(rectangle, m, schedule, opts);
      std::string out = to_json(s).dump(2) + to_json(property_checks(s.results.back(), rectangle, m)).dump(2);
      out += plotdata_csv(s) + trace_log(s) + field_to_csv(s.results.back().u, m);
      return out;
    };
    const std::string a = run(), b = run();
    report(11, "Determinism", a == b, fmt("two identical runs, %zu bytes of reports, identical: %s", a.size(), a == b ? "yes" : "no"));
  }

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
