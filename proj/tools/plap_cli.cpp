// Command-line front end: geometry, sweep, verify-remark, inequality-scan.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "plap/analysis.hpp"
#include "plap/domain_io.hpp"
#include "plap/eigensolver.hpp"
#include "plap/geometry.hpp"
#include "plap/mesh.hpp"
#include "plap/report_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace plap;

namespace {

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kInput = 2;

int cmd_geometry(const fs::path& domain_path, const fs::path& out_dir) {
  const Domain domain = load_domain(domain_path);
  const GeometryReport g = geometry_report(domain);
  write_json(out_dir / "geometry.json", to_json(g));
  std::cout << "diameter " << format_number(g.diameter) << "\nlambda_inf_neumann "
            << format_number(g.lambda_inf_neumann) << "\nlambda_inf_dirichlet "
            << format_number(g.lambda_inf_dirichlet) << "\n";
  return kOk;
}

std::string p_label(double p) { return format_number(p); }

int cmd_sweep(RunConfig cfg) {
  cfg.validate();
  const Domain domain = load_domain(cfg.domain_path);
  const Mesh mesh = build_mesh(domain, cfg.h);
  std::cout << "mesh: " << mesh.num_vertices() << " vertices, " << mesh.num_cells() << " cells\n";

  const SweepReport rep = sweep_p(domain, mesh, cfg.p_schedule, cfg.solver);
  const fs::path& out = cfg.output_dir;

  json sweep = to_json(rep);
  sweep["exploratory"] = !domain.is_convex();
  sweep["mesh"] = {{"h", cfg.h},
                   {"vertices", mesh.num_vertices()},
                   {"cells", mesh.num_cells()},
                   {"checksum", mesh_checksum_hex(mesh.checksum)}};
  sweep["seed"] = cfg.seed;
  write_json(out / "sweep.json", sweep);
  write_text(out / "plotdata.csv", plotdata_csv(rep));
  write_text(out / "trace.log", trace_log(rep));
  if (cfg.check("dump_fields"))
    for (const auto& r : rep.results) write_text(out / "fields" / ("u_p" + p_label(r.p) + ".csv"), field_to_csv(r.u, mesh));

  json verdicts = json::object();
  for (const auto& [name, pass] : rep.verdicts) verdicts[name] = {{"pass", pass}};
  if (!rep.results.empty()) {
    const EigenResult& last = rep.results.back();
    if (cfg.check("properties")) {
      const PropertyVerdicts pv = property_checks(last, domain, mesh);
      for (const auto& [name, v] : pv.verdicts) verdicts[name] = to_json(v);
    }
    if (cfg.check("distance")) {
      const DistanceCheck d = distance_inequality_check(last.u, last.lambda_p, mesh);
      verdicts["distance_inequality"] = to_json(d);
      verdicts["distance_inequality"]["pass"] = d.holds;
    }
    if (cfg.check("residuals")) {
      // Exploratory: the discrete eigenfunction is only approximately C^2.
      const double tol = 0.05 * rep.lambda_inf_exact * last.u.max_abs();
      const ResidualReport rr = infinity_residuals(last.u, rep.lambda_inf_exact, mesh, tol);
      json rj = to_json(rr);
      rj["p"] = last.p;
      write_json(out / "residuals.json", rj);
      write_text(out / "residual_points.csv", residual_points_csv(rr));
    }
  }
  write_json(out / "verdicts.json", verdicts);

  for (std::size_t i = 0; i < rep.results.size(); ++i)
    std::cout << "p=" << p_label(rep.results[i].p) << " lambda_p=" << format_number(rep.results[i].lambda_p)
              << " pw_bound=" << format_number(rep.pw_bounds[i]) << "\n";
  std::cout << "lambda_inf_estimate=" << format_number(rep.lambda_inf_estimate)
            << " lambda_inf_exact=" << format_number(rep.lambda_inf_exact) << "\n";
  if (!rep.complete) {
    std::cerr << "error: sweep incomplete: " << rep.failure << "\n";
    return kNumerical;
  }
  return kOk;
}

// Where the checks fail, by region.
json failure_regions(const ResidualReport& r) {
  json regions = json::array();
  for (Region reg : {Region::Positive, Region::Negative, Region::Zero, Region::Boundary}) {
    double worst = 0.0;
    std::optional<Point> at;
    for (const auto& p : r.points)
      if (p.region == reg && p.residual > r.tolerance && p.residual > worst) {
        worst = p.residual;
        at = p.location;
      }
    if (at)
      regions.push_back({{"region", to_string(reg)}, {"worst_residual", worst}, {"worst_location", {at->x, at->y}}});
  }
  return regions;
}

int cmd_verify_remark(const fs::path& out_dir, double h) {
  const Domain square = Domain::convex_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  const Mesh mesh = build_mesh(square, h);
  const ScalarField u = ScalarField::from_function(mesh, [](Point q) { return q.x; });
  const double tol = 1e-8;
  json entries = json::array();
  bool expected = true;
  for (double lambda : {0.5, 1.0, 1.3}) {
    const ResidualReport r = infinity_residuals(u, lambda, mesh, tol);
    json e = to_json(r);
    e["failures"] = failure_regions(r);
    entries.push_back(e);
    expected = expected && (r.pass == (lambda == 1.0));
    std::cout << "lambda=" << format_number(lambda) << (r.pass ? " pass" : " fail")
              << " interior=" << format_number(r.max_interior_violation)
              << " boundary=" << format_number(r.max_boundary_violation) << "\n";
  }
  write_json(out_dir / "remark.json",
             {{"field", "u = x1"}, {"domain", domain_to_json(square)}, {"h", h}, {"entries", entries},
              {"pass", expected}});
  return expected ? kOk : kNumerical;
}

int cmd_inequality_scan(const fs::path& suite_dir, const fs::path& out_dir) {
  if (!fs::is_directory(suite_dir)) throw InputError("suite directory not found: " + suite_dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(suite_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::string csv =
      "name,kind,diameter,inradius,volume,lambda_inf_neumann,lambda_inf_dirichlet,lambda_inf_ball,"
      "neumann_le_dirichlet,neumann_le_ball,equality\n";
  bool all = true;
  for (const fs::path& f : files) {
    Domain domain = Domain::interval(0, 1);
    try {
      domain = load_domain(f);
    } catch (const InputError& e) {
      std::cerr << "warning: skipping " << f.filename().string() << ": " << e.what() << "\n";
      continue;
    }
    const GeometryReport g = geometry_report(domain);
    const double ball = ball_lambda_inf(g);
    const bool le_dirichlet = g.lambda_inf_neumann <= g.lambda_inf_dirichlet + 1e-12;
    const bool le_ball = g.lambda_inf_neumann <= ball + 1e-12;
    const bool equal = std::fabs(g.lambda_inf_neumann - g.lambda_inf_dirichlet) <= 1e-12;
    all = all && le_dirichlet && le_ball;
    csv += f.stem().string() + "," + to_string(domain.kind()) + "," + format_number(g.diameter) + "," +
           format_number(g.inradius) + "," + format_number(g.volume) + "," + format_number(g.lambda_inf_neumann) +
           "," + format_number(g.lambda_inf_dirichlet) + "," + format_number(ball) + "," +
           (le_dirichlet ? "true" : "false") + "," + (le_ball ? "true" : "false") + "," + (equal ? "ball" : "") +
           "\n";
  }
  write_text(out_dir / "scan.csv", csv);
  std::cout << files.size() << " specs scanned, verdicts " << (all ? "all true" : "not all true") << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neumann p-Laplacian eigenvalues and their p -> infinity limit"};
  app.set_help_flag("--help", "Print this help message and exit");  // -h is taken by --h
  app.require_subcommand(1);

  std::string out_dir;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> h;
  std::optional<double> p_max;

  std::string domain_path;
  auto* geometry = app.add_subcommand("geometry", "Write geometry.json for a domain spec");
  geometry->add_option("domain", domain_path, "Domain spec (JSON)");
  geometry->add_option("--config", config_path, "Run config whose domain is used");
  geometry->add_option("--out", out_dir, "Output directory")->default_val(".");

  auto* sweep = app.add_subcommand("sweep", "Run the p-sweep described by a run config");
  sweep->add_option("--config", config_path, "Run config (JSON)")->required();
  sweep->add_option("--out", out_dir, "Output directory (overrides the config)");
  sweep->add_option("--seed", seed, "Seed (overrides the config)");
  sweep->add_option("--h", h, "Mesh size (overrides the config)");
  sweep->add_option("--p-max", p_max, "Drop schedule entries above this exponent");

  auto* remark = app.add_subcommand("verify-remark", "Check u = x1 on the square at lambda 0.5, 1, 1.3");
  remark->add_option("--out", out_dir, "Output directory")->default_val(".");
  remark->add_option("--h", h, "Mesh size (default 0.05)");

  std::string suite_dir;
  auto* scan = app.add_subcommand("inequality-scan", "Tabulate the limit-eigenvalue inequalities over a directory");
  scan->add_option("suite", suite_dir, "Directory of domain specs")->required();
  scan->add_option("--out", out_dir, "Output directory")->default_val(".");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*geometry) {
      fs::path path = domain_path;
      if (path.empty() && !config_path.empty()) path = load_run_config(config_path).domain_path;
      if (path.empty()) throw InputError("geometry: a domain spec or --config is required");
      return cmd_geometry(path, out_dir);
    }
    if (*sweep) {
      RunConfig cfg = load_run_config(config_path);
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      if (seed) cfg.seed = cfg.solver.seed = *seed;
      if (h) cfg.h = *h;
      if (p_max) {
        std::erase_if(cfg.p_schedule, [&](double p) { return p > *p_max; });
        if (cfg.p_schedule.empty()) throw InputError("p-max: removes every schedule entry");
      }
      return cmd_sweep(cfg);
    }
    if (*remark) return cmd_verify_remark(out_dir, h.value_or(0.05));
    if (*scan) return cmd_inequality_scan(suite_dir, out_dir);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}
