#include "plap/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace plap {

using nlohmann::json;

namespace {

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class T>
T get_field(const json& j, const std::string& key, const std::string& path) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(path + ": wrong type");
  }
}

}  // namespace

bool RunConfig::check(const std::string& name) const {
  const auto it = checks.find(name);
  return it != checks.end() && it->second;
}

void RunConfig::validate() const {
  if (!(h > 0) || !std::isfinite(h)) throw InputError("h: must be positive");
  if (p_schedule.empty()) throw InputError("p_schedule: must not be empty");
  if (!(p_schedule.front() >= 2.0)) throw InputError("p_schedule: first entry must be >= 2");
  for (std::size_t i = 1; i < p_schedule.size(); ++i)
    if (!(p_schedule[i] > p_schedule[i - 1])) throw InputError("p_schedule: must be strictly increasing");
  solver.validate();
  if (!std::filesystem::exists(domain_path)) throw InputError("domain spec not found: " + domain_path.string());
}

RunConfig run_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw InputError("config: expected a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "domain" || key == "domain_path") {
      const std::filesystem::path p = get_field<std::string>(j, key, key);
      c.domain_path = p.is_absolute() ? p : base_dir / p;
    } else if (key == "h") {
      c.h = get_field<double>(j, key, key);
    } else if (key == "p_schedule") {
      c.p_schedule = get_field<std::vector<double>>(j, key, key);
    } else if (key == "seed") {
      c.seed = get_field<std::uint64_t>(j, key, key);
    } else if (key == "output_dir") {
      const std::filesystem::path p = get_field<std::string>(j, key, key);
      c.output_dir = p.is_absolute() ? p : base_dir / p;
    } else if (key == "checks") {
      for (const auto& [name, flag] : value.items()) c.checks[name] = get_field<bool>(value, name, "checks." + name);
    } else if (key == "solver") {
      for (const auto& [name, v] : value.items()) {
        const std::string path = "solver." + name;
        if (name == "max_iters") c.solver.max_iters = get_field<int>(value, name, path);
        else if (name == "step0") c.solver.step0 = get_field<double>(value, name, path);
        else if (name == "backtrack") c.solver.backtrack = get_field<double>(value, name, path);
        else if (name == "tol_rel") c.solver.tol_rel = get_field<double>(value, name, path);
        else if (name == "restarts") c.solver.restarts = get_field<int>(value, name, path);
        else if (name == "constraint_tol") c.solver.constraint_tol = get_field<double>(value, name, path);
        else throw InputError(path + ": unknown option");
      }
    } else {
      throw InputError(key + ": unknown config key");
    }
  }
  if (c.domain_path.empty()) throw InputError("domain: missing");
  c.solver.seed = c.seed;
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!std::filesystem::is_regular_file(path) || !in) throw InputError("config not found: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("config " + path.string() + ": invalid JSON (" + e.what() + ")");
  }
  return run_config_from_json(j, path.parent_path());
}

json to_json(const GeometryReport& g) {
  return {{"diameter", g.diameter},
          {"inradius", g.inradius},
          {"volume", g.volume},
          {"lambda_inf_neumann", g.lambda_inf_neumann},
          {"lambda_inf_dirichlet", g.lambda_inf_dirichlet},
          {"isodiametric_ball_radius", g.isodiametric_ball_radius}};
}

json to_json(const SweepReport& s) {
  json results = json::array();
  for (std::size_t i = 0; i < s.results.size(); ++i) {
    const EigenResult& r = s.results[i];
    results.push_back({{"p", r.p},
                       {"lambda_p", r.lambda_p},
                       {"pw_bound", s.pw_bounds[i]},
                       {"iterations", r.iterations},
                       {"converged", r.converged},
                       {"initial_rayleigh", r.initial_rayleigh},
                       {"final_constraint", r.final_constraint},
                       {"constraint_scale", r.constraint_scale},
                       {"euler_residual", r.euler_residual},
                       {"warm_start_rayleigh", finite_or_null(s.warm_start_rayleigh[i])},
                       {"restart_spread", s.restart_spread[i]},
                       {"mesh_checksum", mesh_checksum_hex(r.u.mesh_id)}});
  }
  json j{{"results", results},
         {"diameter", s.diameter},
         {"lambda_inf_estimate", s.lambda_inf_estimate},
         {"lambda_inf_last", s.lambda_inf_last},
         {"lambda_inf_exact", s.lambda_inf_exact},
         {"extrapolation_flagged", s.extrapolation_flagged},
         {"complete", s.complete},
         {"verdicts", s.verdicts}};
  if (!s.failure.empty()) j["failure"] = s.failure;
  return j;
}

json to_json(const ResidualReport& r, bool with_points) {
  json j{{"lambda", r.lambda},
         {"tolerance", r.tolerance},
         {"zero_band", r.zero_band},
         {"n_points", r.n_points},
         {"n_skipped", r.n_skipped},
         {"max_interior_violation", r.max_interior_violation},
         {"max_boundary_violation", r.max_boundary_violation},
         {"max_violation_half_band", r.max_violation_half_band},
         {"max_violation_double_band", r.max_violation_double_band},
         {"pass", r.pass}};
  if (with_points) {
    json pts = json::array();
    for (const auto& p : r.points)
      pts.push_back({{"x", p.location.x}, {"y", p.location.y}, {"region", to_string(p.region)}, {"residual", p.residual}});
    j["points"] = pts;
  }
  return j;
}

json to_json(const Verdict& v) {
  return {{"pass", v.pass},
          {"applicable", v.applicable},
          {"measured", finite_or_null(v.measured)},
          {"threshold", v.threshold}};
}

json to_json(const PropertyVerdicts& v) {
  json j = json::object();
  for (const auto& [name, verdict] : v.verdicts) j[name] = to_json(verdict);
  return j;
}

json to_json(const DistanceCheck& d) {
  return {{"applicable", d.applicable},
          {"holds", d.holds},
          {"worst_margin", finite_or_null(d.worst_margin)},
          {"tolerance", d.tolerance}};
}

std::string mesh_checksum_hex(std::uint64_t checksum) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(checksum));
  return buf;
}

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string field_to_csv(const ScalarField& f, const Mesh& mesh) {
  if (f.size() != mesh.num_vertices()) throw InputError("field_to_csv: field does not match the mesh");
  std::ostringstream out;
  out << "# mesh_checksum=" << mesh_checksum_hex(mesh.checksum) << "\n";
  out << "vertex,x,y,value\n";
  for (std::size_t i = 0; i < f.size(); ++i)
    out << i << ',' << format_number(mesh.vertices[i].x) << ',' << format_number(mesh.vertices[i].y) << ','
        << format_number(f.values[i]) << '\n';
  return out.str();
}

ScalarField field_from_csv(const std::string& text, const Mesh& mesh) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "# mesh_checksum=" + mesh_checksum_hex(mesh.checksum))
    throw InputError("field csv: mesh checksum mismatch");
  if (!std::getline(in, line) || line != "vertex,x,y,value") throw InputError("field csv: bad header");
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto pos = line.rfind(',');
    if (pos == std::string::npos) throw InputError("field csv: malformed row");
    double v = 0.0;
    const auto res = std::from_chars(line.data() + pos + 1, line.data() + line.size(), v);
    if (res.ec != std::errc()) throw InputError("field csv: malformed value");
    values.push_back(v);
  }
  return ScalarField(mesh, std::move(values));
}

json field_to_json(const ScalarField& f) {
  return {{"mesh_checksum", mesh_checksum_hex(f.mesh_id)}, {"values", f.values}};
}

ScalarField field_from_json(const json& j, const Mesh& mesh) {
  if (get_field<std::string>(j, "mesh_checksum", "mesh_checksum") != mesh_checksum_hex(mesh.checksum))
    throw InputError("mesh_checksum: does not match the mesh");
  return ScalarField(mesh, get_field<std::vector<double>>(j, "values", "values"));
}

std::string plotdata_csv(const SweepReport& s) {
  std::ostringstream out;
  out << "p,lambda_p,pw_bound,lambda_inf_exact\n";
  for (std::size_t i = 0; i < s.results.size(); ++i)
    out << format_number(s.results[i].p) << ',' << format_number(s.results[i].lambda_p) << ','
        << format_number(s.pw_bounds[i]) << ',' << format_number(s.lambda_inf_exact) << '\n';
  return out.str();
}

std::string trace_log(const SweepReport& s) {
  std::ostringstream out;
  for (const auto& r : s.results)
    for (const auto& t : r.trace)
      out << "p=" << format_number(r.p) << " iteration=" << t.iteration << " rayleigh=" << format_number(t.rayleigh)
          << " step=" << format_number(t.step) << " constraint=" << format_number(t.constraint) << '\n';
  return out.str();
}

std::string residual_points_csv(const ResidualReport& r) {
  std::ostringstream out;
  out << "x,y,region,residual\n";
  for (const auto& p : r.points)
    out << format_number(p.location.x) << ',' << format_number(p.location.y) << ',' << to_string(p.region) << ','
        << format_number(p.residual) << '\n';
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace plap
