#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "plap/analysis.hpp"
#include "plap/eigensolver.hpp"
#include "plap/geometry.hpp"

namespace plap {

struct RunConfig {
  std::filesystem::path domain_path;  ///< resolved against the config file's directory
  double h = 0.05;
  std::vector<double> p_schedule = default_p_schedule();
  SolverOptions solver;
  std::map<std::string, bool> checks{{"properties", true}, {"residuals", true}, {"dump_fields", true}, {"distance", true}};
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 1;

  bool check(const std::string& name) const;
  void validate() const;
};

RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const GeometryReport& g);
nlohmann::json to_json(const SweepReport& s);
nlohmann::json to_json(const ResidualReport& r, bool with_points = false);
nlohmann::json to_json(const PropertyVerdicts& v);
nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const DistanceCheck& d);

std::string mesh_checksum_hex(std::uint64_t checksum);

/// First line "# mesh_checksum=<hex>", then a header row vertex,x,y,value.
std::string field_to_csv(const ScalarField& f, const Mesh& mesh);
ScalarField field_from_csv(const std::string& text, const Mesh& mesh);
nlohmann::json field_to_json(const ScalarField& f);
ScalarField field_from_json(const nlohmann::json& j, const Mesh& mesh);

/// Columns p, lambda_p, pw_bound, lambda_inf_exact.
std::string plotdata_csv(const SweepReport& s);

/// One line per accepted iterate: p iteration rayleigh step constraint.
std::string trace_log(const SweepReport& s);

/// Per-point residual dump: x, y, region, residual.
std::string residual_points_csv(const ResidualReport& r);

/// Shortest round-trip representation used in every CSV.
std::string format_number(double x);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace plap
