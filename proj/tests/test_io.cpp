#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "plap/report_io.hpp"
#include "plap/mesh.hpp"

using namespace plap;
namespace fs = std::filesystem;

TEST_CASE("geometry report has exactly the six fields") {
  const auto j = to_json(geometry_report(oracle::square()));
  CHECK(j.size() == 6);
  for (const char* key : {"diameter", "inradius", "volume", "lambda_inf_neumann", "lambda_inf_dirichlet",
                          "isodiametric_ball_radius"})
    CHECK(j.contains(key));
}

TEST_CASE("field csv and json round trip") {
  const Mesh m = build_mesh(Domain::disk({0, 0}, 1.0), 0.3);
  const ScalarField f = ScalarField::from_function(m, [](Point q) { return std::sin(3 * q.x) / 7 + q.y; });
  const ScalarField a = field_from_csv(field_to_csv(f, m), m);
  CHECK(a.values == f.values);
  const ScalarField b = field_from_json(field_to_json(f), m);
  CHECK(b.values == f.values);

  const Mesh other = build_mesh(Domain::disk({0, 0}, 1.0), 0.25);
  CHECK_THROWS_AS(field_from_csv(field_to_csv(f, m), other), InputError);
  CHECK_THROWS_AS(field_from_json(field_to_json(f), other), InputError);
}

TEST_CASE("run config parsing") {
  const fs::path base = "/tmp/base";
  nlohmann::json j = {{"domain", "d.json"}, {"h", 0.1}, {"p_schedule", {2, 4}}, {"seed", 9},
                      {"solver", {{"tol_rel", 1e-8}, {"restarts", 2}}}, {"checks", {{"residuals", false}}}};
  const RunConfig c = run_config_from_json(j, base);
  CHECK(c.domain_path == base / "d.json");
  CHECK(c.h == 0.1);
  CHECK(c.p_schedule == std::vector<double>{2, 4});
  CHECK(c.seed == 9);
  CHECK(c.solver.seed == 9);
  CHECK(c.solver.tol_rel == 1e-8);
  CHECK(c.solver.restarts == 2);
  CHECK_FALSE(c.check("residuals"));
  CHECK(c.check("properties"));

  auto message = [&](nlohmann::json bad) {
    try {
      run_config_from_json(bad, base).validate();
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  nlohmann::json bad = j;
  bad["h"] = "small";
  CHECK(message(bad).rfind("h", 0) == 0);
  bad = j;
  bad["solver"]["backtrack"] = 2.0;
  CHECK(message(bad).rfind("solver.backtrack", 0) == 0);
  bad = j;
  bad["colour"] = 1;
  CHECK(message(bad).rfind("colour", 0) == 0);
  bad = j;
  bad["p_schedule"] = {4, 2};
  CHECK(message(bad).rfind("p_schedule", 0) == 0);
  // Valid fields but the domain file does not exist.
  CHECK(message(j).find("domain spec not found") != std::string::npos);
}

TEST_CASE("plot data") {
  SweepReport s;
  EigenResult r;
  r.p = 2;
  r.lambda_p = 3.25;
  s.results.push_back(r);
  s.pw_bounds.push_back(3.0);
  s.lambda_inf_exact = 2;
  CHECK(plotdata_csv(s) == "p,lambda_p,pw_bound,lambda_inf_exact\n2,3.25,3,2\n");
  CHECK(format_number(0.1) == "0.1");
}
