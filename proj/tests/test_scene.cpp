#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hitchin/report.hpp"
#include "hitchin/scene.hpp"

using namespace hitchin;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("hitchin_test_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_SUITE("scene") {

TEST_CASE("tolerance overrides are validated") {
  Tolerances t = resolve_tolerances({{"direct_margin", 1e-5}, {"gap_slope", 0.08}});
  CHECK(t.direct_margin == 1e-5);
  CHECK(t.gap_slope == 0.08);
  CHECK(t.angle == Tolerances{}.angle);
  CHECK_THROWS_AS(resolve_tolerances({{"no_such_tol", 1.0}}), ConfigError);
  CHECK_THROWS_AS(resolve_tolerances({{"direct_margin", -1.0}}), ConfigError);
}

TEST_CASE("config validation rejects bad scenes") {
  SceneConfig c;
  CHECK_NOTHROW(validate_config(c));
  SceneConfig bad_n = c;
  bad_n.n = 17;
  CHECK_THROWS_AS(validate_config(bad_n), ConfigError);
  SceneConfig bad_tau = c;
  bad_tau.bend_tau = {0.1};  // n=3 needs 2 entries
  CHECK_THROWS_AS(validate_config(bad_tau), ConfigError);
  SceneConfig bad_suite = c;
  bad_suite.suite = {"loxodromic", "unknown-check"};
  CHECK_THROWS_AS(validate_config(bad_suite), ConfigError);
  SceneConfig bad_genus = c;
  bad_genus.genus = 3;
  CHECK_THROWS_AS(validate_config(bad_genus), ConfigError);
}

TEST_CASE("config json round trip") {
  SceneConfig c;
  c.n = 4;
  c.bend_tau = {0.1, -0.05, 0.02};
  c.ball_radius = 3;
  c.tolerances = {{"gap_slope", 0.07}};
  c.seed = 99;
  c.suite = {"loxodromic", "gaps"};
  c.tuple_budget = 77;
  fs::path dir = fresh_dir("config");
  fs::path file = dir / "config.json";
  write_atomic(file.string(), config_to_json(c));
  SceneConfig back = config_from_json_file(file.string());
  CHECK(back.n == c.n);
  CHECK(back.bend_tau == c.bend_tau);
  CHECK(back.ball_radius == c.ball_radius);
  CHECK(back.tolerances == c.tolerances);
  CHECK(back.seed == c.seed);
  CHECK(back.suite == c.suite);
  CHECK(back.tuple_budget == c.tuple_budget);
  CHECK_THROWS_AS(config_from_json_file((dir / "missing.json").string()), ConfigError);
}

TEST_CASE("report_to_json is deterministic and complete") {
  CheckReport r;
  r.check = "demo";
  r.n = 3;
  r.tuples = 5;
  r.worst_margin = 0.25;
  r.tolerance = 1e-6;
  r.pass = true;
  r.note = "note";
  r.extra["slope_1"] = 0.5;
  const std::string a = report_to_json(r);
  CHECK(a == report_to_json(r));
  CHECK(a.find("\"check\"") != std::string::npos);
  CHECK(a.find("\"worst_margin\"") != std::string::npos);
  CHECK(a.find("slope_1") != std::string::npos);
}

TEST_CASE("identical configs produce byte-identical artifacts") {
  SceneConfig c;
  c.n = 3;
  c.ball_radius = 3;
  c.suite = {"loxodromic", "gaps"};
  fs::path d1 = fresh_dir("det1");
  fs::path d2 = fresh_dir("det2");
  c.output_dir = d1.string();
  SceneResult r1 = run_scene(c);
  c.output_dir = d2.string();
  SceneResult r2 = run_scene(c);
  CHECK(r1.all_pass);
  CHECK(r2.all_pass);
  for (const char* f : {"rep.json", "curve.json", "report_loxodromic.json",
                        "report_gaps.json"}) {
    CHECK_MESSAGE(slurp(d1 / f) == slurp(d2 / f), f);
  }
}

TEST_CASE("traces need an existing scene and a known kind") {
  SceneConfig c;
  c.n = 3;
  c.ball_radius = 2;
  c.suite = {"loxodromic"};
  c.output_dir = fresh_dir("notrace").string();
  CHECK_THROWS_AS(emit_traces(c, "gaps"), MissingScene);
  run_scene(c);
  CHECK_NOTHROW(emit_traces(c, "gaps"));
  CHECK_THROWS_AS(emit_traces(c, "nope"), ConfigError);
}

TEST_CASE("build_scene_rep honors bending") {
  SceneConfig c;
  c.n = 3;
  SurfaceRep flat = build_scene_rep(c);
  CHECK(flat.n == 3);
  CHECK(relation_residual(flat) < 1e-9);
  c.bend_tau = {0.05, -0.02};
  SurfaceRep bent = build_scene_rep(c);
  CHECK(relation_residual(bent) < 1e-6);
  CHECK(projective_distance(flat.generators[2], bent.generators[2]) > 1e-5);
}

}  // TEST_SUITE
