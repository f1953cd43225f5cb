#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hitchin/flag_algebra.hpp"
#include "hitchin/limit_curve.hpp"
#include "hitchin/report.hpp"
#include "hitchin/representations.hpp"

namespace hitchin {

// Everything a batch run needs; identical configs produce byte-identical
// artifacts.
struct SceneConfig {
  int n = 3;
  int genus = 2;
  std::vector<double> bend_tau;            // empty = Fuchsian
  int ball_radius = 4;
  std::map<std::string, double> tolerances;  // overrides by name
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  std::vector<std::string> suite;          // empty = default suite
  int tuple_budget = 200;
};

// Named tolerance overrides onto the defaults; unknown names and
// non-positive values are rejected.
Tolerances resolve_tolerances(const std::map<std::string, double>& overrides);

void validate_config(const SceneConfig& config);
SceneConfig config_from_json_file(const std::string& path);
std::string config_to_json(const SceneConfig& config);

std::vector<std::string> suite_names();

std::string rep_to_json(const SurfaceRep& rep);
std::string curve_to_json(const std::vector<CurveSample>& samples);

// Temp-file-plus-rename write.
void write_atomic(const std::string& path, const std::string& content);

// Builds the representation for the config: symmetric power of the octagon
// group, bent when bend_tau is nonzero.
SurfaceRep build_scene_rep(const SceneConfig& config);

struct SceneResult {
  bool all_pass = true;
  std::vector<CheckReport> reports;
};

// Writes rep.json, curve.json and report_<check>.json per suite entry.
SceneResult run_scene(const SceneConfig& config);

// Writes CSV traces; requires rep.json from a previous run_scene in
// output_dir. what: "contraction" | "gaps" | "hill".
void emit_traces(const SceneConfig& config, const std::string& what);

}  // namespace hitchin
