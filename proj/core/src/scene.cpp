#include "hitchin/scene.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hitchin/anosov_cert.hpp"
#include "hitchin/hill.hpp"
#include "json.hpp"

namespace hitchin {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

Tolerances resolve_tolerances(const std::map<std::string, double>& overrides) {
  Tolerances tol;
  std::map<std::string, double*> slots = {
      {"direct_margin", &tol.direct_margin},
      {"angle", &tol.angle},
      {"rank", &tol.rank},
      {"theta_dedupe", &tol.theta_dedupe},
      {"theta_separation", &tol.theta_separation},
      {"gap_slope", &tol.gap_slope},
      {"contraction_decades", &tol.contraction_decades},
  };
  for (const auto& [name, value] : overrides) {
    auto it = slots.find(name);
    if (it == slots.end()) throw ConfigError("unknown tolerance '" + name + "'");
    if (!(value > 0)) throw ConfigError("tolerance '" + name + "' must be positive");
    *it->second = value;
  }
  return tol;
}

std::vector<std::string> suite_names() {
  return {"loxodromic", "irreducible", "frenet",     "hyperconvex", "two-hyper",
          "three-hyper", "property-h",  "main14",     "gaps",        "period",
          "contraction"};
}

void validate_config(const SceneConfig& config) {
  if (config.n < 2 || config.n > 8)
    throw ConfigError("n must be in [2,8], got " + std::to_string(config.n));
  if (config.genus != 2) throw ConfigError("only genus 2 is supported");
  if (config.ball_radius < 1 || config.ball_radius > 8)
    throw ConfigError("ball_radius must be in [1,8]");
  if (!config.bend_tau.empty() &&
      static_cast<int>(config.bend_tau.size()) != config.n - 1)
    throw ConfigError("bend_tau needs n-1 entries (or none)");
  if (config.tuple_budget < 1) throw ConfigError("tuple_budget must be positive");
  resolve_tolerances(config.tolerances);
  auto known = suite_names();
  for (const auto& s : config.suite)
    if (std::find(known.begin(), known.end(), s) == known.end())
      throw ConfigError("unknown suite entry '" + s + "'");
}

std::string config_to_json(const SceneConfig& c) {
  ordered_json j;
  j["n"] = c.n;
  j["genus"] = c.genus;
  j["bend_tau"] = c.bend_tau;
  j["ball_radius"] = c.ball_radius;
  j["tolerances"] = c.tolerances;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["suite"] = c.suite;
  j["tuple_budget"] = c.tuple_budget;
  return j.dump(2) + "\n";
}

SceneConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config parse error in '" + path + "': " + e.what());
  }
  SceneConfig c;
  c.n = j.value("n", c.n);
  c.genus = j.value("genus", c.genus);
  c.bend_tau = j.value("bend_tau", c.bend_tau);
  c.ball_radius = j.value("ball_radius", c.ball_radius);
  c.tolerances = j.value("tolerances", c.tolerances);
  c.seed = j.value("seed", c.seed);
  c.output_dir = j.value("output_dir", c.output_dir);
  c.suite = j.value("suite", c.suite);
  c.tuple_budget = j.value("tuple_budget", c.tuple_budget);
  return c;
}

namespace {

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

ordered_json subspace_json(const Subspace& s) {
  ordered_json j;
  j["n"] = s.ambient_dim();
  j["dim"] = s.dim();
  ordered_json basis = ordered_json::array();
  for (int i = 0; i < s.basis().rows(); ++i)
    for (int k = 0; k < s.basis().cols(); ++k) basis.push_back(s.basis()(i, k));
  j["basis"] = basis;
  return j;
}

}  // namespace

std::string rep_to_json(const SurfaceRep& rep) {
  ordered_json j;
  j["genus"] = rep.genus;
  j["n"] = rep.n;
  ordered_json gens;
  for (int i = 0; i < rep.genus; ++i) {
    gens["a" + std::to_string(i + 1)] = matrix_json(rep.generators[2 * i]);
    gens["b" + std::to_string(i + 1)] = matrix_json(rep.generators[2 * i + 1]);
  }
  j["generators"] = gens;
  j["relation_residual"] = rep.relation_residual;
  return j.dump(2) + "\n";
}

std::string curve_to_json(const std::vector<CurveSample>& samples) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : samples) {
    ordered_json j;
    j["theta"] = s.point.theta;
    j["word"] = s.word.to_text();
    j["gap"] = s.gap;
    ordered_json levels = ordered_json::array();
    for (int k = 1; k <= s.flag.ambient_dim() - 1; ++k)
      levels.push_back(subspace_json(s.flag.level(k)));
    j["flag"] = levels;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

void write_atomic(const std::string& path, const std::string& content) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
  }
  fs::rename(tmp, p);
}

SurfaceRep build_scene_rep(const SceneConfig& config) {
  SurfaceRep base = fuchsian_genus2();
  SurfaceRep rep = config.n == 2 ? base : compose_irreducible(config.n, base);
  if (config.n == 2) rep.relation_residual = base.relation_residual;
  bool bent = false;
  for (double t : config.bend_tau) bent |= t != 0.0;
  if (bent) rep = bend(rep, config.bend_tau);
  return rep;
}

namespace {

std::vector<CirclePoint> default_witnesses() {
  std::vector<CirclePoint> ws;
  for (int k = 0; k < 10; ++k) ws.push_back(CirclePoint::from_angle(0.1 + 0.61 * k));
  return ws;
}

CheckReport run_check(const std::string& name, const SceneConfig& config,
                      const SurfaceRep& rep, const SurfaceRep& base,
                      const std::vector<CurveSample>& samples, const Tolerances& tol) {
  const int n = rep.n;
  if (name == "loxodromic") {
    CheckReport r;
    r.check = "loxodromic";
    r.n = n;
    r.tolerance = 1e-4;
    r.worst_margin = std::numeric_limits<double>::infinity();
    r.pass = true;
    Ball b = ball(config.genus, config.ball_radius);
    int tested = 0;
    for (const auto& w : b.words) {
      Eigen::Matrix2d m2 = evaluate(w, base);
      if (std::abs(m2.trace()) <= 2.0 + 1e-8) continue;  // relation-trivial
      ++tested;
      try {
        LoxodromicData lox = word_loxodromic(w, rep);
        r.worst_margin = std::min(r.worst_margin, lox.min_gap);
      } catch (const Error& e) {
        r.pass = false;
        r.worst_margin = 0.0;
        r.note = "word '" + w.to_text() + "': " + e.what();
      }
    }
    r.tuples = tested;
    if (r.pass) r.pass = r.worst_margin > r.tolerance;
    return r;
  }
  if (name == "irreducible")
    return check_irreducible(rep, std::min(config.ball_radius, 3));
  if (name == "frenet") {
    std::vector<std::vector<int>> partitions;
    partitions.push_back(std::vector<int>(n, 1));
    if (n >= 3) {
      std::vector<int> p2(n - 1, 1);
      p2[0] = 2;
      partitions.push_back(p2);
    }
    partitions.push_back({n - 1, 1});
    return check_frenet(samples, samples.front().point, partitions, default_schedule(),
                        tol.direct_margin, 1e-2, tol);
  }
  auto positivity = [&](PositivityCheck which) {
    return check_positivity(samples, which, config.tuple_budget, config.seed,
                            tol.direct_margin, tol);
  };
  if (name == "hyperconvex") return positivity(PositivityCheck::HyperconvexN);
  if (name == "two-hyper") return positivity(PositivityCheck::TwoHyper);
  if (name == "three-hyper") return positivity(PositivityCheck::ThreeHyper);
  if (name == "property-h") return positivity(PositivityCheck::PropertyH);
  if (name == "main14") return positivity(PositivityCheck::Main14);
  if (name == "gaps") {
    Ball b = ball(config.genus, std::max(config.ball_radius, 4));
    return gap_growth_report(rep, b.words, tol.gap_slope);
  }
  if (name == "period") {
    CheckReport r;
    r.check = "period";
    r.n = n;
    // the identity residual floor scales with the eigenbasis conditioning,
    // which grows with n; 1e-8 is the certified regime through n=4
    r.tolerance = n <= 4 ? 1e-8 : 1e-7;
    r.worst_margin = std::numeric_limits<double>::infinity();
    r.pass = true;
    bool fuchsian = true;
    for (double t : config.bend_tau) fuchsian &= t == 0.0;
    auto witnesses = default_witnesses();
    Ball b = ball(config.genus, std::min(config.ball_radius, 3));
    int used = 0;
    for (const auto& w : b.words) {
      if (used >= 20) break;
      if (w.length() < 1 || w.power_order() > 1) continue;
      Eigen::Matrix2d m2 = evaluate(w, base);
      const double tr = std::abs(m2.trace());
      if (tr <= 2.0 + 1e-8) continue;
      ++used;
      try {
        const double p = period(rep, w, witnesses, r.tolerance);
        if (fuchsian) {
          const double ell = 2.0 * std::log((tr + std::sqrt(tr * tr - 4.0)) / 2.0);
          const double rel = std::abs(p - (n - 1) * ell) / ((n - 1) * ell);
          r.worst_margin = std::min(r.worst_margin, r.tolerance - rel);
          if (rel >= r.tolerance) {
            r.pass = false;
            r.note = "word '" + w.to_text() + "' misses (n-1)*l by " + std::to_string(rel);
          }
        } else {
          r.worst_margin = std::min(r.worst_margin, p);
        }
      } catch (const Error& e) {
        r.pass = false;
        r.note = "word '" + w.to_text() + "': " + e.what();
      }
    }
    r.tuples = used;
    if (used == 0) {
      r.pass = false;
      r.note = "no usable words";
    }
    return r;
  }
  if (name == "contraction") {
    double max_gap = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& a = samples[i].point;
      const auto& b2 = samples[(i + 1) % samples.size()].point;
      max_gap = std::max(max_gap, circle_distance(a, b2));
    }
    const double guard = std::max(1e-4, 3.0 * max_gap);
    SampleSource source(samples, guard);
    auto nearest = [&](double theta) {
      return source.nearest(CirclePoint::from_angle(theta)).point;
    };
    Triple w{nearest(0.0), nearest(M_PI / 2), nearest(M_PI)};
    std::vector<double> times;
    for (double t = -3.0; t <= 3.0 + 1e-9; t += 0.5) times.push_back(t);
    CheckReport r = contraction_trace(source, w, 1, times, tol);
    r.extra["sample_guard"] = guard;
    return r;
  }
  throw ConfigError("unknown suite entry '" + name + "'");
}

}  // namespace

SceneResult run_scene(const SceneConfig& config) {
  validate_config(config);
  Tolerances tol = resolve_tolerances(config.tolerances);
  SurfaceRep base = fuchsian_genus2();
  SurfaceRep rep = build_scene_rep(config);

  const fs::path dir(config.output_dir);
  write_atomic((dir / "rep.json").string(), rep_to_json(rep));
  std::vector<CurveSample> samples = sample_curve(rep, base, config.ball_radius, tol);
  write_atomic((dir / "curve.json").string(), curve_to_json(samples));

  std::vector<std::string> suite = config.suite;
  if (suite.empty())
    suite = {"loxodromic", "frenet",  "hyperconvex", "property-h",
             "three-hyper", "main14", "gaps",        "period"};

  SceneResult result;
  for (const auto& name : suite) {
    CheckReport r = run_check(name, config, rep, base, samples, tol);
    result.all_pass &= r.pass;
    write_atomic((dir / ("report_" + name + ".json")).string(), report_to_json(r));
    result.reports.push_back(std::move(r));
  }
  return result;
}

void emit_traces(const SceneConfig& config, const std::string& what) {
  validate_config(config);
  const fs::path dir(config.output_dir);
  if (!fs::exists(dir / "rep.json"))
    throw MissingScene("no rep.json in '" + config.output_dir + "'; run a scene first");
  Tolerances tol = resolve_tolerances(config.tolerances);

  if (what == "gaps") {
    SurfaceRep rep = build_scene_rep(config);
    Ball b = ball(config.genus, config.ball_radius);
    std::ostringstream csv;
    csv << "word_len";
    for (int i = 1; i < config.n; ++i) csv << ",gap_" << i;
    csv << "\n";
    for (const auto& w : b.words) {
      if (w.length() == 0) continue;
      Eigen::VectorXd sv = word_singular_values(w, rep);
      csv << w.length();
      for (int i = 0; i + 1 < config.n; ++i) csv << "," << std::log(sv(i) / sv(i + 1));
      csv << "\n";
    }
    write_atomic((dir / "gaps.csv").string(), csv.str());
    return;
  }
  if (what == "contraction") {
    SurfaceRep base = fuchsian_genus2();
    SurfaceRep rep = build_scene_rep(config);
    std::vector<CurveSample> samples = sample_curve(rep, base, config.ball_radius, tol);
    double max_gap = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
      max_gap = std::max(max_gap, circle_distance(samples[i].point,
                                                  samples[(i + 1) % samples.size()].point));
    SampleSource source(samples, std::max(1e-4, 3.0 * max_gap));
    Triple w{source.nearest(CirclePoint::from_angle(0.0)).point,
             source.nearest(CirclePoint::from_angle(M_PI / 2)).point,
             source.nearest(CirclePoint::from_angle(M_PI)).point};
    std::vector<double> times;
    for (double t = -3.0; t <= 3.0 + 1e-9; t += 0.5) times.push_back(t);
    std::vector<double> logs = contraction_log_norms(source, w, 1, times, tol);
    std::ostringstream csv;
    csv << "t,log_norm\n";
    for (std::size_t i = 0; i < times.size(); ++i) csv << times[i] << "," << logs[i] << "\n";
    write_atomic((dir / "contraction.csv").string(), csv.str());
    return;
  }
  if (what == "hill") {
    for (const auto& name : hill_preset_names()) {
      HillPreset preset = hill_preset(name);
      HillSystem sys = hill_solve_const(preset.order, preset.coeffs, 0.0, 1.0, 1e-3);
      std::ostringstream csv;
      csv << "x";
      for (int i = 1; i <= sys.order; ++i) csv << ",f_" << i;
      csv << "\n";
      for (std::size_t k = 0; k < sys.grid.size(); ++k) {
        csv << sys.grid[k];
        for (int i = 0; i < sys.order; ++i) csv << "," << sys.fundamental[k](i, 0);
        csv << "\n";
      }
      write_atomic((dir / ("hill_" + name + ".csv")).string(), csv.str());
    }
    return;
  }
  throw ConfigError("unknown trace kind '" + what + "'");
}

}  // namespace hitchin
