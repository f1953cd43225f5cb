// Batch front end: build scenes, run check suites, emit traces.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hitchin/anosov_cert.hpp"
#include "hitchin/hill.hpp"
#include "hitchin/scene.hpp"

namespace {

// Flag values land in `config`; `set` records which ones were actually
// passed so they can override a --config file.
struct CommonOpts {
  std::string config_path;
  hitchin::SceneConfig config;
  CLI::Option* o_n = nullptr;
  CLI::Option* o_bend = nullptr;
  CLI::Option* o_radius = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_out = nullptr;
  CLI::Option* o_suite = nullptr;
  CLI::Option* o_budget = nullptr;
  std::map<std::string, double> tol_overrides;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config_path, "JSON config file (flags override it)");
  o.o_n = sub->add_option("--n", o.config.n, "ambient dimension");
  o.o_bend = sub->add_option("--bend", o.config.bend_tau,
                             "bending parameters tau_1..tau_{n-1}")
                 ->delimiter(',');
  o.o_radius = sub->add_option("--radius", o.config.ball_radius, "word-ball radius");
  o.o_seed = sub->add_option("--seed", o.config.seed, "random seed");
  o.o_out = sub->add_option("--out", o.config.output_dir, "output directory");
  o.o_suite = sub->add_option("--suite", o.config.suite, "checks to run (comma separated)")
                  ->delimiter(',');
  o.o_budget = sub->add_option("--budget", o.config.tuple_budget, "tuple budget per check");
  for (const auto& name : {"direct_margin", "angle", "rank", "theta_dedupe",
                           "theta_separation", "gap_slope", "contraction_decades"}) {
    const std::string flag = std::string("--tol.") + name;
    sub->add_option_function<double>(
        flag,
        [&o, name = std::string(name)](double v) { o.tol_overrides[name] = v; },
        "override tolerance '" + std::string(name) + "'");
  }
}

hitchin::SceneConfig resolve(const CommonOpts& o) {
  hitchin::SceneConfig c = o.config;
  if (!o.config_path.empty()) {
    c = hitchin::config_from_json_file(o.config_path);
    if (o.o_n->count()) c.n = o.config.n;
    if (o.o_bend->count()) c.bend_tau = o.config.bend_tau;
    if (o.o_radius->count()) c.ball_radius = o.config.ball_radius;
    if (o.o_seed->count()) c.seed = o.config.seed;
    if (o.o_out->count()) c.output_dir = o.config.output_dir;
    if (o.o_suite->count()) c.suite = o.config.suite;
    if (o.o_budget->count()) c.tuple_budget = o.config.tuple_budget;
  }
  for (const auto& [name, value] : o.tol_overrides) c.tolerances[name] = value;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hitchin-lab: build Hitchin-component scenes and certify their limit curves"};
  app.require_subcommand(1);

  CommonOpts rep_opts, sample_opts, check_opts, trace_opts;
  CLI::App* build_rep = app.add_subcommand("build-rep", "write rep.json for the scene");
  CLI::App* sample = app.add_subcommand("sample-curve", "write rep.json and curve.json");
  CLI::App* check = app.add_subcommand("check", "run a check suite; exit 0 iff all pass");
  CLI::App* trace = app.add_subcommand("trace", "emit CSV traces");
  CLI::App* hill = app.add_subcommand("hill", "integrate a Hill operator and check its curve");
  add_common(build_rep, rep_opts);
  add_common(sample, sample_opts);
  add_common(check, check_opts);
  add_common(trace, trace_opts);

  std::string trace_what = "gaps";
  trace->add_option("--what", trace_what, "contraction | gaps | hill");

  std::string hill_preset_name;
  int hill_order = 0;
  std::vector<double> hill_coeffs;
  double hill_x0 = 0.0, hill_x1 = 1.0, hill_step = 1e-3;
  int hill_budget = 200;
  std::uint64_t hill_seed = 1;
  std::string hill_out = ".";
  hill->add_option("--preset", hill_preset_name,
                   "named preset (moment3, moment4, exp2, exp3, exp4)");
  hill->add_option("--order", hill_order, "operator order n");
  hill->add_option("--coeffs", hill_coeffs, "constant coefficients a_2..a_n")->delimiter(',');
  hill->add_option("--interval-start", hill_x0, "left endpoint");
  hill->add_option("--interval-end", hill_x1, "right endpoint");
  hill->add_option("--step", hill_step, "integration step");
  hill->add_option("--budget", hill_budget, "tuple budget");
  hill->add_option("--seed", hill_seed, "random seed");
  hill->add_option("--out", hill_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (hill->parsed()) {
      hitchin::HillPreset preset;
      if (!hill_preset_name.empty()) {
        preset = hitchin::hill_preset(hill_preset_name);
      } else {
        if (hill_order < 2) throw hitchin::ConfigError("need --preset or --order/--coeffs");
        preset = {hill_order, hill_coeffs};
      }
      hitchin::HillSystem sys =
          hitchin::hill_solve_const(preset.order, preset.coeffs, hill_x0, hill_x1, hill_step);
      hitchin::CheckReport r = hitchin::hill_curve_check(sys, hill_budget, hill_seed);
      hitchin::write_atomic(hill_out + "/report_hill.json", hitchin::report_to_json(r));
      std::cout << (r.pass ? "PASS" : "FAIL") << " hill_curve margin=" << r.worst_margin
                << " wronskian_drift=" << sys.wronskian_drift << "\n";
      return r.pass ? 0 : 1;
    }

    if (build_rep->parsed()) {
      hitchin::SceneConfig config = resolve(rep_opts);
      hitchin::validate_config(config);
      hitchin::SurfaceRep rep = hitchin::build_scene_rep(config);
      hitchin::write_atomic(config.output_dir + "/rep.json", hitchin::rep_to_json(rep));
      std::cout << "wrote rep.json (n=" << rep.n
                << ", relation_residual=" << rep.relation_residual << ")\n";
      return 0;
    }
    if (sample->parsed()) {
      hitchin::SceneConfig config = resolve(sample_opts);
      hitchin::validate_config(config);
      hitchin::SurfaceRep base = hitchin::fuchsian_genus2();
      hitchin::SurfaceRep rep = hitchin::build_scene_rep(config);
      hitchin::write_atomic(config.output_dir + "/rep.json", hitchin::rep_to_json(rep));
      auto samples = hitchin::sample_curve(rep, base, config.ball_radius,
                                           hitchin::resolve_tolerances(config.tolerances));
      hitchin::write_atomic(config.output_dir + "/curve.json",
                            hitchin::curve_to_json(samples));
      std::cout << "wrote curve.json with " << samples.size() << " samples\n";
      return 0;
    }
    if (check->parsed()) {
      hitchin::SceneConfig config = resolve(check_opts);
      hitchin::SceneResult result = hitchin::run_scene(config);
      for (const auto& r : result.reports)
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.check
                  << " margin=" << r.worst_margin << " tol=" << r.tolerance
                  << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
      return result.all_pass ? 0 : 1;
    }
    hitchin::SceneConfig config = resolve(trace_opts);
    hitchin::emit_traces(config, trace_what);
    std::cout << "wrote " << trace_what << " traces to " << config.output_dir << "\n";
    return 0;
  } catch (const hitchin::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
