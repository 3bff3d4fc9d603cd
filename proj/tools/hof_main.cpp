// Batch CLI for time-harmonic flow reconstruction.
//
//   hof synth       generate a synthetic benchmark instance
//   hof reconstruct estimate the amplitude field from an image sequence
//   hof metrics     compare an estimate against ground truth
//
// Exit codes: 0 success, 2 bad configuration, 3 bad input data,
// 4 solver failure.

#include <cstdio>
#include <exception>
#include <fstream>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hof/driver.hpp"

namespace {

using json = nlohmann::json;

// Config file for `reconstruct`: flat JSON object, same names as the flags.
// Unknown keys are rejected; explicit command-line flags win.
void apply_config_file(const std::string& path, hof::ReconstructOptions& opt,
                       const std::set<std::string>& overridden) {
  std::ifstream is(path);
  if (!is) throw hof::ConfigError("cannot open config file " + path);
  json j = json::parse(is, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw hof::ConfigError("config file is not a JSON object: " + path);

  static const std::set<std::string> known = {
      "model",   "lambda",     "omega",   "periods",      "levels", "eta",
      "cg_iters", "irls_iters", "cg_tol",  "eps0",         "delta0", "sigma_pre",
      "median",  "warps",      "threads", "unit_weights"};
  for (const auto& [key, val] : j.items())
    if (!known.count(key)) throw hof::ConfigError("unknown config key '" + key + "'");

  if (j.contains("model") && !overridden.count("model")) {
    if (!j["model"].is_string()) throw hof::ConfigError("config key 'model' must be a string");
    opt.model = hof::parse_model(j["model"].get<std::string>());
    opt.cfg = hof::default_config(opt.model);  // file/flag values applied on top
  }
  auto num = [&](const char* key, auto& field) {
    if (!j.contains(key) || overridden.count(key)) return;
    if (!j[key].is_number()) throw hof::ConfigError(std::string("config key '") + key +
                                                    "' must be a number");
    field = static_cast<std::decay_t<decltype(field)>>(j[key].get<double>());
  };
  num("lambda", opt.cfg.lambda);
  num("omega", opt.omega);
  num("periods", opt.periods);
  num("levels", opt.cfg.levels);
  num("eta", opt.cfg.eta);
  num("cg_iters", opt.cfg.cg_iters);
  num("irls_iters", opt.cfg.irls_iters);
  num("cg_tol", opt.cfg.cg_tol);
  num("eps0", opt.cfg.eps0);
  num("delta0", opt.cfg.delta0);
  num("sigma_pre", opt.cfg.preprocess_sigma);
  num("median", opt.cfg.median_window);
  num("warps", opt.cfg.warps);
  num("threads", opt.threads);
  if (j.contains("unit_weights") && !overridden.count("unit_weights")) {
    if (!j["unit_weights"].is_boolean())
      throw hof::ConfigError("config key 'unit_weights' must be a boolean");
    opt.unit_weights = j["unit_weights"].get<bool>();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-harmonic optical flow reconstruction"};
  app.require_subcommand(1);

  // --- synth ---
  auto* synth = app.add_subcommand("synth", "generate a synthetic instance");
  hof::SynthOptions sopt;
  synth->add_option("--scale", sopt.scale, "size factor for the 300x200x206 default shape");
  synth->add_option("--n1", sopt.n1, "rows (overrides scale-derived value)");
  synth->add_option("--n2", sopt.n2, "columns (overrides scale-derived value)");
  synth->add_option("--frames", sopt.frames, "frame count (overrides scale-derived value)");
  synth->add_option("--periods", sopt.periods, "observed oscillation periods");
  synth->add_option("--amp-scale", sopt.amp_scale, "amplitude factor (default scale^3)");
  synth->add_option("--substeps", sopt.substeps, "integration substeps per frame");
  synth->add_option("--sigma-grad", sopt.sigma_grad, "smoothing of the map gradient");
  synth->add_option("--salt-pepper", sopt.salt_pepper, "salt-and-pepper pixel fraction");
  bool no_noise = false;
  synth->add_flag("--no-noise", no_noise, "skip the noisy copy");
  synth->add_option("--seed", sopt.seed, "RNG seed");
  synth->add_option("--out", sopt.out_dir, "output directory");

  // --- reconstruct ---
  auto* rec = app.add_subcommand("reconstruct", "reconstruct the amplitude field");
  hof::ReconstructOptions ropt;
  std::string model_str = "model1", config_path;
  std::string input_path;
  double lambda = 0.0, omega = 0.0, eta = 0.0, cg_tol = 0.0, eps0 = 0.0, delta0 = 0.0,
         sigma_pre = -1.0;
  int periods = 0, levels = 0, cg_iters = 0, irls_iters = 0, median = -1, warps = -1,
      threads = 0;
  rec->add_option("input", input_path, "image sequence tensor")->required();
  rec->add_option("--model", model_str, "model1|model2|model3|harmonic-hs|pairwise-hs");
  rec->add_option("--config", config_path, "JSON config file (flags win)");
  rec->add_option("--lambda", lambda, "regularization weight");
  rec->add_option("--omega", omega, "angular frequency (rad/frame)");
  rec->add_option("--periods", periods, "observed periods (used when omega absent)");
  rec->add_option("--levels", levels, "pyramid levels");
  rec->add_option("--eta", eta, "pyramid downsampling factor");
  rec->add_option("--cg-iters", cg_iters, "CG iterations (or sweeps for the baselines)");
  rec->add_option("--irls-iters", irls_iters, "IRLS sweeps (models 2 and 3)");
  rec->add_option("--cg-tol", cg_tol, "CG relative-residual tolerance");
  rec->add_option("--eps0", eps0, "initial data smoothing parameter");
  rec->add_option("--delta0", delta0, "initial reg smoothing parameter");
  rec->add_option("--sigma-pre", sigma_pre, "preprocessing Gaussian sigma");
  rec->add_option("--median", median, "median window (odd; 1 disables)");
  rec->add_option("--warps", warps, "warp passes per level above the coarsest");
  rec->add_option("--threads", threads, "worker thread cap");
  rec->add_flag("--debug-unit-weights", ropt.unit_weights, "freeze IRLS weights at 1");
  rec->add_option("--out", ropt.out_dir, "output directory");

  // --- metrics ---
  auto* met = app.add_subcommand("metrics", "metric report for an estimate");
  hof::MetricsOptions mopt;
  met->add_option("estimate", mopt.estimate_path, "estimated amplitude tensor")->required();
  met->add_option("truth", mopt.truth_path, "ground-truth amplitude tensor")->required();
  met->add_option("reference", mopt.reference_path, "clean image sequence tensor")->required();
  met->add_option("--out", mopt.out_csv, "output CSV path");
  met->add_option("--periods", mopt.periods, "observed periods of the reference");
  met->add_option("--omega", mopt.omega, "angular frequency (rad/frame)");
  met->add_option("--substeps", mopt.substeps, "render integration substeps");
  met->add_option("--sigma-grad", mopt.sigma_grad, "render gradient smoothing");
  met->add_option("--run-manifest", mopt.run_manifest,
                  "reconstruct manifest whose timings are copied into the CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (synth->parsed()) {
      sopt.noisy = !no_noise;
      hof::synth_run(sopt);
      return 0;
    }
    if (rec->parsed()) {
      ropt.model = hof::parse_model(model_str);
      ropt.cfg = hof::default_config(ropt.model);
      ropt.input_path = input_path;

      std::set<std::string> overridden;
      auto mark = [&](const char* flag, const char* key) {
        if (rec->count(flag)) overridden.insert(key);
      };
      mark("--model", "model");
      mark("--lambda", "lambda");
      mark("--omega", "omega");
      mark("--periods", "periods");
      mark("--levels", "levels");
      mark("--eta", "eta");
      mark("--cg-iters", "cg_iters");
      mark("--irls-iters", "irls_iters");
      mark("--cg-tol", "cg_tol");
      mark("--eps0", "eps0");
      mark("--delta0", "delta0");
      mark("--sigma-pre", "sigma_pre");
      mark("--median", "median");
      mark("--warps", "warps");
      mark("--threads", "threads");
      mark("--debug-unit-weights", "unit_weights");
      if (!config_path.empty()) apply_config_file(config_path, ropt, overridden);

      if (rec->count("--lambda")) ropt.cfg.lambda = lambda;
      if (rec->count("--omega")) ropt.omega = omega;
      if (rec->count("--periods")) ropt.periods = periods;
      if (rec->count("--levels")) ropt.cfg.levels = levels;
      if (rec->count("--eta")) ropt.cfg.eta = eta;
      if (rec->count("--cg-iters")) ropt.cfg.cg_iters = cg_iters;
      if (rec->count("--irls-iters")) ropt.cfg.irls_iters = irls_iters;
      if (rec->count("--cg-tol")) ropt.cfg.cg_tol = cg_tol;
      if (rec->count("--eps0")) ropt.cfg.eps0 = eps0;
      if (rec->count("--delta0")) ropt.cfg.delta0 = delta0;
      if (rec->count("--sigma-pre")) ropt.cfg.preprocess_sigma = sigma_pre;
      if (rec->count("--median")) ropt.cfg.median_window = median;
      if (rec->count("--warps")) ropt.cfg.warps = warps;
      if (rec->count("--threads")) ropt.threads = threads;
      if (ropt.periods <= 0 && !(ropt.omega > 0.0)) ropt.periods = 3;

      hof::reconstruct_run(ropt);
      return 0;
    }
    if (met->parsed()) {
      const hof::MetricsResult r = hof::metrics_run(mopt);
      std::printf("metrics: re=%.6g rie=%.6g issim=%.6g -> %s\n", r.re, r.rie, r.issim,
                  r.csv_path.c_str());
      return 0;
    }
  } catch (const hof::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const hof::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const hof::SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
