#include "hof/driver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "hof/baselines.hpp"
#include "hof/core.hpp"
#include "hof/metrics.hpp"
#include "hof/multiscale.hpp"
#include "hof/parallel.hpp"
#include "hof/tensor_io.hpp"

namespace hof {

namespace fs = std::filesystem;
using json = nlohmann::json;
using clock_type = std::chrono::steady_clock;

Model parse_model(const std::string& name) {
  if (name == "model1") return Model::One;
  if (name == "model2") return Model::Two;
  if (name == "model3") return Model::Three;
  if (name == "harmonic-hs") return Model::HarmonicHS;
  if (name == "pairwise-hs") return Model::PairwiseHS;
  throw ConfigError("unknown model '" + name +
                    "' (expected model1|model2|model3|harmonic-hs|pairwise-hs)");
}

std::string model_name(Model m) {
  switch (m) {
    case Model::One: return "model1";
    case Model::Two: return "model2";
    case Model::Three: return "model3";
    case Model::HarmonicHS: return "harmonic-hs";
    case Model::PairwiseHS: return "pairwise-hs";
  }
  return "?";
}

SolverConfig default_config(Model m) {
  SolverConfig c;
  c.eta = 0.8;
  c.preprocess_sigma = 0.65;
  c.median_window = 5;
  c.cg_tol = 1e-10;
  switch (m) {
    case Model::One:
      c.lambda = 100.0;
      c.levels = 2;
      c.cg_iters = 50;
      c.irls_iters = 1;
      break;
    case Model::Two:
      c.lambda = 2.0;
      c.levels = 4;
      c.cg_iters = 100;
      c.irls_iters = 5;
      break;
    case Model::Three:
      c.lambda = 10.0;
      c.levels = 4;
      c.cg_iters = 25;
      c.irls_iters = 4;
      break;
    case Model::HarmonicHS:
      c.lambda = 100.0;
      c.levels = 2;
      c.cg_iters = 600;  // pointwise sweeps
      c.irls_iters = 1;
      break;
    case Model::PairwiseHS:
      c.lambda = 100.0;
      c.levels = 1;
      c.cg_iters = 400;  // Jacobi sweeps per frame pair
      c.irls_iters = 1;
      c.median_window = 1;
      break;
  }
  return c;
}

namespace {

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw DataError("cannot open " + path);
  os << j.dump(2) << "\n";
  if (!os) throw DataError("short write to " + path);
}

HarmonicParams params_for(double omega, int periods, int frames) {
  if (omega > 0.0) {
    const double p = omega * frames / (2.0 * M_PI);
    const int pr = static_cast<int>(std::lround(p));
    HarmonicParams h{omega, pr, frames};
    h.validate();
    return h;
  }
  return HarmonicParams::from_periods(periods, frames);
}

}  // namespace

SynthResult synth_run(const SynthOptions& opt) {
  if (!(opt.scale > 0.0)) throw ConfigError("synth: scale must be positive");
  if (opt.substeps < 1) throw ConfigError("synth: substeps >= 1");
  const int n1 = opt.n1 > 0 ? opt.n1 : static_cast<int>(std::ceil(200.0 * opt.scale));
  const int n2 = opt.n2 > 0 ? opt.n2 : static_cast<int>(std::ceil(206.0 * opt.scale));
  const int frames = opt.frames > 0 ? opt.frames : static_cast<int>(std::ceil(300.0 * opt.scale));
  const double amp = opt.amp_scale >= 0.0 ? opt.amp_scale : opt.scale * opt.scale * opt.scale;

  const Grid grid = Grid::make(n1, n2);
  const HarmonicParams h = HarmonicParams::from_periods(opt.periods, frames);

  const AmplitudeField truth = benchmark_amplitude_on(grid, opt.scale, amp);
  const std::vector<double> tex = texture_plane(grid, opt.seed);
  const DeformationMap psi = integrate_psi(truth, h, opt.substeps, opt.sigma_grad);
  const ImageSequence clean = render_sequence(tex, psi);

  fs::create_directories(opt.out_dir);
  SynthResult res;
  res.grid = grid;
  res.params = h;
  res.amplitude_path = (fs::path(opt.out_dir) / "amplitude.hof").string();
  res.clean_path = (fs::path(opt.out_dir) / "clean.hof").string();
  res.manifest_path = (fs::path(opt.out_dir) / "synth_manifest.json").string();
  write_amplitude(res.amplitude_path, truth);
  write_image_sequence(res.clean_path, clean);

  json manifest{{"command", "synth"},
                {"seed", opt.seed},
                {"scale", opt.scale},
                {"amp_scale", amp},
                {"frames", frames},
                {"n1", n1},
                {"n2", n2},
                {"periods", opt.periods},
                {"omega", h.omega},
                {"substeps", opt.substeps},
                {"sigma_grad", opt.sigma_grad},
                {"files", {{"amplitude", res.amplitude_path}, {"clean", res.clean_path}}}};

  double lo = clean.data[0], hi = clean.data[0];
  for (double v : clean.data) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  manifest["intensity_range"] = {lo, hi};

  if (opt.noisy) {
    const ImageSequence noisy = add_noise(clean, {true, opt.salt_pepper, opt.seed + 1});
    res.noisy_path = (fs::path(opt.out_dir) / "noisy.hof").string();
    write_image_sequence(res.noisy_path, noisy);
    manifest["files"]["noisy"] = res.noisy_path;
    manifest["noise"] = {{"poisson", true}, {"salt_pepper", opt.salt_pepper}};
  }
  write_json(res.manifest_path, manifest);
  std::printf("synth: frames=%d grid=%dx%d periods=%d omega=%.6f amp_scale=%.6g seed=%llu\n",
              frames, n1, n2, opt.periods, h.omega, amp,
              static_cast<unsigned long long>(opt.seed));
  return res;
}

ReconstructResult reconstruct_run(const ReconstructOptions& opt) {
  if (opt.threads > 0) set_max_threads(opt.threads);
  SolverConfig cfg = opt.cfg;
  cfg.unit_weights = opt.unit_weights;
  cfg.validate();

  const ImageSequence I = read_image_sequence(opt.input_path);
  const HarmonicParams h = params_for(opt.omega, opt.periods, I.frames);

  std::printf(
      "reconstruct: model=%s frames=%d grid=%dx%d omega=%.6f lambda=%g levels=%d eta=%.2f "
      "cg_iters=%d irls_iters=%d warps=%d median=%d sigma_pre=%.2f\n",
      model_name(opt.model).c_str(), I.frames, I.grid.rows, I.grid.cols, h.omega, cfg.lambda,
      cfg.levels, cfg.eta, cfg.cg_iters, cfg.irls_iters, cfg.warps, cfg.median_window,
      cfg.preprocess_sigma);

  ReconstructResult res;
  const auto t0 = clock_type::now();
  switch (opt.model) {
    case Model::One:
      res.amplitude = model1_reconstruct(I, h, cfg, &res.trace);
      break;
    case Model::Two:
      res.amplitude = irls_reconstruct(I, h, cfg, RobustModel::II, &res.trace);
      break;
    case Model::Three:
      res.amplitude = irls_reconstruct(I, h, cfg, RobustModel::III, &res.trace);
      break;
    case Model::HarmonicHS:
      res.amplitude = run_multiscale(
          I, h, cfg,
          [&cfg](const DerivativeFields& f, const HarmonicParams& hh, const SolverConfig& c,
                 AmplitudeField init, int) {
            return harmonic_hs_solve_level(f, hh, c.lambda, cfg.cg_iters, std::move(init));
          },
          &res.trace);
      break;
    case Model::PairwiseHS: {
      const ImageSequence pre =
          cfg.preprocess_sigma > 0.0 ? gaussian_smooth(I, cfg.preprocess_sigma) : I;
      const VelocityField vel = pairwise_hs(pre, cfg.lambda, cfg.cg_iters);
      res.amplitude = amplitude_from_velocity(vel, h);
      break;
    }
  }
  res.seconds_total = std::chrono::duration<double>(clock_type::now() - t0).count();

  fs::create_directories(opt.out_dir);
  res.amplitude_path = (fs::path(opt.out_dir) / "estimate.hof").string();
  res.trace_path = (fs::path(opt.out_dir) / "trace.csv").string();
  res.manifest_path = (fs::path(opt.out_dir) / "reconstruct_manifest.json").string();
  write_amplitude(res.amplitude_path, res.amplitude);
  write_trace_csv(res.trace_path, res.trace);

  json manifest{{"command", "reconstruct"},
                {"model", model_name(opt.model)},
                {"input", opt.input_path},
                {"omega", h.omega},
                {"periods", h.periods},
                {"frames", h.frames},
                {"config",
                 {{"lambda", cfg.lambda},
                  {"levels", cfg.levels},
                  {"eta", cfg.eta},
                  {"cg_iters", cfg.cg_iters},
                  {"irls_iters", cfg.irls_iters},
                  {"cg_tol", cfg.cg_tol},
                  {"eps0", cfg.eps0},
                  {"delta0", cfg.delta0},
                  {"sigma_pre", cfg.preprocess_sigma},
                  {"median", cfg.median_window},
                  {"warps", cfg.warps},
                  {"unit_weights", cfg.unit_weights}}},
                {"outputs", {{"amplitude", res.amplitude_path}, {"trace", res.trace_path}}}};

  json timings{{"total", res.seconds_total}};
  for (const auto& [stage, sec] : res.trace.timings) timings[stage] = sec;
  manifest["timings"] = timings;

  if (opt.write_pgm) {
    json pgms = json::array();
    for (int comp = 0; comp < res.amplitude.grid.dim; ++comp) {
      const int N = res.amplitude.grid.pixels();
      std::vector<double> mag(N);
      const double* rp = res.amplitude.re_plane(comp);
      const double* ip = res.amplitude.im_plane(comp);
      for (int q = 0; q < N; ++q) mag[q] = std::hypot(rp[q], ip[q]);
      const std::string path =
          (fs::path(opt.out_dir) / ("amplitude_mag" + std::to_string(comp + 1) + ".pgm"))
              .string();
      const auto [lo, hi] =
          write_pgm(path, mag.data(), res.amplitude.grid.rows, res.amplitude.grid.cols);
      pgms.push_back({{"file", path}, {"min", lo}, {"max", hi}});
    }
    manifest["pgm"] = pgms;
  }
  write_json(res.manifest_path, manifest);
  return res;
}

MetricsResult metrics_run(const MetricsOptions& opt) {
  const auto t0 = clock_type::now();
  const AmplitudeField est = read_amplitude(opt.estimate_path);
  const AmplitudeField truth = read_amplitude(opt.truth_path);
  const ImageSequence ref = read_image_sequence(opt.reference_path);
  if (!(est.grid == truth.grid) || !(est.grid == ref.grid))
    throw DataError("metrics: estimate/truth/reference grids differ");

  MetricsResult res;
  res.re = relative_error(est, truth);
  for (int comp = 0; comp < est.grid.dim; ++comp) {
    res.ssim_planes["ssim_re_" + std::to_string(comp + 1)] =
        ssim(est.re_plane(comp), truth.re_plane(comp), est.grid.rows, est.grid.cols);
    res.ssim_planes["ssim_im_" + std::to_string(comp + 1)] =
        ssim(est.im_plane(comp), truth.im_plane(comp), est.grid.rows, est.grid.cols);
  }

  const HarmonicParams h = params_for(opt.omega, opt.periods, ref.frames);
  const auto tr0 = clock_type::now();
  const DeformationMap psi = integrate_psi(est, h, opt.substeps, opt.sigma_grad);
  const std::vector<double> frame0(ref.frame(0), ref.frame(0) + ref.grid.pixels());
  const ImageSequence rendered = render_sequence(frame0, psi);
  const double seconds_render = std::chrono::duration<double>(clock_type::now() - tr0).count();
  res.rie = relative_image_error(rendered, ref);
  res.issim = issim(rendered, ref);

  std::ofstream os(opt.out_csv, std::ios::trunc);
  if (!os) throw DataError("metrics: cannot open " + opt.out_csv);
  os << "metric,value\n";
  char buf[64];
  auto put = [&](const std::string& k, double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    os << k << "," << buf << "\n";
  };
  put("re", res.re);
  put("rie", res.rie);
  for (const auto& [k, v] : res.ssim_planes) put(k, v);
  put("issim", res.issim);
  put("wall_seconds_render", seconds_render);
  if (!opt.run_manifest.empty()) {
    std::ifstream is(opt.run_manifest);
    if (!is) throw DataError("metrics: cannot open manifest " + opt.run_manifest);
    json manifest = json::parse(is, nullptr, false);
    if (manifest.is_discarded() || !manifest.contains("timings"))
      throw DataError("metrics: malformed run manifest " + opt.run_manifest);
    for (const auto& [stage, sec] : manifest["timings"].items())
      if (sec.is_number()) put("wall_seconds_solver_" + stage, sec.get<double>());
  }
  put("wall_seconds_total", std::chrono::duration<double>(clock_type::now() - t0).count());
  if (!os) throw DataError("metrics: short write to " + opt.out_csv);
  res.csv_path = opt.out_csv;
  return res;
}

void write_trace_csv(const std::string& path, const ReconstructTrace& trace) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw DataError("cannot open " + path);
  os << "level,phase,outer,inner,value\n";
  char buf[64];
  for (const auto& row : trace.rows) {
    std::snprintf(buf, sizeof buf, "%.12g", row.value);
    os << row.level << "," << row.phase << "," << row.outer << "," << row.inner << "," << buf
       << "\n";
  }
  if (!os) throw DataError("short write to " + path);
}

}  // namespace hof
