#pragma once

// Batch entry points shared by the CLI and the end-to-end tests: synthetic
// instance generation, reconstruction with any solver, and metric reports.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "hof/irls.hpp"
#include "hof/synth.hpp"

namespace hof {

enum class Model { One, Two, Three, HarmonicHS, PairwiseHS };

Model parse_model(const std::string& name);       // "model1" ... "pairwise-hs"
std::string model_name(Model m);

// Per-model iteration budgets and regularization defaults.
SolverConfig default_config(Model m);

struct SynthOptions {
  double scale = 1.0;
  int n1 = 0, n2 = 0, frames = 0;   // 0 = derive from scale (200, 206, 300)
  int periods = 3;
  double amp_scale = -1.0;          // < 0 = scale^3
  int substeps = 8;
  double sigma_grad = 1.0;
  bool noisy = true;
  double salt_pepper = 0.005;
  std::uint64_t seed = 12345;
  std::string out_dir = ".";
};

struct SynthResult {
  Grid grid;
  HarmonicParams params;
  std::string amplitude_path, clean_path, noisy_path, manifest_path;
};

SynthResult synth_run(const SynthOptions& opt);

struct ReconstructOptions {
  std::string input_path;
  std::string out_dir = ".";
  Model model = Model::One;
  SolverConfig cfg;                 // call default_config(model) first
  double omega = 0.0;               // > 0 wins over periods
  int periods = 3;
  int threads = 0;                  // 0 = leave the global cap alone
  bool unit_weights = false;        // debug: freeze IRLS weights at 1
  bool write_pgm = true;
};

struct ReconstructResult {
  AmplitudeField amplitude;
  ReconstructTrace trace;
  std::string amplitude_path, trace_path, manifest_path;
  double seconds_total = 0.0;
};

ReconstructResult reconstruct_run(const ReconstructOptions& opt);

struct MetricsOptions {
  std::string estimate_path;        // amplitude tensor
  std::string truth_path;           // amplitude tensor
  std::string reference_path;       // clean image sequence tensor
  std::string out_csv = "metrics.csv";
  int periods = 3;
  double omega = 0.0;
  int substeps = 8;
  double sigma_grad = 1.0;
  std::string run_manifest;         // optional: copy solver timings into the CSV
};

struct MetricsResult {
  double re = 0.0, rie = 0.0, issim = 0.0;
  std::map<std::string, double> ssim_planes;  // e.g. "ssim_re_1" -> value
  std::string csv_path;
};

MetricsResult metrics_run(const MetricsOptions& opt);

// Writes the CSV trace (level,phase,outer,inner,value rows).
void write_trace_csv(const std::string& path, const ReconstructTrace& trace);

}  // namespace hof
