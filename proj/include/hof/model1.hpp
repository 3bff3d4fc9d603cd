#pragma once

// Quadratic/quadratic harmonic flow model: normal equations of
//   E(a) = ||M a - y||^2 + (lambda T / 2) ||R a||^2
// where row block t of M applies diag(grad I(t,.)) [cos(t w), -sin(t w)] to
// the stacked amplitude [a_R; a_I], y = -stack_t D_t I, and R applies forward
// differences to every component plane.
//
// The system matrix C = M^T M + (lambda T/2) R^T R is never formed: the data
// part reduces to per-pixel d x d blocks built from temporal DFT bins of
// grad I grad I^T at {0, 2 omega}, and the regularizer is matrix-free.

#include <array>
#include <functional>

#include "hof/types.hpp"

namespace hof {

// Spatio-temporal derivative planes feeding the assembly: grad[axis](t, x)
// and the (possibly warped) temporal difference dt(t, x).
struct DerivativeFields {
  Grid grid;
  int frames = 0;
  std::array<std::vector<double>, 2> grad;
  std::vector<double> dt;

  const double* grad_plane(int axis, int t) const {
    return grad[axis].data() + static_cast<std::size_t>(t) * grid.pixels();
  }
  const double* dt_plane(int t) const {
    return dt.data() + static_cast<std::size_t>(t) * grid.pixels();
  }
};

// Unwarped fields: grad I by central differences, D_t I cyclic.
DerivativeFields plain_derivatives(const ImageSequence& I);

// Stacked solver vector layout: [a_R planes (dim), a_I planes (dim)],
// each plane row-major with grid.pixels() entries.
std::vector<double> stack_amplitude(const AmplitudeField& a);
AmplitudeField unstack_amplitude(const std::vector<double>& x, Grid grid);

// Matrix-free SPD operator. Data blocks are stored on the upper triangle of
// component pairs (pair_index: 1D -> {00}; 2D -> {00, 01, 11}); all three
// block kinds (RR, RI, II) are symmetric in the components. Regularizer
// weight planes wp/wm/wx hold (T/2)(W0 + Re W2), (T/2)(W0 - Re W2) and
// (T/2) Im W2 of the reg weight's DFT bins; unweighted systems store the
// constant T/2 (and 0 cross) analytically.
class HarmonicSystem {
 public:
  Grid grid;
  int frames = 0;
  double lambda = 0.0;

  std::array<std::vector<double>, 3> crr, cri, cii;
  std::vector<double> rhs;

  bool reg_const = true;
  double wp_const = 0.0, wm_const = 0.0;  // wx_const is always 0 in that case
  std::vector<double> wp, wm, wx;

  std::size_t size() const { return 2 * static_cast<std::size_t>(grid.dim) * grid.pixels(); }
  int pair_index(int i, int j) const;  // i <= j
  void apply(const std::vector<double>& x, std::vector<double>& out) const;
};

HarmonicSystem assemble_model1(const DerivativeFields& f, const HarmonicParams& h, double lambda);

// Internal shared assembly (unit weights when wd == nullptr; constant reg
// weight wr_const when wr == nullptr). assemble_model1/assemble_weighted are
// the public entry points.
HarmonicSystem assemble_core_weighted(const DerivativeFields& f, const HarmonicParams& h,
                                      double lambda, const std::vector<double>* wd,
                                      const std::vector<double>* wr, double wr_const);

struct CgOptions {
  int max_iters = 50;
  double tol = 1e-10;  // relative residual target ||r|| / ||b||
};

struct CgStats {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

// Called after every iteration with (iter, current x, relative residual).
using CgCallback = std::function<void(int, const std::vector<double>&, double)>;

// Conjugate gradients from the given start vector (warm starts supported).
// Throws SolverError on breakdown (<p, Cp> <= 0 on a non-negligible
// direction), which cannot happen for a well-formed SPD system.
CgStats cg_solve(const HarmonicSystem& S, std::vector<double>& x, const CgOptions& opt,
                 const CgCallback& callback = nullptr);

// Per-run diagnostics rows (level/phase/indices/value) for the CSV trace.
struct ReconstructTrace {
  struct Row {
    int level;
    std::string phase;
    int outer;
    int inner;
    double value;
  };
  std::vector<Row> rows;
  std::vector<std::pair<std::string, double>> timings;  // stage -> seconds
};

// Assemble + CG on fixed fields (one pyramid level).
AmplitudeField model1_solve_level(const DerivativeFields& f, const HarmonicParams& h,
                                  const SolverConfig& cfg, AmplitudeField init, int level,
                                  ReconstructTrace* trace);

// Full multiscale reconstruction with the quadratic model.
AmplitudeField model1_reconstruct(const ImageSequence& I, const HarmonicParams& h,
                                  const SolverConfig& cfg, ReconstructTrace* trace = nullptr);

}  // namespace hof
