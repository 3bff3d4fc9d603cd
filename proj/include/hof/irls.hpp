#pragma once

// Robust models solved by iteratively reweighted least squares.
//
// Model II: Huber data term + Huber (isotropic, Frobenius) smoothness term.
// Model III: Huber data term + quadratic smoothness (constant reg weight 2).
//
// Each IRLS sweep freezes weights at the current iterate, solves the
// resulting weighted least-squares system by warm-started CG, then shrinks
// the Huber smoothing parameters. The majorization property makes the
// smoothed energy nonincreasing even with inexact inner solves.

#include "hof/model1.hpp"

namespace hof {

enum class RobustModel { II, III };

// Huber function: |x| for |x| >= eps, else x^2/(2 eps) + eps/2.
double huber(double x, double eps);

// Quadratic majorant q_eps(x; z) = x^2 / (2 max(eps,|z|)) + max(eps,|z|)/2;
// touches huber(x, eps) at x = z and dominates it elsewhere.
double quad_majorant(double x, double z, double eps);

// IRLS weights at the current iterate. data(t,x) = 1 / max(eps, |G(t,x)|);
// reg is 1 / max(delta, ||grad v(t,x)||_F) for Model II and the constant 2
// for Model III (reg_planes empty then).
struct Weights {
  Grid grid;
  int frames = 0;
  std::vector<double> data;
  bool reg_is_const = false;
  double reg_const = 0.0;
  std::vector<double> reg;
};

Weights compute_weights(const DerivativeFields& f, const AmplitudeField& a,
                        const HarmonicParams& h, double eps, double delta, RobustModel model);

// Weighted normal equations: data blocks fold w_D into the DFT bins, the
// regularizer folds w_R's bins at {0, 2 omega}. With unit weights this is
// exactly assemble_model1.
HarmonicSystem assemble_weighted(const DerivativeFields& f, const HarmonicParams& h,
                                 double lambda, const Weights& w);

// Smoothing parameters (eps for the data term, delta for the reg term) and
// the shrink rule eps <- max(min(eps, 0.1 * mean / sqrt(k+1)), c / sqrt(k+1)).
struct SmoothingSchedule {
  double eps = 1.0;
  double delta = 1.0;
  int k = 0;          // completed updates
  double floor_c = 1e-8;
};

SmoothingSchedule update_smoothing(const SmoothingSchedule& s, double mean_abs_residual,
                                   double mean_grad_norm);

// Smoothed objective E_{eps,delta}(v(a)) = sum_{t,x} huber(G, eps)
// + lambda * reg, with reg = sum huber(||grad v||_F, delta) for Model II and
// sum ||grad v||_F^2 for Model III.
double huber_energy(const DerivativeFields& f, const AmplitudeField& a, const HarmonicParams& h,
                    double lambda, double eps, double delta, RobustModel model);

// The weighted quadratic energy Q(a) = sum w_D G^2 + lambda * sum w_R ||grad v||^2
// whose normal equations assemble_weighted builds (used by tests).
double weighted_energy(const DerivativeFields& f, const AmplitudeField& a,
                       const HarmonicParams& h, double lambda, const Weights& w);

// IRLS on fixed derivative fields (one pyramid level). Appends the energy
// E_{eps_k, delta_k}(v^k) before each sweep to *energy_trace when given.
AmplitudeField irls_solve_level(const DerivativeFields& f, const HarmonicParams& h,
                                const SolverConfig& cfg, RobustModel model, AmplitudeField init,
                                int level, ReconstructTrace* trace,
                                std::vector<double>* energy_trace = nullptr);

// Full multiscale reconstruction with Model II or III.
AmplitudeField irls_reconstruct(const ImageSequence& I, const HarmonicParams& h,
                                const SolverConfig& cfg, RobustModel model,
                                ReconstructTrace* trace = nullptr);

}  // namespace hof
