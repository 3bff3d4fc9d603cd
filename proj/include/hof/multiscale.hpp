#pragma once

// Coarse-to-fine machinery: Gaussian smoothing, image pyramids, amplitude
// upscaling, derivative warping and the median filter applied between levels.

#include <functional>

#include "hof/model1.hpp"

namespace hof {

// Separable Gaussian, kernel truncated at radius ceil(3 sigma), renormalized
// to sum 1, zero-padded input. sigma == 0 is the identity.
void gaussian_smooth_plane(const double* in, double* out, int rows, int cols, double sigma);
ImageSequence gaussian_smooth(const ImageSequence& I, double sigma);

// Like gaussian_smooth_plane but renormalizing by the in-bounds kernel mass,
// so constants are preserved at borders (used by the synthesis integrator).
void gaussian_smooth_plane_renorm(const double* in, double* out, int rows, int cols, double sigma);

// Catmull-Rom sample at continuous (row, col); coordinates are clamped to
// the plane and border values replicate (nearest extrapolation). 1D planes
// (cols == 1) interpolate along rows only.
double bicubic_sample(const double* plane, int rows, int cols, double y, double x);

// Catmull-Rom resampling with align-corners coordinate mapping.
void resample_plane(const double* in, int in_rows, int in_cols, double* out, int out_rows,
                    int out_cols);

// levels images ordered coarse to fine; the last one is the input. Level
// sizes are ceil(eta^(L-l) n). Presmoothing sigma = 1/sqrt(2 eta) per step.
std::vector<ImageSequence> build_pyramid(const ImageSequence& I, int levels, double eta);

// Bicubic upscale of each component plane; component values are multiplied
// by the per-axis size ratio (velocities scale with the grid).
AmplitudeField upscale_amplitude(const AmplitudeField& a, Grid target);

// Semi-implicit warping: grad~ I(t,x) = grad I(t+1 mod T, .) at x + v~(t,x),
// dt~(t,x) = I(t+1 mod T, x + v~) - I(t,x) - grad~ I(t,x)^T v~(t,x);
// out-of-range samples clamp to the border (nearest extrapolation).
DerivativeFields warp_derivatives(const ImageSequence& I, const VelocityField& vtilde);

// Componentwise median on each of the 2*dim planes; window shrinks at the
// borders. window == 1 returns the input.
AmplitudeField median_filter_amplitude(const AmplitudeField& a, int window);

// One coarse-to-fine pass: preprocess, pyramid, per-level solve with warm
// start from the upscaled previous level, median filter after each level.
// solve(fields, h, cfg, init, level) runs the actual solver.
using LevelSolver = std::function<AmplitudeField(const DerivativeFields&, const HarmonicParams&,
                                                 const SolverConfig&, AmplitudeField, int)>;

AmplitudeField run_multiscale(const ImageSequence& I, const HarmonicParams& h,
                              const SolverConfig& cfg, const LevelSolver& solve,
                              ReconstructTrace* trace = nullptr);

}  // namespace hof
