#pragma once

// Temporal DFT samples at the few frequencies the solvers need.
//
// Convention (matching the discrete normal equations):
//   F_d[f](nu, x) = (1/T) sum_{t=0}^{T-1} f(t, x) e^{-i t nu}
// so Re F = (1/T) sum f cos(t nu) and Im F = -(1/T) sum f sin(t nu).
// Only nu in {0, omega, 2 omega} is ever evaluated, by direct summation.

#include <complex>

#include "hof/types.hpp"

namespace hof {

// DFT of a strided scalar series f(t) = series[t * stride], t = 0..frames-1.
std::complex<double> dft_at(const double* series, int frames, std::ptrdiff_t stride, double nu);

// Per-pixel DFT bins of a (frames x pixels) stack at {0, omega, 2*omega}.
// f0 keeps only the real part (the imaginary part vanishes for real input
// summed over full periods; it is discarded, not asserted).
struct HarmonicCoefficients {
  Grid grid;
  std::vector<double> f0;
  std::vector<std::complex<double>> f1, f2;
};

HarmonicCoefficients harmonic_coefficients(const std::vector<double>& stack, Grid grid,
                                           const HarmonicParams& h);

}  // namespace hof
