#include "hof/fourier.hpp"

#include <cmath>

namespace hof {

std::complex<double> dft_at(const double* series, int frames, std::ptrdiff_t stride, double nu) {
  double re = 0.0, im = 0.0;
  for (int t = 0; t < frames; ++t) {
    const double v = series[t * stride];
    re += v * std::cos(t * nu);
    im -= v * std::sin(t * nu);
  }
  return {re / frames, im / frames};
}

HarmonicCoefficients harmonic_coefficients(const std::vector<double>& stack, Grid grid,
                                           const HarmonicParams& h) {
  h.validate();
  const int N = grid.pixels();
  const int T = h.frames;
  if (stack.size() != static_cast<std::size_t>(T) * N)
    throw DataError("harmonic_coefficients: stack size mismatch");

  HarmonicCoefficients out;
  out.grid = grid;
  out.f0.assign(N, 0.0);
  out.f1.assign(N, {0.0, 0.0});
  out.f2.assign(N, {0.0, 0.0});

  std::vector<double> c1r(N, 0.0), c1i(N, 0.0), c2r(N, 0.0), c2i(N, 0.0);
  for (int t = 0; t < T; ++t) {
    const double* f = stack.data() + static_cast<std::size_t>(t) * N;
    const double co1 = std::cos(t * h.omega), si1 = std::sin(t * h.omega);
    const double co2 = std::cos(2.0 * t * h.omega), si2 = std::sin(2.0 * t * h.omega);
    for (int x = 0; x < N; ++x) {
      out.f0[x] += f[x];
      c1r[x] += f[x] * co1;
      c1i[x] -= f[x] * si1;
      c2r[x] += f[x] * co2;
      c2i[x] -= f[x] * si2;
    }
  }
  const double inv = 1.0 / T;
  for (int x = 0; x < N; ++x) {
    out.f0[x] *= inv;
    out.f1[x] = {c1r[x] * inv, c1i[x] * inv};
    out.f2[x] = {c2r[x] * inv, c2i[x] * inv};
  }
  return out;
}

}  // namespace hof
