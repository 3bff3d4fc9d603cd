#pragma once

// Synthetic data: Eulerian integration of the inverse deformation map psi
// (d psi / d t = -grad psi . v, psi(0,x) = x), rendering I(t,x) = I0(psi(t,x)),
// the benchmark amplitude field, band-limited textures and the noise model.

#include <array>
#include <cstdint>
#include <functional>

#include "hof/types.hpp"

namespace hof {

// Inverse deformation coordinates psi(t, x); coord[axis] holds frames*pixels
// values in pixel units (axis 0 = rows). Frame 0 is the identity.
struct DeformationMap {
  Grid grid;
  int frames = 0;
  std::array<std::vector<double>, 2> coord;

  double* plane(int axis, int t) {
    return coord[axis].data() + static_cast<std::size_t>(t) * grid.pixels();
  }
  const double* plane(int axis, int t) const {
    return coord[axis].data() + static_cast<std::size_t>(t) * grid.pixels();
  }
};

// Fills v[axis] (pixels entries each, axis < grid.dim) with the velocity
// sampled on the grid at continuous time t.
using GridVelocityFn = std::function<void(double t, std::array<std::vector<double>, 2>& v)>;

// Forward-Euler integration with `substeps` steps per frame. grad psi uses
// central differences (one-sided at borders), optionally smoothed with a
// border-renormalized Gaussian (sigma_grad > 0). psi0 == nullptr starts from
// the identity. Throws SolverError when the map strays beyond 10 grid
// diagonals (blown-up integration).
DeformationMap integrate_psi_generic(Grid grid, int frames, int substeps, double sigma_grad,
                                     const GridVelocityFn& velocity,
                                     const std::array<std::vector<double>, 2>* psi0 = nullptr);

// Same for the harmonic velocity of an amplitude field.
DeformationMap integrate_psi(const AmplitudeField& a, const HarmonicParams& h, int substeps = 8,
                             double sigma_grad = 1.0);

// I(t, x) = frame0 sampled at psi(t, x), bicubic with clamped coordinates.
ImageSequence render_sequence(const std::vector<double>& frame0, const DeformationMap& psi);

// Ground-truth amplitude of the synthetic benchmark on an n1 x n2 grid
// (components real, imaginary parts zero):
//   a1 = 0.8 (x1 - n1/2) sin(||x - x0||^2 / 2000) exp(-||x - x0||^2 / 3300)
//   a2 = 10 exp(-||x - x0/2||^2 / 1650),  x0 = (n1/2, n2/2), 0-based coords.
AmplitudeField benchmark_amplitude(int n1, int n2);

// Desk-scale variant: grid ceil(200 s) x ceil(206 s), formula evaluated at
// x / s, values multiplied by amp_factor.
AmplitudeField benchmark_amplitude_scaled(double scale, double amp_factor);

// Same formula on an explicit grid (coordinates mapped by x / coord_scale).
AmplitudeField benchmark_amplitude_on(Grid grid, double coord_scale, double amp_factor);

// Smooth random texture in [low, high]: two seeded white-noise layers
// smoothed at different scales, then affinely normalized.
std::vector<double> texture_plane(Grid grid, std::uint64_t seed, double low = 5.0,
                                  double high = 259.0);

// Poisson shot noise (per-pixel mean I(t,x), requires nonnegative input)
// followed by salt-and-pepper: each pixel independently replaced with
// probability salt_pepper by the frame's post-Poisson min or max (fair coin).
struct NoiseSpec {
  bool poisson = true;
  double salt_pepper = 0.005;
  std::uint64_t seed = 12345;
};

ImageSequence add_noise(const ImageSequence& I, const NoiseSpec& spec);

// Closed forms for the 1D field a(x) = c x: forward trajectories
// phi(t,x) = x exp(+(c/w) sin(w t)) and inverse psi(t,y) = y exp(-(c/w) sin(w t)).
double linear_amplitude_phi(double c, double omega, double t, double x);
double linear_amplitude_psi(double c, double omega, double t, double y);

// Closed forms for the 1D field a(x) = e^{-ix}, omega = 1 (v = cos(t - x)):
// non-periodic drifting trajectories on x in (0, pi).
double drifting_wave_phi(double t, double x);  // t + 2 arccot(t + cot(x/2))
double drifting_wave_psi(double t, double y);  // 2 arccot(cot((y-t)/2) - t)

// Periodic but non-harmonic deformation phi(t,x) = x + c (1 - x^2) sin t on
// [-1, 1]; its velocity field contains higher harmonics of omega = 1.
struct ParabolicEnvelopeFixture {
  double c = 0.3;
  double phi(double t, double x) const;
  double psi(double t, double y) const;       // stable quadratic-root branch
  double velocity(double t, double y) const;  // c (1 - psi^2) cos t
};

}  // namespace hof
