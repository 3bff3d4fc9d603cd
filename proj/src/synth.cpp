#include "hof/synth.hpp"

#include <cmath>
#include <random>

#include "hof/core.hpp"
#include "hof/multiscale.hpp"
#include "hof/parallel.hpp"

namespace hof {

namespace {

// d/dk along `axis` by central differences, one-sided at the borders.
// Exact for fields linear in the coordinate, including at the borders.
void grid_derivative(const double* f, double* out, int rows, int cols, int axis) {
  if (axis == 0) {
    for (int j = 0; j < cols; ++j) {
      for (int k = 0; k < rows; ++k) {
        double v;
        if (k == 0)
          v = f[cols + j] - f[j];
        else if (k == rows - 1)
          v = f[k * cols + j] - f[(k - 1) * cols + j];
        else
          v = 0.5 * (f[(k + 1) * cols + j] - f[(k - 1) * cols + j]);
        out[k * cols + j] = v;
      }
    }
  } else {
    for (int k = 0; k < rows; ++k) {
      for (int j = 0; j < cols; ++j) {
        double v;
        if (j == 0)
          v = f[k * cols + 1] - f[k * cols];
        else if (j == cols - 1)
          v = f[k * cols + j] - f[k * cols + j - 1];
        else
          v = 0.5 * (f[k * cols + j + 1] - f[k * cols + j - 1]);
        out[k * cols + j] = v;
      }
    }
  }
}

}  // namespace

DeformationMap integrate_psi_generic(Grid grid, int frames, int substeps, double sigma_grad,
                                     const GridVelocityFn& velocity,
                                     const std::array<std::vector<double>, 2>* psi0) {
  if (frames < 1) throw ConfigError("integrate_psi: frames >= 1");
  if (substeps < 1) throw ConfigError("integrate_psi: substeps >= 1");
  const int d = grid.dim;
  const int rows = grid.rows, cols = grid.cols;
  const int N = grid.pixels();

  DeformationMap psi;
  psi.grid = grid;
  psi.frames = frames;
  for (int axis = 0; axis < d; ++axis)
    psi.coord[axis].assign(static_cast<std::size_t>(frames) * N, 0.0);

  std::array<std::vector<double>, 2> cur;
  for (int axis = 0; axis < d; ++axis) {
    if (psi0) {
      if ((*psi0)[axis].size() != static_cast<std::size_t>(N))
        throw DataError("integrate_psi: psi0 plane size mismatch");
      cur[axis] = (*psi0)[axis];
    } else {
      cur[axis].resize(N);
      for (int k = 0; k < rows; ++k)
        for (int j = 0; j < cols; ++j) cur[axis][k * cols + j] = axis == 0 ? k : j;
    }
    std::copy(cur[axis].begin(), cur[axis].end(), psi.plane(axis, 0));
  }

  const double diag = std::sqrt(static_cast<double>(rows) * rows +
                                static_cast<double>(cols) * cols);
  const double slack = 10.0 * diag;
  const double dt = 1.0 / substeps;

  std::array<std::vector<double>, 2> v;
  std::vector<double> grad(N), smoothed(N);
  std::array<std::array<std::vector<double>, 2>, 2> dpsi;  // [comp][axis]
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a) dpsi[c][a].assign(N, 0.0);

  for (int t = 0; t + 1 < frames; ++t) {
    for (int m = 0; m < substeps; ++m) {
      const double tau = t + m * dt;
      for (int axis = 0; axis < d; ++axis) v[axis].assign(N, 0.0);
      velocity(tau, v);
      for (int comp = 0; comp < d; ++comp) {
        for (int axis = 0; axis < d; ++axis) {
          grid_derivative(cur[comp].data(), grad.data(), rows, cols, axis);
          if (sigma_grad > 0.0) {
            gaussian_smooth_plane_renorm(grad.data(), smoothed.data(), rows, cols, sigma_grad);
            dpsi[comp][axis] = smoothed;
          } else {
            dpsi[comp][axis] = grad;
          }
        }
      }
      for (int comp = 0; comp < d; ++comp)
        for (int q = 0; q < N; ++q) {
          double adv = 0.0;
          for (int axis = 0; axis < d; ++axis) adv += dpsi[comp][axis][q] * v[axis][q];
          cur[comp][q] -= dt * adv;
        }
    }
    for (int comp = 0; comp < d; ++comp) {
      const double lo = -slack;
      const double hi = (comp == 0 ? rows - 1 : cols - 1) + slack;
      for (int q = 0; q < N; ++q)
        if (!(cur[comp][q] >= lo && cur[comp][q] <= hi))
          throw SolverError("integrate_psi: map left the domain by more than 10 grid "
                            "diagonals at frame " + std::to_string(t + 1));
      std::copy(cur[comp].begin(), cur[comp].end(), psi.plane(comp, t + 1));
    }
  }
  return psi;
}

DeformationMap integrate_psi(const AmplitudeField& a, const HarmonicParams& h, int substeps,
                             double sigma_grad) {
  a.validate();
  h.validate();
  return integrate_psi_generic(
      a.grid, h.frames, substeps, sigma_grad,
      [&](double t, std::array<std::vector<double>, 2>& v) {
        velocity_at(a, h, t, &v[0], a.grid.dim > 1 ? &v[1] : nullptr);
      },
      nullptr);
}

ImageSequence render_sequence(const std::vector<double>& frame0, const DeformationMap& psi) {
  const int rows = psi.grid.rows, cols = psi.grid.cols;
  const int N = psi.grid.pixels();
  if (frame0.size() != static_cast<std::size_t>(N))
    throw DataError("render_sequence: frame0 size mismatch");
  ImageSequence I = ImageSequence::zeros(psi.grid, psi.frames);
  parallel_for(psi.frames, [&](std::size_t ts) {
    const int t = static_cast<int>(ts);
    const double* py = psi.plane(0, t);
    const double* px = psi.grid.dim > 1 ? psi.plane(1, t) : nullptr;
    double* out = I.frame(t);
    for (int q = 0; q < N; ++q)
      out[q] = bicubic_sample(frame0.data(), rows, cols, py[q], px ? px[q] : 0.0);
  });
  return I;
}

namespace {

void benchmark_amplitude_into(AmplitudeField& a, double coord_scale, double amp) {
  const int rows = a.grid.rows, cols = a.grid.cols;
  const double n1 = 200.0, n2 = 206.0;
  const double cy = n1 / 2.0, cx = n2 / 2.0;
  for (int k = 0; k < rows; ++k) {
    for (int j = 0; j < cols; ++j) {
      const double x1 = k / coord_scale, x2 = j / coord_scale;
      const double r2 = (x1 - cy) * (x1 - cy) + (x2 - cx) * (x2 - cx);
      const double q2 = (x1 - cy / 2.0) * (x1 - cy / 2.0) + (x2 - cx / 2.0) * (x2 - cx / 2.0);
      a.re_plane(0)[k * cols + j] =
          amp * 0.8 * (x1 - n1 / 2.0) * std::sin(r2 / 2000.0) * std::exp(-r2 / 3300.0);
      a.re_plane(1)[k * cols + j] = amp * 10.0 * std::exp(-q2 / 1650.0);
    }
  }
}

}  // namespace

AmplitudeField benchmark_amplitude(int n1, int n2) {
  if (n1 < 2 || n2 < 2) throw ConfigError("benchmark_amplitude: grid too small");
  AmplitudeField a = AmplitudeField::zeros(Grid::make(n1, n2));
  benchmark_amplitude_into(a, 1.0, 1.0);
  return a;
}

AmplitudeField benchmark_amplitude_scaled(double scale, double amp_factor) {
  if (!(scale > 0.0)) throw ConfigError("benchmark_amplitude_scaled: scale must be positive");
  const int n1 = static_cast<int>(std::ceil(200.0 * scale));
  const int n2 = static_cast<int>(std::ceil(206.0 * scale));
  if (n1 < 2 || n2 < 2) throw ConfigError("benchmark_amplitude_scaled: scale too small");
  return benchmark_amplitude_on(Grid::make(n1, n2), scale, amp_factor);
}

AmplitudeField benchmark_amplitude_on(Grid grid, double coord_scale, double amp_factor) {
  if (!(coord_scale > 0.0) || !(amp_factor > 0.0))
    throw ConfigError("benchmark_amplitude_on: scale and amp_factor must be positive");
  if (grid.dim != 2) throw ConfigError("benchmark_amplitude_on: needs a 2D grid");
  AmplitudeField a = AmplitudeField::zeros(grid);
  benchmark_amplitude_into(a, coord_scale, amp_factor);
  return a;
}

std::vector<double> texture_plane(Grid grid, std::uint64_t seed, double low, double high) {
  if (!(high > low)) throw ConfigError("texture_plane: need high > low");
  const int N = grid.pixels();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> noise(N), fine(N), coarse(N);
  for (double& v : noise) v = uni(rng);
  gaussian_smooth_plane_renorm(noise.data(), fine.data(), grid.rows, grid.cols, 1.5);
  for (double& v : noise) v = uni(rng);
  gaussian_smooth_plane_renorm(noise.data(), coarse.data(), grid.rows, grid.cols, 5.0);
  std::vector<double> tex(N);
  for (int q = 0; q < N; ++q) tex[q] = 0.6 * fine[q] + 0.4 * coarse[q];
  double lo = tex[0], hi = tex[0];
  for (double v : tex) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  for (double& v : tex) v = low + (v - lo) / span * (high - low);
  return tex;
}

ImageSequence add_noise(const ImageSequence& I, const NoiseSpec& spec) {
  I.validate();
  if (spec.salt_pepper < 0.0 || spec.salt_pepper > 1.0)
    throw ConfigError("add_noise: salt_pepper fraction in [0,1]");
  std::mt19937_64 rng(spec.seed);
  ImageSequence out = ImageSequence::zeros(I.grid, I.frames);
  const int N = I.grid.pixels();
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int t = 0; t < I.frames; ++t) {
    const double* in = I.frame(t);
    double* o = out.frame(t);
    if (spec.poisson) {
      for (int q = 0; q < N; ++q) {
        if (in[q] < 0.0)
          throw DataError("add_noise: Poisson noise requires nonnegative intensities");
        if (in[q] == 0.0) {
          o[q] = 0.0;
          continue;
        }
        std::poisson_distribution<long> pois(in[q]);
        o[q] = static_cast<double>(pois(rng));
      }
    } else {
      std::copy(in, in + N, o);
    }
    if (spec.salt_pepper > 0.0) {
      double lo = o[0], hi = o[0];
      for (int q = 0; q < N; ++q) {
        lo = std::min(lo, o[q]);
        hi = std::max(hi, o[q]);
      }
      for (int q = 0; q < N; ++q)
        if (uni(rng) < spec.salt_pepper) o[q] = uni(rng) < 0.5 ? lo : hi;
    }
  }
  return out;
}

double linear_amplitude_phi(double c, double omega, double t, double x) {
  return x * std::exp(c / omega * std::sin(omega * t));
}

double linear_amplitude_psi(double c, double omega, double t, double y) {
  return y * std::exp(-c / omega * std::sin(omega * t));
}

namespace {
double arccot(double z) { return M_PI / 2.0 - std::atan(z); }  // range (0, pi)
}

double drifting_wave_phi(double t, double x) {
  return t + 2.0 * arccot(t + std::cos(x / 2.0) / std::sin(x / 2.0));
}

double drifting_wave_psi(double t, double y) {
  const double half = (y - t) / 2.0;
  return 2.0 * arccot(std::cos(half) / std::sin(half) - t);
}

double ParabolicEnvelopeFixture::phi(double t, double x) const {
  return x + c * (1.0 - x * x) * std::sin(t);
}

double ParabolicEnvelopeFixture::psi(double t, double y) const {
  const double s = c * std::sin(t);
  const double disc = std::sqrt(1.0 - 4.0 * s * (y - s));
  return 2.0 * (y - s) / (1.0 + disc);  // stable root, psi -> y as s -> 0
}

double ParabolicEnvelopeFixture::velocity(double t, double y) const {
  const double p = psi(t, y);
  return c * (1.0 - p * p) * std::cos(t);
}

}  // namespace hof
