#include "hof/multiscale.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "hof/core.hpp"
#include "hof/diffops.hpp"
#include "hof/parallel.hpp"

namespace hof {

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int r = -radius; r <= radius; ++r) {
    k[r + radius] = std::exp(-0.5 * r * r / (sigma * sigma));
    sum += k[r + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

// One smoothing pass along `axis`; zero padding, or per-pixel kernel-mass
// renormalization when `renorm` (constants survive at the borders).
void smooth_axis(const double* in, double* out, int rows, int cols, int axis,
                 const std::vector<double>& k, bool renorm) {
  const int radius = (static_cast<int>(k.size()) - 1) / 2;
  const int n = axis == 0 ? rows : cols;
  const int m = axis == 0 ? cols : rows;
  for (int b = 0; b < m; ++b) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0, mass = 0.0;
      for (int r = -radius; r <= radius; ++r) {
        const int ii = i + r;
        if (ii < 0 || ii >= n) continue;
        const double w = k[r + radius];
        acc += w * (axis == 0 ? in[ii * cols + b] : in[b * cols + ii]);
        mass += w;
      }
      if (renorm && mass > 0.0) acc /= mass;
      if (axis == 0)
        out[i * cols + b] = acc;
      else
        out[b * cols + i] = acc;
    }
  }
}

void smooth_plane(const double* in, double* out, int rows, int cols, double sigma, bool renorm) {
  if (sigma <= 0.0) {
    std::copy(in, in + static_cast<std::size_t>(rows) * cols, out);
    return;
  }
  const std::vector<double> k = gaussian_kernel(sigma);
  if (cols == 1) {
    smooth_axis(in, out, rows, cols, 0, k, renorm);
    return;
  }
  std::vector<double> tmp(static_cast<std::size_t>(rows) * cols);
  smooth_axis(in, tmp.data(), rows, cols, 0, k, renorm);
  smooth_axis(tmp.data(), out, rows, cols, 1, k, renorm);
}

inline void catmull_rom_weights(double u, double w[4]) {
  w[0] = 0.5 * (-u * u * u + 2.0 * u * u - u);
  w[1] = 0.5 * (3.0 * u * u * u - 5.0 * u * u + 2.0);
  w[2] = 0.5 * (-3.0 * u * u * u + 4.0 * u * u + u);
  w[3] = 0.5 * (u * u * u - u * u);
}

}  // namespace

void gaussian_smooth_plane(const double* in, double* out, int rows, int cols, double sigma) {
  smooth_plane(in, out, rows, cols, sigma, false);
}

void gaussian_smooth_plane_renorm(const double* in, double* out, int rows, int cols,
                                  double sigma) {
  smooth_plane(in, out, rows, cols, sigma, true);
}

ImageSequence gaussian_smooth(const ImageSequence& I, double sigma) {
  ImageSequence out = ImageSequence::zeros(I.grid, I.frames);
  parallel_for(I.frames, [&](std::size_t t) {
    gaussian_smooth_plane(I.frame(static_cast<int>(t)), out.frame(static_cast<int>(t)),
                          I.grid.rows, I.grid.cols, sigma);
  });
  return out;
}

double bicubic_sample(const double* plane, int rows, int cols, double y, double x) {
  y = std::clamp(y, 0.0, static_cast<double>(rows - 1));
  x = std::clamp(x, 0.0, static_cast<double>(cols - 1));
  const int i0 = std::min(static_cast<int>(std::floor(y)), rows - 1);
  const int j0 = std::min(static_cast<int>(std::floor(x)), cols - 1);
  double wy[4], wx[4];
  catmull_rom_weights(y - i0, wy);
  catmull_rom_weights(x - j0, wx);
  if (cols == 1) {
    double acc = 0.0;
    for (int a = -1; a <= 2; ++a)
      acc += wy[a + 1] * plane[std::clamp(i0 + a, 0, rows - 1)];
    return acc;
  }
  double acc = 0.0;
  for (int a = -1; a <= 2; ++a) {
    const int ii = std::clamp(i0 + a, 0, rows - 1);
    double row = 0.0;
    for (int b = -1; b <= 2; ++b)
      row += wx[b + 1] * plane[ii * cols + std::clamp(j0 + b, 0, cols - 1)];
    acc += wy[a + 1] * row;
  }
  return acc;
}

void resample_plane(const double* in, int in_rows, int in_cols, double* out, int out_rows,
                    int out_cols) {
  const double ry = out_rows > 1 ? static_cast<double>(in_rows - 1) / (out_rows - 1) : 0.0;
  const double rx = out_cols > 1 ? static_cast<double>(in_cols - 1) / (out_cols - 1) : 0.0;
  for (int i = 0; i < out_rows; ++i)
    for (int j = 0; j < out_cols; ++j)
      out[i * out_cols + j] = bicubic_sample(in, in_rows, in_cols, i * ry, j * rx);
}

std::vector<ImageSequence> build_pyramid(const ImageSequence& I, int levels, double eta) {
  I.validate();
  if (levels < 1) throw ConfigError("build_pyramid: levels >= 1");
  if (!(eta > 0.0) || !(eta < 1.0)) throw ConfigError("build_pyramid: eta in (0,1)");
  const int extent = I.grid.dim == 1 ? I.grid.rows : std::min(I.grid.rows, I.grid.cols);
  if (levels > 1 &&
      static_cast<int>(std::ceil(std::pow(eta, levels - 1) * extent)) < 8)
    throw ConfigError("build_pyramid: coarsest level would fall below 8 pixels");

  std::vector<ImageSequence> pyr(levels);
  pyr[levels - 1] = I;
  const double sigma = 1.0 / std::sqrt(2.0 * eta);
  for (int l = levels - 2; l >= 0; --l) {
    const double f = std::pow(eta, levels - 1 - l);
    const int rows = static_cast<int>(std::ceil(f * I.grid.rows));
    const int cols = I.grid.dim == 1 ? 1 : static_cast<int>(std::ceil(f * I.grid.cols));
    const ImageSequence& src = pyr[l + 1];
    ImageSequence dst = ImageSequence::zeros(Grid::make(rows, cols), I.frames);
    parallel_for(I.frames, [&](std::size_t t) {
      std::vector<double> tmp(static_cast<std::size_t>(src.grid.rows) * src.grid.cols);
      gaussian_smooth_plane(src.frame(static_cast<int>(t)), tmp.data(), src.grid.rows,
                            src.grid.cols, sigma);
      resample_plane(tmp.data(), src.grid.rows, src.grid.cols, dst.frame(static_cast<int>(t)),
                     rows, cols);
    });
    pyr[l] = std::move(dst);
  }
  return pyr;
}

AmplitudeField upscale_amplitude(const AmplitudeField& a, Grid target) {
  a.validate();
  if (target.dim != a.grid.dim) throw ConfigError("upscale_amplitude: dim mismatch");
  AmplitudeField out = AmplitudeField::zeros(target);
  const double ratio[2] = {static_cast<double>(target.rows) / a.grid.rows,
                           static_cast<double>(target.cols) / a.grid.cols};
  for (int comp = 0; comp < a.grid.dim; ++comp) {
    resample_plane(a.re_plane(comp), a.grid.rows, a.grid.cols, out.re_plane(comp), target.rows,
                   target.cols);
    resample_plane(a.im_plane(comp), a.grid.rows, a.grid.cols, out.im_plane(comp), target.rows,
                   target.cols);
    double* rp = out.re_plane(comp);
    double* ip = out.im_plane(comp);
    for (int q = 0; q < target.pixels(); ++q) {
      rp[q] *= ratio[comp];
      ip[q] *= ratio[comp];
    }
  }
  return out;
}

DerivativeFields warp_derivatives(const ImageSequence& I, const VelocityField& vtilde) {
  I.validate();
  if (vtilde.frames != I.frames || !(vtilde.grid == I.grid))
    throw DataError("warp_derivatives: velocity/image shape mismatch");
  const int d = I.grid.dim;
  const int rows = I.grid.rows, cols = I.grid.cols;
  const int N = I.grid.pixels();
  const GradientStack g = central_gradient(I);

  DerivativeFields f;
  f.grid = I.grid;
  f.frames = I.frames;
  const std::size_t sz = static_cast<std::size_t>(I.frames) * N;
  for (int axis = 0; axis < d; ++axis) f.grad[axis].assign(sz, 0.0);
  f.dt.assign(sz, 0.0);

  parallel_for(I.frames, [&](std::size_t ts) {
    const int t = static_cast<int>(ts);
    const int next = (t + 1) % I.frames;
    const double* cur = I.frame(t);
    const double* nxt = I.frame(next);
    double* gw[2] = {f.grad[0].data() + ts * N, d > 1 ? f.grad[1].data() + ts * N : nullptr};
    double* dtw = f.dt.data() + ts * N;
    for (int k = 0; k < rows; ++k) {
      for (int j = 0; j < cols; ++j) {
        const int q = k * cols + j;
        const double vy = vtilde.plane(t, 0)[q];
        const double vx = d > 1 ? vtilde.plane(t, 1)[q] : 0.0;
        const double sy = k + vy, sx = j + vx;
        double gdotv = 0.0;
        for (int axis = 0; axis < d; ++axis) {
          const double gs = bicubic_sample(g.plane(axis, next), rows, cols, sy, sx);
          gw[axis][q] = gs;
          gdotv += gs * (axis == 0 ? vy : vx);
        }
        dtw[q] = bicubic_sample(nxt, rows, cols, sy, sx) - cur[q] - gdotv;
      }
    }
  });
  return f;
}

AmplitudeField median_filter_amplitude(const AmplitudeField& a, int window) {
  a.validate();
  if (window < 1 || window % 2 == 0)
    throw ConfigError("median_filter_amplitude: window must be odd and >= 1");
  if (window == 1) return a;
  const int half = window / 2;
  const int rows = a.grid.rows, cols = a.grid.cols;
  AmplitudeField out = AmplitudeField::zeros(a.grid);
  std::vector<double> buf;
  buf.reserve(static_cast<std::size_t>(window) * window);
  auto filter_plane = [&](const double* in, double* dst) {
    for (int k = 0; k < rows; ++k) {
      for (int j = 0; j < cols; ++j) {
        buf.clear();
        for (int p = std::max(0, k - half); p <= std::min(rows - 1, k + half); ++p)
          for (int q = std::max(0, j - half); q <= std::min(cols - 1, j + half); ++q)
            buf.push_back(in[p * cols + q]);
        std::sort(buf.begin(), buf.end());
        const std::size_t m = buf.size();
        dst[k * cols + j] =
            m % 2 == 1 ? buf[m / 2] : 0.5 * (buf[m / 2 - 1] + buf[m / 2]);
      }
    }
  };
  for (int comp = 0; comp < a.grid.dim; ++comp) {
    filter_plane(a.re_plane(comp), out.re_plane(comp));
    filter_plane(a.im_plane(comp), out.im_plane(comp));
  }
  return out;
}

AmplitudeField run_multiscale(const ImageSequence& I, const HarmonicParams& h,
                              const SolverConfig& cfg, const LevelSolver& solve,
                              ReconstructTrace* trace) {
  I.validate();
  h.validate();
  cfg.validate();
  using clock = std::chrono::steady_clock;
  auto stamp = [&](const std::string& name, clock::time_point t0) {
    if (trace)
      trace->timings.emplace_back(
          name, std::chrono::duration<double>(clock::now() - t0).count());
  };

  auto t0 = clock::now();
  const ImageSequence pre =
      cfg.preprocess_sigma > 0.0 ? gaussian_smooth(I, cfg.preprocess_sigma) : I;
  stamp("preprocess", t0);

  t0 = clock::now();
  const std::vector<ImageSequence> pyr = build_pyramid(pre, cfg.levels, cfg.eta);
  stamp("pyramid", t0);

  AmplitudeField a;
  bool have = false;
  for (int l = 0; l < cfg.levels; ++l) {
    t0 = clock::now();
    const ImageSequence& lvl = pyr[l];
    a = have ? upscale_amplitude(a, lvl.grid) : AmplitudeField::zeros(lvl.grid);
    have = true;
    const int passes = (l == 0 || cfg.warps == 0) ? 1 : cfg.warps;
    for (int pass = 0; pass < passes; ++pass) {
      DerivativeFields f;
      if (l == 0 || cfg.warps == 0) {
        f = plain_derivatives(lvl);
      } else {
        const VelocityField vt = velocity_from_amplitude(a, h);
        f = warp_derivatives(lvl, vt);
      }
      a = solve(f, h, cfg, std::move(a), l);
    }
    a = median_filter_amplitude(a, cfg.median_window);
    stamp("level" + std::to_string(l), t0);
  }
  return a;
}

}  // namespace hof
