#include "hof/baselines.hpp"

#include <cmath>

#include "hof/diffops.hpp"

namespace hof {

namespace {

// Dense LU with partial pivoting for the tiny per-pixel blocks (n <= 4).
struct SmallLU {
  int n = 0;
  std::array<double, 16> lu{};
  std::array<int, 4> piv{};

  void factor(const std::array<double, 16>& a, int dim) {
    n = dim;
    lu = a;
    for (int c = 0; c < n; ++c) piv[c] = c;
    for (int c = 0; c < n; ++c) {
      int best = c;
      for (int r = c + 1; r < n; ++r)
        if (std::abs(lu[r * n + c]) > std::abs(lu[best * n + c])) best = r;
      if (std::abs(lu[best * n + c]) < 1e-300)
        throw SolverError("harmonic_hs: singular per-pixel block");
      if (best != c) {
        for (int j = 0; j < n; ++j) std::swap(lu[c * n + j], lu[best * n + j]);
        std::swap(piv[c], piv[best]);
      }
      for (int r = c + 1; r < n; ++r) {
        lu[r * n + c] /= lu[c * n + c];
        for (int j = c + 1; j < n; ++j) lu[r * n + j] -= lu[r * n + c] * lu[c * n + j];
      }
    }
  }

  void solve(const double* rhs, double* x) const {
    double y[4];
    for (int r = 0; r < n; ++r) {
      y[r] = rhs[piv[r]];
      for (int c = 0; c < r; ++c) y[r] -= lu[r * n + c] * y[c];
    }
    for (int r = n - 1; r >= 0; --r) {
      for (int c = r + 1; c < n; ++c) y[r] -= lu[r * n + c] * x[c];
      x[r] = y[r] / lu[r * n + r];
    }
  }
};

// Mean over the available 4-neighbors (2 in 1D) of each pixel of a plane.
void neighbor_mean(const double* in, double* out, int rows, int cols) {
  for (int k = 0; k < rows; ++k) {
    for (int j = 0; j < cols; ++j) {
      double acc = 0.0;
      int cnt = 0;
      if (k > 0) { acc += in[(k - 1) * cols + j]; ++cnt; }
      if (k + 1 < rows) { acc += in[(k + 1) * cols + j]; ++cnt; }
      if (cols > 1) {
        if (j > 0) { acc += in[k * cols + j - 1]; ++cnt; }
        if (j + 1 < cols) { acc += in[k * cols + j + 1]; ++cnt; }
      }
      out[k * cols + j] = cnt ? acc / cnt : in[k * cols + j];
    }
  }
}

}  // namespace

std::vector<PointwiseBlock> pointwise_blocks(const DerivativeFields& f, const HarmonicParams& h) {
  h.validate();
  if (f.frames != h.frames) throw DataError("pointwise_blocks: frame count mismatch");
  const int d = f.grid.dim;
  const int N = f.grid.pixels();
  const int n = 2 * d;

  // Accumulators over t (continuous convention F_c = sum, no 1/T):
  // s0/c2/s2 of g_i g_j, and c1/s1 of g_i dt.
  std::vector<double> s0(static_cast<std::size_t>(N) * d * d, 0.0);
  std::vector<double> c2(s0.size(), 0.0), s2(s0.size(), 0.0);
  std::vector<double> c1(static_cast<std::size_t>(N) * d, 0.0), s1(c1.size(), 0.0);

  for (int t = 0; t < h.frames; ++t) {
    const double co1 = std::cos(t * h.omega), si1 = std::sin(t * h.omega);
    const double co2 = std::cos(2.0 * t * h.omega), si2 = std::sin(2.0 * t * h.omega);
    const double* gt = f.dt_plane(t);
    const double* g[2] = {f.grad_plane(0, t), d > 1 ? f.grad_plane(1, t) : nullptr};
    for (int q = 0; q < N; ++q) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          const double v = g[i][q] * g[j][q];
          const std::size_t idx = (static_cast<std::size_t>(q) * d + i) * d + j;
          s0[idx] += v;
          c2[idx] += v * co2;
          s2[idx] += v * si2;
        }
        const double w = g[i][q] * gt[q];
        c1[static_cast<std::size_t>(q) * d + i] += w * co1;
        s1[static_cast<std::size_t>(q) * d + i] += w * si1;
      }
    }
  }

  std::vector<PointwiseBlock> blocks(N);
  for (int q = 0; q < N; ++q) {
    PointwiseBlock& blk = blocks[q];
    blk.d = d;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const std::size_t idx = (static_cast<std::size_t>(q) * d + i) * d + j;
        const double f0 = s0[idx];
        const double re2 = c2[idx];
        const double im2 = -s2[idx];
        blk.c[i * n + j] = re2 + f0;            // RR
        blk.c[i * n + (d + j)] = im2;           // RI
        blk.c[(d + i) * n + j] = im2;           // IR
        blk.c[(d + i) * n + (d + j)] = -re2 + f0;  // II
      }
      blk.r[i] = 2.0 * c1[static_cast<std::size_t>(q) * d + i];         // 2 Re Fc1
      blk.r[d + i] = 2.0 * (-s1[static_cast<std::size_t>(q) * d + i]);  // 2 Im Fc1
    }
  }
  return blocks;
}

AmplitudeField harmonic_hs_solve_level(const DerivativeFields& f, const HarmonicParams& h,
                                       double lambda, int iters, AmplitudeField init) {
  if (!(lambda > 0.0)) throw ConfigError("harmonic_hs: lambda must be positive");
  if (iters < 1) throw ConfigError("harmonic_hs: iters >= 1");
  const int d = f.grid.dim;
  const int N = f.grid.pixels();
  const int n = 2 * d;
  const double lt = lambda * h.frames;

  const std::vector<PointwiseBlock> blocks = pointwise_blocks(f, h);
  std::vector<SmallLU> factors(N);
  for (int q = 0; q < N; ++q) {
    std::array<double, 16> A = blocks[q].c;
    for (int i = 0; i < n; ++i) A[i * n + i] += lt;
    factors[q].factor(A, n);
  }

  AmplitudeField a = std::move(init);
  std::vector<double> abar(static_cast<std::size_t>(n) * N);
  for (int it = 0; it < iters; ++it) {
    for (int comp = 0; comp < d; ++comp) {
      neighbor_mean(a.re_plane(comp), abar.data() + static_cast<std::size_t>(comp) * N,
                    f.grid.rows, f.grid.cols);
      neighbor_mean(a.im_plane(comp), abar.data() + static_cast<std::size_t>(d + comp) * N,
                    f.grid.rows, f.grid.cols);
    }
    for (int q = 0; q < N; ++q) {
      double rhs[4], x[4];
      for (int i = 0; i < n; ++i)
        rhs[i] = lt * abar[static_cast<std::size_t>(i) * N + q] - blocks[q].r[i];
      factors[q].solve(rhs, x);
      for (int comp = 0; comp < d; ++comp) {
        a.re_plane(comp)[q] = x[comp];
        a.im_plane(comp)[q] = x[d + comp];
      }
    }
  }
  return a;
}

AmplitudeField harmonic_hs_iterate(const ImageSequence& I, const HarmonicParams& h,
                                   double lambda, int iters, const AmplitudeField* init) {
  I.validate();
  h.validate();
  const DerivativeFields f = plain_derivatives(I);
  AmplitudeField a = init ? *init : AmplitudeField::zeros(I.grid);
  if (!(a.grid == I.grid)) throw DataError("harmonic_hs_iterate: init grid mismatch");
  return harmonic_hs_solve_level(f, h, lambda, iters, std::move(a));
}

VelocityField pairwise_hs(const ImageSequence& I, double lambda, int iters) {
  I.validate();
  if (!(lambda > 0.0)) throw ConfigError("pairwise_hs: lambda must be positive");
  if (iters < 1) throw ConfigError("pairwise_hs: iters >= 1");
  const int d = I.grid.dim;
  const int rows = I.grid.rows, cols = I.grid.cols;
  const int N = I.grid.pixels();
  VelocityField vel = VelocityField::zeros(I.grid, I.frames);

  std::vector<double> avg(N), g[2], it(N), u[2], ubar[2];
  for (int axis = 0; axis < d; ++axis) {
    g[axis].assign(N, 0.0);
    u[axis].assign(N, 0.0);
    ubar[axis].assign(N, 0.0);
  }

  for (int t = 0; t < I.frames; ++t) {
    const double* A = I.frame(t);
    const double* B = I.frame((t + 1) % I.frames);
    for (int q = 0; q < N; ++q) {
      avg[q] = 0.5 * (A[q] + B[q]);
      it[q] = B[q] - A[q];
    }
    for (int axis = 0; axis < d; ++axis) {
      central_derivative(avg.data(), g[axis].data(), rows, cols, axis);
      std::fill(u[axis].begin(), u[axis].end(), 0.0);
    }
    for (int sweep = 0; sweep < iters; ++sweep) {
      for (int axis = 0; axis < d; ++axis)
        neighbor_mean(u[axis].data(), ubar[axis].data(), rows, cols);
      for (int q = 0; q < N; ++q) {
        double num = it[q];
        double den = lambda;
        for (int axis = 0; axis < d; ++axis) {
          num += g[axis][q] * ubar[axis][q];
          den += g[axis][q] * g[axis][q];
        }
        const double common = num / den;
        for (int axis = 0; axis < d; ++axis)
          u[axis][q] = ubar[axis][q] - g[axis][q] * common;
      }
    }
    for (int axis = 0; axis < d; ++axis)
      std::copy(u[axis].begin(), u[axis].end(), vel.plane(t, axis));
  }
  return vel;
}

}  // namespace hof
