#include "hof/diffops.hpp"

#include "hof/parallel.hpp"

namespace hof {

Kernel2D central_kernel(int axis, int dim) {
  if (axis < 0 || axis >= dim) throw ConfigError("central_kernel: axis out of range");
  Kernel2D k;
  if (dim == 1) {
    // 1D stencil (-1/2, 0, 1/2) along rows.
    k.radius_rows = 1;
    k.radius_cols = 0;
    k.taps[(0) * 3 + 1] = -0.5;  // p = -1
    k.taps[(2) * 3 + 1] = 0.5;   // p = +1
    return k;
  }
  // Smoothing-weighted central difference, (1/8) [[-1,-2,-1],[0,0,0],[1,2,1]]
  // differentiating along rows; transpose for columns.
  k.radius_rows = 1;
  k.radius_cols = 1;
  const double w[3] = {1.0 / 8.0, 2.0 / 8.0, 1.0 / 8.0};
  for (int q = -1; q <= 1; ++q) {
    if (axis == 0) {
      k.taps[(0) * 3 + (q + 1)] = -w[q + 1];
      k.taps[(2) * 3 + (q + 1)] = w[q + 1];
    } else {
      k.taps[(q + 1) * 3 + 0] = -w[q + 1];
      k.taps[(q + 1) * 3 + 2] = w[q + 1];
    }
  }
  return k;
}

void correlate(const double* plane, double* out, int rows, int cols, const Kernel2D& k) {
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      double acc = 0.0;
      for (int p = -k.radius_rows; p <= k.radius_rows; ++p) {
        const int ii = i + p;
        if (ii < 0 || ii >= rows) continue;  // zero padding
        for (int q = -k.radius_cols; q <= k.radius_cols; ++q) {
          const int jj = j + q;
          if (jj < 0 || jj >= cols) continue;
          const double tap = k.tap(p, q);
          if (tap != 0.0) acc += plane[ii * cols + jj] * tap;
        }
      }
      out[i * cols + j] = acc;
    }
  }
}

void central_derivative(const double* plane, double* out, int rows, int cols, int axis) {
  correlate(plane, out, rows, cols, central_kernel(axis, cols == 1 ? 1 : 2));
}

void forward_diff(const double* plane, double* out, int rows, int cols, int axis) {
  if (axis == 0) {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        out[i * cols + j] =
            (i + 1 < rows ? plane[(i + 1) * cols + j] : 0.0) - plane[i * cols + j];
  } else {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        out[i * cols + j] = (j + 1 < cols ? plane[i * cols + j + 1] : 0.0) - plane[i * cols + j];
  }
}

void forward_diff_adjoint(const double* plane, double* out, int rows, int cols, int axis) {
  if (axis == 0) {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        out[i * cols + j] = (i > 0 ? plane[(i - 1) * cols + j] : 0.0) - plane[i * cols + j];
  } else {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        out[i * cols + j] = (j > 0 ? plane[i * cols + j - 1] : 0.0) - plane[i * cols + j];
  }
}

GradientStack central_gradient(const ImageSequence& I) {
  I.validate();
  GradientStack g;
  g.grid = I.grid;
  g.frames = I.frames;
  const std::size_t sz = static_cast<std::size_t>(I.frames) * I.grid.pixels();
  for (int axis = 0; axis < I.grid.dim; ++axis) g.grad[axis].assign(sz, 0.0);
  parallel_for(I.frames, [&](std::size_t t) {
    for (int axis = 0; axis < I.grid.dim; ++axis)
      central_derivative(I.frame(static_cast<int>(t)), g.plane(axis, static_cast<int>(t)),
                         I.grid.rows, I.grid.cols, axis);
  });
  return g;
}

ImageSequence temporal_diff(const ImageSequence& I) {
  I.validate();
  ImageSequence d = ImageSequence::zeros(I.grid, I.frames);
  const int N = I.grid.pixels();
  for (int t = 0; t < I.frames; ++t) {
    const double* cur = I.frame(t);
    const double* nxt = I.frame((t + 1) % I.frames);
    double* out = d.frame(t);
    for (int x = 0; x < N; ++x) out[x] = nxt[x] - cur[x];
  }
  return d;
}

}  // namespace hof
