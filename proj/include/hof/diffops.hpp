#pragma once

// Discrete derivative operators on image planes.
//
// Central derivatives use the smoothing-stencil kernel
//   h_c = (1/8) [[-1,-2,-1],[0,0,0],[1,2,1]]        (axis 0, rows)
// and its transpose for axis 1, applied as correlation with zero padding:
//   (I * h)(k,j) = sum_{p,q} I(k+p, j+q) h(p,q).
// 1D planes (cols == 1) use the 1D kernel (-1/2, 0, 1/2).
//
// Forward differences D f(k) = f(k+1) - f(k) are zero-padded so that the
// last entry is -f(n-1); this keeps D injective and the normal matrix SPD.
// The adjoint satisfies <D f, g> = <f, D^T g> exactly.

#include <array>

#include "hof/types.hpp"

namespace hof {

// 3x3 (or 3x1) correlation kernel, taps indexed by offsets -1..1.
struct Kernel2D {
  int radius_rows = 0, radius_cols = 0;
  std::array<double, 9> taps{};  // taps[(p+1)*3 + (q+1)]

  double tap(int p, int q) const { return taps[(p + 1) * 3 + (q + 1)]; }
};

// Central-derivative kernel along `axis` for planes of spatial dim `dim`.
Kernel2D central_kernel(int axis, int dim);

// out(k,j) = sum I(k+p, j+q) kernel(p,q), zero padding outside the plane.
void correlate(const double* plane, double* out, int rows, int cols, const Kernel2D& k);

// Central derivative of one plane along `axis` (0 = rows, 1 = cols).
void central_derivative(const double* plane, double* out, int rows, int cols, int axis);

// Forward difference along `axis`, zero-padded (last slice gets -f).
void forward_diff(const double* plane, double* out, int rows, int cols, int axis);

// Adjoint of forward_diff: (D^T g)(k) = g(k-1) - g(k) with g(-1) = 0.
void forward_diff_adjoint(const double* plane, double* out, int rows, int cols, int axis);

// Per-frame spatial gradient stack; grad[axis] has frames * pixels entries.
struct GradientStack {
  Grid grid;
  int frames = 0;
  std::array<std::vector<double>, 2> grad;

  double* plane(int axis, int t) {
    return grad[axis].data() + static_cast<std::size_t>(t) * grid.pixels();
  }
  const double* plane(int axis, int t) const {
    return grad[axis].data() + static_cast<std::size_t>(t) * grid.pixels();
  }
};

GradientStack central_gradient(const ImageSequence& I);

// Cyclic temporal difference D_t I(t,x) = I(t+1 mod T, x) - I(t, x).
ImageSequence temporal_diff(const ImageSequence& I);

}  // namespace hof
