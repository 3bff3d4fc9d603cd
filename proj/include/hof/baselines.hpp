#pragma once

// Reference solvers the variational models are compared against:
//  - a pointwise fixed-point iteration for the harmonic system, where the
//    Laplacian is the 4-neighbor mean (Delta a ~= abar - a), solved per pixel
//    by a 2d x 2d block inverse;
//  - classical pairwise Horn-Schunck on consecutive frame pairs, with the
//    amplitude extracted afterwards from the temporal DFT of the flow.

#include "hof/model1.hpp"

namespace hof {

// Per-pixel data block in the continuous-FT convention F_c = T * F_d:
//   C(x) = [[Re Fc2 + Fc0, Im Fc2], [Im Fc2, -Re Fc2 + Fc0]] (d x d blocks)
//   r(x) = 2 * (Re Fc1; Im Fc1) of dt I grad I at omega.
// Matrices are stored row-major at size 2d x 2d.
struct PointwiseBlock {
  int d = 0;
  std::array<double, 16> c{};
  std::array<double, 4> r{};
};

std::vector<PointwiseBlock> pointwise_blocks(const DerivativeFields& f, const HarmonicParams& h);

// Fixed-point sweeps a^{k+1}(x) = [C(x) + lambda T I]^{-1} (lambda T abar^k(x) - r(x)),
// abar = mean over available 4-neighbors. init == nullptr starts from zero.
AmplitudeField harmonic_hs_iterate(const ImageSequence& I, const HarmonicParams& h, double lambda,
                                   int iters, const AmplitudeField* init = nullptr);

// Same sweeps on prebuilt fields (pipeline adapter / tests).
AmplitudeField harmonic_hs_solve_level(const DerivativeFields& f, const HarmonicParams& h,
                                       double lambda, int iters, AmplitudeField init);

// Classical Horn-Schunck flow for every cyclic pair (t, t+1 mod T).
VelocityField pairwise_hs(const ImageSequence& I, double lambda, int iters);

}  // namespace hof
