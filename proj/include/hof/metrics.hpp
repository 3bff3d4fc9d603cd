#pragma once

// Reconstruction quality measures: squared relative amplitude error, squared
// relative image error, single-plane SSIM and its mean over frames.

#include "hof/types.hpp"

namespace hof {

// sum_j ||est_j - truth_j||^2 / sum_j ||truth_j||^2 over all component
// planes (real and imaginary parts together).
double relative_error(const AmplitudeField& est, const AmplitudeField& truth);

// sum_t ||cand(t) - ref(t)||^2 / sum_t ||ref(t)||^2.
double relative_image_error(const ImageSequence& cand, const ImageSequence& ref);

// Mean local SSIM with an 11x11 Gaussian window (sigma 1.5),
// C1 = (0.01 L)^2, C2 = (0.03 L)^2, L = joint value range of both planes.
// Returns 1 for two identical constant planes.
double ssim(const double* a, const double* b, int rows, int cols);

// Mean SSIM over frames.
double issim(const ImageSequence& a, const ImageSequence& b);

}  // namespace hof
