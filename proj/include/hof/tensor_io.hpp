#pragma once

// Binary tensor container and small writers used by the CLI.
//
// TensorFile layout (little endian):
//   magic "HOF1" | u32 version (1) | u32 dtype (1 = f64) | u32 rank |
//   u64 dims[rank] | payload (row-major f64)
// Image sequences are rank 3 (frames, n1, n2); amplitudes are rank 4
// (2, dim, n1, n2) with axis 0 = (re, im); velocities are rank 4
// (frames, dim, n1, n2).

#include <cstdint>
#include <string>

#include "hof/types.hpp"

namespace hof {

struct Tensor {
  std::vector<std::uint64_t> dims;
  std::vector<double> data;
};

void write_tensor(const std::string& path, const Tensor& t);
Tensor read_tensor(const std::string& path);  // throws DataError on malformed files

void write_image_sequence(const std::string& path, const ImageSequence& I);
ImageSequence read_image_sequence(const std::string& path);

void write_amplitude(const std::string& path, const AmplitudeField& a);
AmplitudeField read_amplitude(const std::string& path);

void write_velocity(const std::string& path, const VelocityField& v);

// 8-bit binary PGM, plane affinely mapped from [lo, hi] to [0, 255].
// Returns the (lo, hi) actually used (min/max of the plane; equal values
// map to 0).
std::pair<double, double> write_pgm(const std::string& path, const double* plane, int rows,
                                    int cols);

}  // namespace hof
