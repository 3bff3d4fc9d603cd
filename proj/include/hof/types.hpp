#pragma once

// Core domain types for time-harmonic optical flow reconstruction:
// pixel grids, image stacks, complex amplitude fields, solver settings
// and the error taxonomy used by the CLI exit codes.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hof {

// Bad user-supplied configuration (CLI exit 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (CLI exit 3).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Numerical failure inside a solver (CLI exit 4).
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Pixel grid. cols == 1 encodes the 1D case (dim == 1); otherwise dim == 2.
// Component/axis 0 runs along rows (n1), component/axis 1 along columns (n2).
struct Grid {
  int rows = 0;
  int cols = 0;
  int dim = 0;

  static Grid make(int rows, int cols) {
    if (rows < 1 || cols < 1)
      throw ConfigError("Grid: sizes must be positive, got " + std::to_string(rows) + "x" +
                        std::to_string(cols));
    return Grid{rows, cols, cols == 1 ? 1 : 2};
  }

  int pixels() const { return rows * cols; }
  bool operator==(const Grid&) const = default;
};

// Angular frequency omega with the number of observed periods p over T frames.
// Invariant: T * omega == 2*pi*p (full periods observed).
struct HarmonicParams {
  double omega = 0.0;
  int periods = 0;
  int frames = 0;

  static HarmonicParams from_periods(int periods, int frames) {
    if (periods < 1 || frames < 2)
      throw ConfigError("HarmonicParams: need periods >= 1 and frames >= 2");
    HarmonicParams h;
    h.periods = periods;
    h.frames = frames;
    h.omega = 2.0 * M_PI * static_cast<double>(periods) / static_cast<double>(frames);
    h.validate();
    return h;
  }

  void validate() const {
    if (periods < 1 || frames < 2 || !(omega > 0.0))
      throw ConfigError("HarmonicParams: invalid omega/periods/frames");
    const double expect = 2.0 * M_PI * periods;
    if (std::abs(frames * omega - expect) > 1e-9 * expect)
      throw ConfigError("HarmonicParams: T*omega != 2*pi*p (non-integer period count)");
    // At exactly two samples per period sin(t*omega) == 0 for all t and the
    // imaginary part becomes unobservable; the assembly identities assume
    // omega and 2*omega avoid multiples of 2*pi.
    if (frames <= 2 * periods)
      throw ConfigError("HarmonicParams: need more than two samples per period");
  }
};

// Scalar image sequence I(t, k, j), t in [0, frames), row-major per frame.
struct ImageSequence {
  Grid grid;
  int frames = 0;
  std::vector<double> data;

  static ImageSequence zeros(Grid g, int frames) {
    ImageSequence s;
    s.grid = g;
    s.frames = frames;
    s.data.assign(static_cast<std::size_t>(frames) * g.pixels(), 0.0);
    return s;
  }

  double* frame(int t) { return data.data() + static_cast<std::size_t>(t) * grid.pixels(); }
  const double* frame(int t) const {
    return data.data() + static_cast<std::size_t>(t) * grid.pixels();
  }
  double& at(int t, int k, int j) { return frame(t)[k * grid.cols + j]; }
  double at(int t, int k, int j) const { return frame(t)[k * grid.cols + j]; }

  void validate() const {
    if (frames < 1 || grid.pixels() < 1 ||
        data.size() != static_cast<std::size_t>(frames) * grid.pixels())
      throw DataError("ImageSequence: shape/storage mismatch");
    for (double v : data)
      if (!std::isfinite(v)) throw DataError("ImageSequence: non-finite sample");
  }
};

// Complex amplitude a(x) with dim components; re/im hold dim planes each,
// plane i at offset i * pixels, row-major.
struct AmplitudeField {
  Grid grid;
  std::vector<double> re, im;

  static AmplitudeField zeros(Grid g) {
    AmplitudeField a;
    a.grid = g;
    a.re.assign(static_cast<std::size_t>(g.dim) * g.pixels(), 0.0);
    a.im.assign(static_cast<std::size_t>(g.dim) * g.pixels(), 0.0);
    return a;
  }

  double* re_plane(int i) { return re.data() + static_cast<std::size_t>(i) * grid.pixels(); }
  const double* re_plane(int i) const {
    return re.data() + static_cast<std::size_t>(i) * grid.pixels();
  }
  double* im_plane(int i) { return im.data() + static_cast<std::size_t>(i) * grid.pixels(); }
  const double* im_plane(int i) const {
    return im.data() + static_cast<std::size_t>(i) * grid.pixels();
  }

  void validate() const {
    const std::size_t want = static_cast<std::size_t>(grid.dim) * grid.pixels();
    if (grid.pixels() < 1 || re.size() != want || im.size() != want)
      throw DataError("AmplitudeField: shape/storage mismatch");
  }
};

// Real velocity field v(t, x) with dim components, layout (t, comp, k, j).
struct VelocityField {
  Grid grid;
  int frames = 0;
  std::vector<double> data;

  static VelocityField zeros(Grid g, int frames) {
    VelocityField v;
    v.grid = g;
    v.frames = frames;
    v.data.assign(static_cast<std::size_t>(frames) * g.dim * g.pixels(), 0.0);
    return v;
  }

  double* plane(int t, int comp) {
    return data.data() + (static_cast<std::size_t>(t) * grid.dim + comp) * grid.pixels();
  }
  const double* plane(int t, int comp) const {
    return data.data() + (static_cast<std::size_t>(t) * grid.dim + comp) * grid.pixels();
  }
  double& at(int t, int comp, int k, int j) { return plane(t, comp)[k * grid.cols + j]; }
  double at(int t, int comp, int k, int j) const { return plane(t, comp)[k * grid.cols + j]; }
};

// Settings shared by all reconstruction drivers. median_window == 1 disables
// the median pass; warps counts warp passes per level above the coarsest.
struct SolverConfig {
  double lambda = 1.0;
  double eps0 = 1.0;
  double delta0 = 1.0;
  int irls_iters = 5;
  int cg_iters = 50;
  double cg_tol = 1e-10;
  int levels = 2;
  double eta = 0.8;
  double preprocess_sigma = 0.65;
  int median_window = 5;
  int warps = 1;
  bool unit_weights = false;  // debug: freeze IRLS weights at their unit values

  void validate() const {
    if (!(lambda > 0.0)) throw ConfigError("SolverConfig: lambda must be positive");
    if (!(eps0 > 0.0) || !(delta0 > 0.0))
      throw ConfigError("SolverConfig: eps0/delta0 must be positive");
    if (irls_iters < 1 || cg_iters < 1) throw ConfigError("SolverConfig: iteration counts >= 1");
    if (!(cg_tol > 0.0)) throw ConfigError("SolverConfig: cg_tol must be positive");
    if (levels < 1) throw ConfigError("SolverConfig: levels >= 1");
    if (!(eta > 0.0) || !(eta < 1.0)) throw ConfigError("SolverConfig: eta in (0,1)");
    if (preprocess_sigma < 0.0) throw ConfigError("SolverConfig: preprocess_sigma >= 0");
    if (median_window < 1 || median_window % 2 == 0)
      throw ConfigError("SolverConfig: median_window must be odd and >= 1");
    if (warps < 0) throw ConfigError("SolverConfig: warps >= 0");
  }
};

}  // namespace hof
