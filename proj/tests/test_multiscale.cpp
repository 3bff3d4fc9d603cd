#include <doctest.h>

#include <cmath>

#include "hof/core.hpp"
#include "hof/diffops.hpp"
#include "hof/multiscale.hpp"
#include "test_util.hpp"

using namespace hof;

TEST_CASE("gaussian smoothing reproduces the separable kernel on an impulse") {
  const int rows = 21, cols = 21;
  const double sigma = 1.2;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> in(rows * cols, 0.0), out(rows * cols);
  in[10 * cols + 10] = 1.0;
  gaussian_smooth_plane(in.data(), out.data(), rows, cols, sigma);

  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int r = -radius; r <= radius; ++r) {
    k[r + radius] = std::exp(-0.5 * r * r / (sigma * sigma));
    sum += k[r + radius];
  }
  for (double& v : k) v /= sum;

  double total = 0.0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const int di = i - 10, dj = j - 10;
      const double want = (std::abs(di) <= radius && std::abs(dj) <= radius)
                              ? k[di + radius] * k[dj + radius]
                              : 0.0;
      CHECK(out[i * cols + j] == doctest::Approx(want).epsilon(1e-12));
      total += out[i * cols + j];
    }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));  // kernel mass inside the plane
}

TEST_CASE("renormalized smoothing preserves constants at borders") {
  const int rows = 9, cols = 8;
  std::vector<double> in(rows * cols, 3.25), out(rows * cols);
  gaussian_smooth_plane_renorm(in.data(), out.data(), rows, cols, 2.0);
  for (double v : out) CHECK(v == doctest::Approx(3.25).epsilon(1e-13));
  // Plain zero padding pulls border values down instead.
  gaussian_smooth_plane(in.data(), out.data(), rows, cols, 2.0);
  CHECK(out[0] < 3.25 - 1e-3);
}

TEST_CASE("sigma zero smoothing is the identity") {
  const std::vector<double> in = test::random_vector(30, 2);
  std::vector<double> out(30);
  gaussian_smooth_plane(in.data(), out.data(), 6, 5, 0.0);
  for (int q = 0; q < 30; ++q) CHECK(out[q] == in[q]);
}

TEST_CASE("bicubic sampling is exact on affine planes and at grid points") {
  const int rows = 8, cols = 9;
  std::vector<double> plane(rows * cols);
  for (int k = 0; k < rows; ++k)
    for (int j = 0; j < cols; ++j) plane[k * cols + j] = 1.0 + 0.5 * k - 0.25 * j;
  // Grid points reproduce exactly (Catmull-Rom interpolates).
  for (int k = 0; k < rows; ++k)
    for (int j = 0; j < cols; ++j)
      CHECK(bicubic_sample(plane.data(), rows, cols, k, j) ==
            doctest::Approx(plane[k * cols + j]).epsilon(1e-13));
  // Interior fractional samples reproduce the affine function.
  for (double y : {1.4, 2.75, 5.1})
    for (double x : {1.2, 3.5, 6.9})
      CHECK(bicubic_sample(plane.data(), rows, cols, y, x) ==
            doctest::Approx(1.0 + 0.5 * y - 0.25 * x).epsilon(1e-12));
  // Out-of-range coordinates clamp to the border value.
  CHECK(bicubic_sample(plane.data(), rows, cols, -5.0, 0.0) ==
        doctest::Approx(plane[0]).epsilon(1e-12));
}

TEST_CASE("resample identity and align-corners endpoints") {
  const int rows = 6, cols = 7;
  const std::vector<double> in = test::random_vector(rows * cols, 8);
  std::vector<double> same(rows * cols);
  resample_plane(in.data(), rows, cols, same.data(), rows, cols);
  for (int q = 0; q < rows * cols; ++q) CHECK(same[q] == doctest::Approx(in[q]).epsilon(1e-12));

  std::vector<double> up(11 * 13);
  resample_plane(in.data(), rows, cols, up.data(), 11, 13);
  CHECK(up[0] == doctest::Approx(in[0]).epsilon(1e-12));
  CHECK(up[12] == doctest::Approx(in[cols - 1]).epsilon(1e-12));
  CHECK(up[10 * 13] == doctest::Approx(in[(rows - 1) * cols]).epsilon(1e-12));
  CHECK(up[10 * 13 + 12] == doctest::Approx(in[rows * cols - 1]).epsilon(1e-12));
}

TEST_CASE("pyramid level sizes follow ceil(eta^(L-1-l) n)") {
  const Grid g = Grid::make(40, 33);
  ImageSequence I = ImageSequence::zeros(g, 3);
  I.data = test::random_vector(I.data.size(), 3, 1.0, 2.0);
  const int levels = 4;
  const double eta = 0.7;
  const std::vector<ImageSequence> pyr = build_pyramid(I, levels, eta);
  REQUIRE(pyr.size() == static_cast<std::size_t>(levels));
  for (int l = 0; l < levels; ++l) {
    const double f = std::pow(eta, levels - 1 - l);
    CHECK(pyr[l].grid.rows == static_cast<int>(std::ceil(f * 40)));
    CHECK(pyr[l].grid.cols == static_cast<int>(std::ceil(f * 33)));
  }
  // Finest level is the input itself.
  for (std::size_t i = 0; i < I.data.size(); ++i) CHECK(pyr[levels - 1].data[i] == I.data[i]);
}

TEST_CASE("pyramid floor rejects too-coarse configurations") {
  ImageSequence I = ImageSequence::zeros(Grid::make(20, 20), 2);
  I.data.assign(I.data.size(), 1.0);
  CHECK_THROWS_AS(build_pyramid(I, 6, 0.5), ConfigError);  // ceil(20 * 0.5^5) = 1 < 8
  CHECK_NOTHROW(build_pyramid(I, 2, 0.5));                 // ceil(10) = 10 >= 8
  // levels == 1 never triggers the floor.
  ImageSequence tiny = ImageSequence::zeros(Grid::make(4, 4), 2);
  tiny.data.assign(tiny.data.size(), 1.0);
  CHECK_NOTHROW(build_pyramid(tiny, 1, 0.5));
}

TEST_CASE("amplitude upscaling rescales component values per axis") {
  const Grid src = Grid::make(5, 4);
  const Grid dst = Grid::make(10, 12);
  AmplitudeField a = AmplitudeField::zeros(src);
  // Constant planes: resampling keeps the constant, scaling multiplies it.
  for (int i = 0; i < 2; ++i)
    for (int q = 0; q < src.pixels(); ++q) {
      a.re_plane(i)[q] = 1.0 + i;
      a.im_plane(i)[q] = -0.5 * (1 + i);
    }
  const AmplitudeField u = upscale_amplitude(a, dst);
  const double r0 = 10.0 / 5.0, r1 = 12.0 / 4.0;
  for (int q = 0; q < dst.pixels(); ++q) {
    CHECK(u.re_plane(0)[q] == doctest::Approx(1.0 * r0).epsilon(1e-12));
    CHECK(u.im_plane(0)[q] == doctest::Approx(-0.5 * r0).epsilon(1e-12));
    CHECK(u.re_plane(1)[q] == doctest::Approx(2.0 * r1).epsilon(1e-12));
    CHECK(u.im_plane(1)[q] == doctest::Approx(-1.0 * r1).epsilon(1e-12));
  }
}

TEST_CASE("warping at the true displacement zeroes the linearized residual") {
  // Cyclic row shifts with T == rows keep every pair consistent:
  // I(t+1)(k-1, j) = I(t)(k, j), so the true velocity is v = (-1, 0) and the
  // residual G = grad~ . v + dt~ vanishes wherever no clamping happens.
  const Grid g = Grid::make(12, 11);
  const int T = 12;
  const std::vector<double> base = test::random_vector(g.pixels(), 31, 0.0, 10.0);
  ImageSequence I = ImageSequence::zeros(g, T);
  for (int t = 0; t < T; ++t)
    for (int k = 0; k < g.rows; ++k)
      for (int j = 0; j < g.cols; ++j)
        I.at(t, k, j) = base[((k + t) % g.rows) * g.cols + j];

  VelocityField vt = VelocityField::zeros(g, T);
  for (int t = 0; t < T; ++t)
    for (int q = 0; q < g.pixels(); ++q) vt.plane(t, 0)[q] = -1.0;

  const DerivativeFields f = warp_derivatives(I, vt);
  for (int t = 0; t < T; ++t)
    for (int k = 1; k < g.rows; ++k)  // k = 0 samples at row -1 and clamps
      for (int j = 0; j < g.cols; ++j) {
        const int q = k * g.cols + j;
        const double G = f.dt_plane(t)[q] - f.grad_plane(0, t)[q];
        CHECK(std::abs(G) < 1e-10);
      }
}

TEST_CASE("warp with zero velocity matches plain derivatives except dt linearization") {
  const Grid g = Grid::make(7, 6);
  ImageSequence I = ImageSequence::zeros(g, 3);
  I.data = test::random_vector(I.data.size(), 17, 0.0, 5.0);
  const VelocityField zero = VelocityField::zeros(g, 3);
  const DerivativeFields fw = warp_derivatives(I, zero);
  const DerivativeFields fp = plain_derivatives(I);
  for (int t = 0; t < 3; ++t)
    for (int q = 0; q < g.pixels(); ++q) {
      CHECK(fw.dt_plane(t)[q] == doctest::Approx(fp.dt_plane(t)[q]).epsilon(1e-12));
      // Gradients come from the next frame when warping.
      const int next = (t + 1) % 3;
      CHECK(fw.grad_plane(0, t)[q] ==
            doctest::Approx(fp.grad_plane(0, next)[q]).epsilon(1e-12));
      CHECK(fw.grad_plane(1, t)[q] ==
            doctest::Approx(fp.grad_plane(1, next)[q]).epsilon(1e-12));
    }
}

TEST_CASE("median filter handmade cases") {
  const Grid g = Grid::make(3, 3);
  AmplitudeField a = AmplitudeField::zeros(g);
  const double vals[9] = {5, 1, 7, 2, 9, 3, 8, 4, 6};
  for (int q = 0; q < 9; ++q) {
    a.re_plane(0)[q] = vals[q];
    a.re_plane(1)[q] = -vals[q];
  }
  const AmplitudeField m = median_filter_amplitude(a, 3);
  // Center: median of all nine values = 5.
  CHECK(m.re_plane(0)[4] == doctest::Approx(5.0));
  CHECK(m.re_plane(1)[4] == doctest::Approx(-5.0));
  // Corner (0,0): window {5,1,2,9}, even count -> mean of middles (2,5)/2.
  CHECK(m.re_plane(0)[0] == doctest::Approx(3.5));
  // Edge (0,1): window {5,1,7,2,9,3} -> middles (3,5)/2 = 4.
  CHECK(m.re_plane(0)[1] == doctest::Approx(4.0));
  // window == 1 returns the input unchanged.
  const AmplitudeField same = median_filter_amplitude(a, 1);
  for (int q = 0; q < 9; ++q) CHECK(same.re_plane(0)[q] == vals[q]);
  CHECK_THROWS_AS(median_filter_amplitude(a, 4), ConfigError);
}

TEST_CASE("run_multiscale with one level and no extras equals the direct solve") {
  const test::RenderedInstance inst = test::rendered_instance(14, 15, 8, 1, 0.25, 77);
  SolverConfig cfg;
  cfg.lambda = 0.3;
  cfg.levels = 1;
  cfg.preprocess_sigma = 0.0;
  cfg.median_window = 1;
  cfg.cg_iters = 300;
  cfg.cg_tol = 1e-12;

  const AmplitudeField via_pipeline = run_multiscale(
      inst.clean, inst.h, cfg,
      [](const DerivativeFields& f, const HarmonicParams& hh, const SolverConfig& c,
         AmplitudeField init, int level) {
        return model1_solve_level(f, hh, c, std::move(init), level, nullptr);
      });

  const DerivativeFields f = plain_derivatives(inst.clean);
  const AmplitudeField direct =
      model1_solve_level(f, inst.h, cfg, AmplitudeField::zeros(inst.grid), 0, nullptr);
  for (std::size_t i = 0; i < direct.re.size(); ++i) {
    CHECK(via_pipeline.re[i] == doctest::Approx(direct.re[i]).epsilon(1e-12));
    CHECK(via_pipeline.im[i] == doctest::Approx(direct.im[i]).epsilon(1e-12));
  }
}

TEST_CASE("multiscale improves on a single level for larger motions") {
  const test::RenderedInstance inst = test::rendered_instance(32, 34, 16, 2, 2.2, 55);
  SolverConfig cfg;
  cfg.lambda = 50.0;
  cfg.levels = 3;
  cfg.eta = 0.8;
  cfg.cg_iters = 300;
  cfg.median_window = 1;

  auto solver = [](const DerivativeFields& f, const HarmonicParams& hh, const SolverConfig& c,
                   AmplitudeField init, int level) {
    return model1_solve_level(f, hh, c, std::move(init), level, nullptr);
  };
  const AmplitudeField multi = run_multiscale(inst.clean, inst.h, cfg, solver);
  SolverConfig single = cfg;
  single.levels = 1;
  const AmplitudeField one = run_multiscale(inst.clean, inst.h, single, solver);

  auto err = [&](const AmplitudeField& a) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.re.size(); ++i) {
      num += (a.re[i] - inst.truth.re[i]) * (a.re[i] - inst.truth.re[i]) +
             (a.im[i] - inst.truth.im[i]) * (a.im[i] - inst.truth.im[i]);
      den += inst.truth.re[i] * inst.truth.re[i] + inst.truth.im[i] * inst.truth.im[i];
    }
    return num / den;
  };
  CHECK(err(multi) < err(one));
}
