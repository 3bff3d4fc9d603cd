#include <doctest.h>

#include <cmath>
#include <complex>

#include "hof/baselines.hpp"
#include "hof/core.hpp"
#include "hof/diffops.hpp"
#include "hof/metrics.hpp"
#include "test_util.hpp"

using namespace hof;

TEST_CASE("pointwise blocks match a complex-exponential reference") {
  const Grid g = Grid::make(4, 3);
  const HarmonicParams h = HarmonicParams::from_periods(1, 7);
  const DerivativeFields f = test::random_fields(g, h.frames, 61);
  const std::vector<PointwiseBlock> blocks = pointwise_blocks(f, h);
  REQUIRE(blocks.size() == static_cast<std::size_t>(g.pixels()));

  const int d = g.dim, n = 2 * d;
  for (int q = 0; q < g.pixels(); ++q) {
    for (int i = 0; i < d; ++i) {
      std::complex<double> fc1{0.0, 0.0};
      for (int j = 0; j < d; ++j) {
        std::complex<double> fc0{0.0, 0.0}, fc2{0.0, 0.0};
        for (int t = 0; t < h.frames; ++t) {
          const double gg = f.grad_plane(i, t)[q] * f.grad_plane(j, t)[q];
          fc0 += gg;
          fc2 += gg * std::exp(std::complex<double>(0.0, -2.0 * t * h.omega));
        }
        CHECK(blocks[q].c[i * n + j] ==
              doctest::Approx(fc2.real() + fc0.real()).epsilon(1e-12));
        CHECK(blocks[q].c[i * n + (d + j)] == doctest::Approx(fc2.imag()).epsilon(1e-12));
        CHECK(blocks[q].c[(d + i) * n + j] == doctest::Approx(fc2.imag()).epsilon(1e-12));
        CHECK(blocks[q].c[(d + i) * n + (d + j)] ==
              doctest::Approx(-fc2.real() + fc0.real()).epsilon(1e-12));
      }
      for (int t = 0; t < h.frames; ++t)
        fc1 += f.grad_plane(i, t)[q] * f.dt_plane(t)[q] *
               std::exp(std::complex<double>(0.0, -t * h.omega));
      CHECK(blocks[q].r[i] == doctest::Approx(2.0 * fc1.real()).epsilon(1e-12));
      CHECK(blocks[q].r[d + i] == doctest::Approx(2.0 * fc1.imag()).epsilon(1e-12));
    }
  }
}

TEST_CASE("harmonic hs sweeps approach the fixed point") {
  const test::RenderedInstance inst = test::rendered_instance(16, 17, 10, 1, 0.25, 41);
  const DerivativeFields f = plain_derivatives(inst.clean);
  const double lambda = 0.5;

  const AmplitudeField a =
      harmonic_hs_solve_level(f, inst.h, lambda, 400, AmplitudeField::zeros(inst.grid));
  // One more sweep barely moves the iterate.
  const AmplitudeField b = harmonic_hs_solve_level(f, inst.h, lambda, 1, a);
  double delta = 0.0, scale = 1e-30;
  for (std::size_t i = 0; i < a.re.size(); ++i) {
    delta = std::max({delta, std::abs(a.re[i] - b.re[i]), std::abs(a.im[i] - b.im[i])});
    scale = std::max({scale, std::abs(a.re[i]), std::abs(a.im[i])});
  }
  CHECK(delta < 1e-6 * scale);
}

TEST_CASE("harmonic hs recovers a small harmonic motion") {
  const test::RenderedInstance inst = test::rendered_instance(24, 25, 12, 1, 0.3, 43);
  const AmplitudeField a = harmonic_hs_iterate(inst.clean, inst.h, 10.0, 1200);
  CHECK(relative_error(a, inst.truth) < 0.5);
}

TEST_CASE("pairwise hs plus temporal dft recovers a small harmonic motion") {
  const test::RenderedInstance inst = test::rendered_instance(24, 25, 12, 1, 0.3, 47);
  const VelocityField vel = pairwise_hs(inst.clean, 0.5, 300);
  const AmplitudeField a = amplitude_from_velocity(vel, inst.h);
  CHECK(relative_error(a, inst.truth) < 0.5);
}

TEST_CASE("pairwise hs satisfies its fixed-point equation") {
  const test::RenderedInstance inst = test::rendered_instance(12, 13, 6, 1, 0.2, 53);
  const double lambda = 1.0;
  const VelocityField vel = pairwise_hs(inst.clean, lambda, 2000);

  // Recompute the first pair's quantities and check
  // (lambda + g g^T) u = lambda ubar - g It at every pixel.
  const Grid g = inst.grid;
  const int N = g.pixels();
  std::vector<double> avg(N), it(N), g0(N), g1(N);
  for (int q = 0; q < N; ++q) {
    avg[q] = 0.5 * (inst.clean.frame(0)[q] + inst.clean.frame(1)[q]);
    it[q] = inst.clean.frame(1)[q] - inst.clean.frame(0)[q];
  }
  central_derivative(avg.data(), g0.data(), g.rows, g.cols, 0);
  central_derivative(avg.data(), g1.data(), g.rows, g.cols, 1);
  std::vector<double> ub0(N), ub1(N);
  auto nmean = [&](const double* in, double* out) {
    for (int k = 0; k < g.rows; ++k)
      for (int j = 0; j < g.cols; ++j) {
        double acc = 0.0;
        int cnt = 0;
        if (k > 0) { acc += in[(k - 1) * g.cols + j]; ++cnt; }
        if (k + 1 < g.rows) { acc += in[(k + 1) * g.cols + j]; ++cnt; }
        if (j > 0) { acc += in[k * g.cols + j - 1]; ++cnt; }
        if (j + 1 < g.cols) { acc += in[k * g.cols + j + 1]; ++cnt; }
        out[k * g.cols + j] = cnt ? acc / cnt : in[k * g.cols + j];
      }
  };
  nmean(vel.plane(0, 0), ub0.data());
  nmean(vel.plane(0, 1), ub1.data());
  double worst = 0.0;
  for (int q = 0; q < N; ++q) {
    const double gu = g0[q] * vel.plane(0, 0)[q] + g1[q] * vel.plane(0, 1)[q];
    const double r0 =
        lambda * vel.plane(0, 0)[q] + g0[q] * gu - (lambda * ub0[q] - g0[q] * it[q]);
    const double r1 =
        lambda * vel.plane(0, 1)[q] + g1[q] * gu - (lambda * ub1[q] - g1[q] * it[q]);
    worst = std::max({worst, std::abs(r0), std::abs(r1)});
  }
  double scale = 1e-30;
  for (int q = 0; q < N; ++q)
    scale = std::max({scale, std::abs(vel.plane(0, 0)[q]), std::abs(vel.plane(0, 1)[q])});
  CHECK(worst < 1e-6 * std::max(1.0, lambda) * std::max(scale, 1.0) * 100.0);
}

TEST_CASE("baseline input validation") {
  const test::RenderedInstance inst = test::rendered_instance(10, 10, 6, 1, 0.1, 3);
  CHECK_THROWS_AS(harmonic_hs_iterate(inst.clean, inst.h, 0.0, 10), ConfigError);
  CHECK_THROWS_AS(harmonic_hs_iterate(inst.clean, inst.h, 1.0, 0), ConfigError);
  CHECK_THROWS_AS(pairwise_hs(inst.clean, -1.0, 10), ConfigError);
  CHECK_THROWS_AS(pairwise_hs(inst.clean, 1.0, 0), ConfigError);
}
