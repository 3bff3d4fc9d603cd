#include <doctest.h>

#include <cmath>

#include "hof/metrics.hpp"
#include "test_util.hpp"

using namespace hof;

TEST_CASE("relative error uses the squared-norm ratio") {
  const Grid g = Grid::make(5, 6);
  const AmplitudeField truth = test::random_amplitude(g, 2);
  CHECK(relative_error(truth, truth) == doctest::Approx(0.0));

  AmplitudeField doubled = truth;
  for (double& v : doubled.re) v *= 2.0;
  for (double& v : doubled.im) v *= 2.0;
  // est - truth = truth, so the squared ratio is exactly 1.
  CHECK(relative_error(doubled, truth) == doctest::Approx(1.0).epsilon(1e-12));

  AmplitudeField tripled = truth;
  for (double& v : tripled.re) v *= 3.0;
  for (double& v : tripled.im) v *= 3.0;
  CHECK(relative_error(tripled, truth) == doctest::Approx(4.0).epsilon(1e-12));

  const AmplitudeField zero = AmplitudeField::zeros(g);
  CHECK_THROWS_AS(relative_error(truth, zero), DataError);
  const AmplitudeField other = test::random_amplitude(Grid::make(4, 4), 1);
  CHECK_THROWS_AS(relative_error(other, truth), DataError);
}

TEST_CASE("relative image error") {
  const Grid g = Grid::make(4, 7);
  ImageSequence ref = ImageSequence::zeros(g, 3);
  ref.data = test::random_vector(ref.data.size(), 9, 1.0, 5.0);
  CHECK(relative_image_error(ref, ref) == doctest::Approx(0.0));
  ImageSequence cand = ref;
  for (double& v : cand.data) v *= 1.5;
  CHECK(relative_image_error(cand, ref) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("ssim basics") {
  const int rows = 24, cols = 25;
  const std::vector<double> a = test::random_vector(rows * cols, 31, 0.0, 100.0);
  CHECK(ssim(a.data(), a.data(), rows, cols) == doctest::Approx(1.0).epsilon(1e-12));

  // Symmetry (the window and the joint range treat both inputs alike).
  const std::vector<double> b = test::random_vector(rows * cols, 32, 0.0, 100.0);
  CHECK(ssim(a.data(), b.data(), rows, cols) ==
        doctest::Approx(ssim(b.data(), a.data(), rows, cols)).epsilon(1e-12));
  CHECK(ssim(a.data(), b.data(), rows, cols) < 0.9);

  // Two identical constants: defined as 1 even though the range is empty.
  const std::vector<double> c1(rows * cols, 4.0);
  CHECK(ssim(c1.data(), c1.data(), rows, cols) == 1.0);

  // A smooth intensity shift degrades SSIM only mildly; gross distortion more.
  std::vector<double> shifted = a;
  for (double& v : shifted) v += 5.0;
  std::vector<double> scrambled(a.rbegin(), a.rend());
  CHECK(ssim(a.data(), shifted.data(), rows, cols) >
        ssim(a.data(), scrambled.data(), rows, cols));
}

TEST_CASE("issim averages per-frame ssim") {
  const Grid g = Grid::make(14, 15);
  ImageSequence A = ImageSequence::zeros(g, 3);
  ImageSequence B = ImageSequence::zeros(g, 3);
  A.data = test::random_vector(A.data.size(), 71, 0.0, 50.0);
  B.data = test::random_vector(B.data.size(), 72, 0.0, 50.0);
  double mean = 0.0;
  for (int t = 0; t < 3; ++t) mean += ssim(A.frame(t), B.frame(t), g.rows, g.cols);
  mean /= 3.0;
  CHECK(issim(A, B) == doctest::Approx(mean).epsilon(1e-13));
  ImageSequence C = ImageSequence::zeros(g, 2);
  C.data.assign(C.data.size(), 1.0);
  CHECK_THROWS_AS(issim(A, C), DataError);
}
