#include "hof/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "hof/multiscale.hpp"

namespace hof {

double relative_error(const AmplitudeField& est, const AmplitudeField& truth) {
  est.validate();
  truth.validate();
  if (!(est.grid == truth.grid)) throw DataError("relative_error: grid mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < truth.re.size(); ++i) {
    const double dr = est.re[i] - truth.re[i];
    const double di = est.im[i] - truth.im[i];
    num += dr * dr + di * di;
    den += truth.re[i] * truth.re[i] + truth.im[i] * truth.im[i];
  }
  if (den == 0.0) throw DataError("relative_error: reference amplitude is zero");
  return num / den;
}

double relative_image_error(const ImageSequence& cand, const ImageSequence& ref) {
  cand.validate();
  ref.validate();
  if (!(cand.grid == ref.grid) || cand.frames != ref.frames)
    throw DataError("relative_image_error: shape mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.data.size(); ++i) {
    const double d = cand.data[i] - ref.data[i];
    num += d * d;
    den += ref.data[i] * ref.data[i];
  }
  if (den == 0.0) throw DataError("relative_image_error: reference sequence is zero");
  return num / den;
}

double ssim(const double* a, const double* b, int rows, int cols) {
  const int N = rows * cols;
  double lo = a[0], hi = a[0];
  for (int q = 0; q < N; ++q) {
    lo = std::min({lo, a[q], b[q]});
    hi = std::max({hi, a[q], b[q]});
  }
  const double L = hi - lo;
  if (L == 0.0) return 1.0;  // every sample of both planes is the same value

  const double C1 = (0.01 * L) * (0.01 * L);
  const double C2 = (0.03 * L) * (0.03 * L);
  const double sigma = 1.5;

  std::vector<double> aa(N), bb(N), ab(N);
  for (int q = 0; q < N; ++q) {
    aa[q] = a[q] * a[q];
    bb[q] = b[q] * b[q];
    ab[q] = a[q] * b[q];
  }
  std::vector<double> mua(N), mub(N), saa(N), sbb(N), sab(N);
  gaussian_smooth_plane_renorm(a, mua.data(), rows, cols, sigma);
  gaussian_smooth_plane_renorm(b, mub.data(), rows, cols, sigma);
  gaussian_smooth_plane_renorm(aa.data(), saa.data(), rows, cols, sigma);
  gaussian_smooth_plane_renorm(bb.data(), sbb.data(), rows, cols, sigma);
  gaussian_smooth_plane_renorm(ab.data(), sab.data(), rows, cols, sigma);

  double acc = 0.0;
  for (int q = 0; q < N; ++q) {
    const double va = saa[q] - mua[q] * mua[q];
    const double vb = sbb[q] - mub[q] * mub[q];
    const double cov = sab[q] - mua[q] * mub[q];
    const double num = (2.0 * mua[q] * mub[q] + C1) * (2.0 * cov + C2);
    const double den = (mua[q] * mua[q] + mub[q] * mub[q] + C1) * (va + vb + C2);
    acc += num / den;
  }
  return acc / N;
}

double issim(const ImageSequence& a, const ImageSequence& b) {
  a.validate();
  b.validate();
  if (!(a.grid == b.grid) || a.frames != b.frames) throw DataError("issim: shape mismatch");
  double acc = 0.0;
  for (int t = 0; t < a.frames; ++t)
    acc += ssim(a.frame(t), b.frame(t), a.grid.rows, a.grid.cols);
  return acc / a.frames;
}

}  // namespace hof
