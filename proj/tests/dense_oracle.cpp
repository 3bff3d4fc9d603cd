#include "dense_oracle.hpp"

#include <cmath>

#include "hof/diffops.hpp"

namespace hof::test {

namespace {

// Dense forward-difference matrix along `axis` (zero padding: the row for
// the last slice keeps only the -1 diagonal entry).
Eigen::MatrixXd diff_matrix(const Grid& g, int axis) {
  const int N = g.pixels();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N, N);
  for (int k = 0; k < g.rows; ++k) {
    for (int j = 0; j < g.cols; ++j) {
      const int q = k * g.cols + j;
      D(q, q) = -1.0;
      if (axis == 0) {
        if (k + 1 < g.rows) D(q, (k + 1) * g.cols + j) = 1.0;
      } else {
        if (j + 1 < g.cols) D(q, k * g.cols + j + 1) = 1.0;
      }
    }
  }
  return D;
}

}  // namespace

DenseSystem dense_assemble(const DerivativeFields& f, const HarmonicParams& h, double lambda,
                           const std::vector<double>& wd, const std::vector<double>& wr,
                           double wr_const) {
  const int d = f.grid.dim;
  const int N = f.grid.pixels();
  const int T = h.frames;
  const int n = 2 * d * N;

  DenseSystem S;
  S.C = Eigen::MatrixXd::Zero(n, n);
  S.b = Eigen::VectorXd::Zero(n);

  // Data term: each (t, x) contributes w m m^T and w y m, where the sparse
  // row m has g_i cos at the a_R planes and -g_i sin at the a_I planes.
  for (int t = 0; t < T; ++t) {
    const double c = std::cos(t * h.omega), s = std::sin(t * h.omega);
    const double* gt = f.dt_plane(t);
    for (int q = 0; q < N; ++q) {
      const double w = wd.empty() ? 1.0 : wd[static_cast<std::size_t>(t) * N + q];
      Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < d; ++i) {
        m(i * N + q) = f.grad_plane(i, t)[q] * c;
        m((d + i) * N + q) = -f.grad_plane(i, t)[q] * s;
      }
      S.C += w * m * m.transpose();
      S.b += w * (-gt[q]) * m;
    }
  }

  // Regularizer: rows c D_ax a_R,i - s D_ax a_I,i per (t, axis, comp, x).
  for (int axis = 0; axis < d; ++axis) {
    const Eigen::MatrixXd D = diff_matrix(f.grid, axis);
    for (int t = 0; t < T; ++t) {
      const double c = std::cos(t * h.omega), s = std::sin(t * h.omega);
      Eigen::MatrixXd W = Eigen::MatrixXd::Zero(N, N);
      for (int q = 0; q < N; ++q)
        W(q, q) = wr.empty() ? wr_const : wr[static_cast<std::size_t>(t) * N + q];
      const Eigen::MatrixXd K = D.transpose() * W * D;
      for (int i = 0; i < d; ++i) {
        S.C.block(i * N, i * N, N, N) += lambda * c * c * K;
        S.C.block(i * N, (d + i) * N, N, N) += lambda * (-c * s) * K;
        S.C.block((d + i) * N, i * N, N, N) += lambda * (-c * s) * K;
        S.C.block((d + i) * N, (d + i) * N, N, N) += lambda * s * s * K;
      }
    }
  }
  return S;
}

Eigen::VectorXd dense_solve(const DenseSystem& S) {
  return S.C.ldlt().solve(S.b);
}

double dense_energy(const DerivativeFields& f, const HarmonicParams& h, double lambda,
                    const std::vector<double>& wd, const std::vector<double>& wr,
                    double wr_const, const std::vector<double>& x) {
  const int d = f.grid.dim;
  const int N = f.grid.pixels();
  const double* ar = x.data();
  const double* ai = x.data() + static_cast<std::size_t>(d) * N;

  std::vector<std::vector<double>> dre(static_cast<std::size_t>(d) * d),
      dim(static_cast<std::size_t>(d) * d);
  for (int axis = 0; axis < d; ++axis)
    for (int i = 0; i < d; ++i) {
      dre[axis * d + i].assign(N, 0.0);
      dim[axis * d + i].assign(N, 0.0);
      forward_diff(ar + static_cast<std::size_t>(i) * N, dre[axis * d + i].data(), f.grid.rows,
                   f.grid.cols, axis);
      forward_diff(ai + static_cast<std::size_t>(i) * N, dim[axis * d + i].data(), f.grid.rows,
                   f.grid.cols, axis);
    }

  double E = 0.0;
  for (int t = 0; t < h.frames; ++t) {
    const double c = std::cos(t * h.omega), s = std::sin(t * h.omega);
    const double* gt = f.dt_plane(t);
    for (int q = 0; q < N; ++q) {
      double G = gt[q];
      for (int i = 0; i < d; ++i)
        G += f.grad_plane(i, t)[q] *
             (ar[static_cast<std::size_t>(i) * N + q] * c -
              ai[static_cast<std::size_t>(i) * N + q] * s);
      const double w = wd.empty() ? 1.0 : wd[static_cast<std::size_t>(t) * N + q];
      E += w * G * G;
      const double wreg = wr.empty() ? wr_const : wr[static_cast<std::size_t>(t) * N + q];
      double gn2 = 0.0;
      for (int axis = 0; axis < d; ++axis)
        for (int i = 0; i < d; ++i) {
          const double e = dre[axis * d + i][q] * c - dim[axis * d + i][q] * s;
          gn2 += e * e;
        }
      E += lambda * wreg * gn2;
    }
  }
  return E;
}

}  // namespace hof::test
