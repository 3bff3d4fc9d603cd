#include "hof/model1.hpp"

#include <chrono>
#include <cmath>
#include <cstring>

#include "hof/diffops.hpp"
#include "hof/multiscale.hpp"

namespace hof {

DerivativeFields plain_derivatives(const ImageSequence& I) {
  GradientStack g = central_gradient(I);
  ImageSequence dt = temporal_diff(I);
  DerivativeFields f;
  f.grid = I.grid;
  f.frames = I.frames;
  for (int axis = 0; axis < I.grid.dim; ++axis) f.grad[axis] = std::move(g.grad[axis]);
  f.dt = std::move(dt.data);
  return f;
}

std::vector<double> stack_amplitude(const AmplitudeField& a) {
  std::vector<double> x;
  x.reserve(a.re.size() + a.im.size());
  x.insert(x.end(), a.re.begin(), a.re.end());
  x.insert(x.end(), a.im.begin(), a.im.end());
  return x;
}

AmplitudeField unstack_amplitude(const std::vector<double>& x, Grid grid) {
  const std::size_t half = static_cast<std::size_t>(grid.dim) * grid.pixels();
  if (x.size() != 2 * half) throw DataError("unstack_amplitude: size mismatch");
  AmplitudeField a = AmplitudeField::zeros(grid);
  std::copy(x.begin(), x.begin() + half, a.re.begin());
  std::copy(x.begin() + half, x.end(), a.im.begin());
  return a;
}

int HarmonicSystem::pair_index(int i, int j) const {
  // upper triangle, d <= 2: (0,0)->0, (0,1)->1, (1,1)->2
  return i + j;
}

void HarmonicSystem::apply(const std::vector<double>& x, std::vector<double>& out) const {
  const int d = grid.dim;
  const int N = grid.pixels();
  const std::size_t half = static_cast<std::size_t>(d) * N;
  if (x.size() != 2 * half) throw DataError("HarmonicSystem::apply: size mismatch");
  out.assign(2 * half, 0.0);

  const double* xr = x.data();
  const double* xi = x.data() + half;
  double* yr = out.data();
  double* yi = out.data() + half;

  // Pointwise data blocks.
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const int p = pair_index(std::min(i, j), std::max(i, j));
      const double* RR = crr[p].data();
      const double* RI = cri[p].data();
      const double* II = cii[p].data();
      const double* xrj = xr + static_cast<std::size_t>(j) * N;
      const double* xij = xi + static_cast<std::size_t>(j) * N;
      double* yri = yr + static_cast<std::size_t>(i) * N;
      double* yii = yi + static_cast<std::size_t>(i) * N;
      for (int q = 0; q < N; ++q) {
        yri[q] += RR[q] * xrj[q] + RI[q] * xij[q];
        yii[q] += RI[q] * xrj[q] + II[q] * xij[q];
      }
    }
  }

  // Regularizer: lambda * sum_axis D^T [ W . (D a) ] with the 2x2 coupling
  // (wp wx; wx wm) between the real and imaginary planes of each component.
  std::vector<double> dr(N), di(N), tr(N), ti(N), adj(N);
  for (int comp = 0; comp < d; ++comp) {
    const double* xrc = xr + static_cast<std::size_t>(comp) * N;
    const double* xic = xi + static_cast<std::size_t>(comp) * N;
    double* yrc = yr + static_cast<std::size_t>(comp) * N;
    double* yic = yi + static_cast<std::size_t>(comp) * N;
    for (int axis = 0; axis < d; ++axis) {
      forward_diff(xrc, dr.data(), grid.rows, grid.cols, axis);
      forward_diff(xic, di.data(), grid.rows, grid.cols, axis);
      if (reg_const) {
        for (int q = 0; q < N; ++q) {
          tr[q] = wp_const * dr[q];
          ti[q] = wm_const * di[q];
        }
      } else {
        for (int q = 0; q < N; ++q) {
          tr[q] = wp[q] * dr[q] + wx[q] * di[q];
          ti[q] = wx[q] * dr[q] + wm[q] * di[q];
        }
      }
      forward_diff_adjoint(tr.data(), adj.data(), grid.rows, grid.cols, axis);
      for (int q = 0; q < N; ++q) yrc[q] += lambda * adj[q];
      forward_diff_adjoint(ti.data(), adj.data(), grid.rows, grid.cols, axis);
      for (int q = 0; q < N; ++q) yic[q] += lambda * adj[q];
    }
  }
}

namespace {

// Shared assembly. wd == nullptr means unit data weights; wr == nullptr means
// a constant reg weight wr_const (folded analytically: sum_t w cos^2 = w T/2).
HarmonicSystem assemble_core(const DerivativeFields& f, const HarmonicParams& h, double lambda,
                             const std::vector<double>* wd, const std::vector<double>* wr,
                             double wr_const) {
  h.validate();
  if (f.frames != h.frames) throw DataError("assemble: derivative frames != params frames");
  const int d = f.grid.dim;
  const int N = f.grid.pixels();
  const int T = h.frames;
  const std::size_t stackN = static_cast<std::size_t>(T) * N;
  if (f.dt.size() != stackN) throw DataError("assemble: dt stack size mismatch");
  for (int axis = 0; axis < d; ++axis)
    if (f.grad[axis].size() != stackN) throw DataError("assemble: gradient stack size mismatch");
  if (wd && wd->size() != stackN) throw DataError("assemble: data weight size mismatch");
  if (wr && wr->size() != stackN) throw DataError("assemble: reg weight size mismatch");

  HarmonicSystem S;
  S.grid = f.grid;
  S.frames = T;
  S.lambda = lambda;
  const int npairs = d == 1 ? 1 : 3;
  for (int p = 0; p < npairs; ++p) {
    S.crr[p].assign(N, 0.0);
    S.cri[p].assign(N, 0.0);
    S.cii[p].assign(N, 0.0);
  }
  S.rhs.assign(2 * static_cast<std::size_t>(d) * N, 0.0);

  // Temporary meaning during accumulation: crr = sum w g_i g_j,
  // cri = sum w g_i g_j cos(2tw), cii = sum w g_i g_j sin(2tw);
  // rhs re-planes = sum w g_i gt cos(tw), im-planes = sum w g_i gt sin(tw).
  std::vector<double> wreg0, wregc, wregs;
  if (wr) {
    wreg0.assign(N, 0.0);
    wregc.assign(N, 0.0);
    wregs.assign(N, 0.0);
  }

  for (int t = 0; t < T; ++t) {
    const double c1 = std::cos(t * h.omega), s1 = std::sin(t * h.omega);
    const double c2 = std::cos(2.0 * t * h.omega), s2 = std::sin(2.0 * t * h.omega);
    const double* wrow = wd ? wd->data() + static_cast<std::size_t>(t) * N : nullptr;
    const double* gt = f.dt_plane(t);
    const double* g[2] = {d > 0 ? f.grad_plane(0, t) : nullptr,
                          d > 1 ? f.grad_plane(1, t) : nullptr};
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        const int p = i + j;
        double* a0 = S.crr[p].data();
        double* ac = S.cri[p].data();
        double* as = S.cii[p].data();
        const double* gi = g[i];
        const double* gj = g[j];
        if (wrow) {
          for (int q = 0; q < N; ++q) {
            const double v = wrow[q] * gi[q] * gj[q];
            a0[q] += v;
            ac[q] += v * c2;
            as[q] += v * s2;
          }
        } else {
          for (int q = 0; q < N; ++q) {
            const double v = gi[q] * gj[q];
            a0[q] += v;
            ac[q] += v * c2;
            as[q] += v * s2;
          }
        }
      }
      double* br = S.rhs.data() + static_cast<std::size_t>(i) * N;
      double* bi = S.rhs.data() + static_cast<std::size_t>(d + i) * N;
      const double* gi = g[i];
      if (wrow) {
        for (int q = 0; q < N; ++q) {
          const double v = wrow[q] * gi[q] * gt[q];
          br[q] += v * c1;
          bi[q] += v * s1;
        }
      } else {
        for (int q = 0; q < N; ++q) {
          const double v = gi[q] * gt[q];
          br[q] += v * c1;
          bi[q] += v * s1;
        }
      }
    }
    if (wr) {
      const double* wreg = wr->data() + static_cast<std::size_t>(t) * N;
      for (int q = 0; q < N; ++q) {
        wreg0[q] += wreg[q];
        wregc[q] += wreg[q] * c2;
        wregs[q] += wreg[q] * s2;
      }
    }
  }

  // Fold: C_RR = sum w g g cos^2 = (S0 + Sc2)/2, C_II = (S0 - Sc2)/2,
  // C_RI = -Ss2/2; b_R = -sum w g gt cos, b_I = +sum w g gt sin.
  for (int p = 0; p < npairs; ++p) {
    double* a0 = S.crr[p].data();
    double* ac = S.cri[p].data();
    double* as = S.cii[p].data();
    for (int q = 0; q < N; ++q) {
      const double s0v = a0[q], c2v = ac[q], s2v = as[q];
      a0[q] = 0.5 * (s0v + c2v);
      ac[q] = -0.5 * s2v;
      as[q] = 0.5 * (s0v - c2v);
    }
  }
  for (int i = 0; i < d; ++i) {
    double* br = S.rhs.data() + static_cast<std::size_t>(i) * N;
    for (int q = 0; q < N; ++q) br[q] = -br[q];
  }

  if (wr) {
    S.reg_const = false;
    S.wp.assign(N, 0.0);
    S.wm.assign(N, 0.0);
    S.wx.assign(N, 0.0);
    for (int q = 0; q < N; ++q) {
      S.wp[q] = 0.5 * (wreg0[q] + wregc[q]);
      S.wm[q] = 0.5 * (wreg0[q] - wregc[q]);
      S.wx[q] = -0.5 * wregs[q];
    }
  } else {
    S.reg_const = true;
    S.wp_const = 0.5 * T * wr_const;
    S.wm_const = 0.5 * T * wr_const;
  }
  return S;
}

}  // namespace

HarmonicSystem assemble_model1(const DerivativeFields& f, const HarmonicParams& h,
                               double lambda) {
  return assemble_core(f, h, lambda, nullptr, nullptr, 1.0);
}

// Used by irls.cpp; declared here to keep assemble_core in one place.
HarmonicSystem assemble_core_weighted(const DerivativeFields& f, const HarmonicParams& h,
                                      double lambda, const std::vector<double>* wd,
                                      const std::vector<double>* wr, double wr_const) {
  return assemble_core(f, h, lambda, wd, wr, wr_const);
}

CgStats cg_solve(const HarmonicSystem& S, std::vector<double>& x, const CgOptions& opt,
                 const CgCallback& callback) {
  const std::size_t n = S.size();
  if (x.size() != n) throw DataError("cg_solve: start vector size mismatch");
  const std::vector<double>& b = S.rhs;

  auto dot = [](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
  };

  const double bnorm = std::sqrt(dot(b, b));
  CgStats stats;
  if (bnorm == 0.0) {
    // SPD system with zero rhs: the solution is zero.
    std::fill(x.begin(), x.end(), 0.0);
    stats.converged = true;
    return stats;
  }

  std::vector<double> r(n), p(n), q(n);
  S.apply(x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  double rho = dot(r, r);
  double rel = std::sqrt(rho) / bnorm;
  stats.rel_residual = rel;
  if (rel <= opt.tol) {
    stats.converged = true;
    return stats;
  }
  p = r;

  for (int it = 0; it < opt.max_iters; ++it) {
    S.apply(p, q);
    const double pq = dot(p, q);
    if (pq <= 0.0) {
      const double pn = dot(p, p);
      if (pq <= -1e-12 * pn)
        throw SolverError("cg_solve: operator not positive definite (p^T C p = " +
                          std::to_string(pq) + ")");
      break;  // numerically zero curvature: stagnate at the current iterate
    }
    const double alpha = rho / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    const double rho_next = dot(r, r);
    rel = std::sqrt(rho_next) / bnorm;
    stats.iterations = it + 1;
    stats.rel_residual = rel;
    if (callback) callback(it + 1, x, rel);
    if (rel <= opt.tol) {
      stats.converged = true;
      break;
    }
    const double beta = rho_next / rho;
    rho = rho_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  return stats;
}

AmplitudeField model1_solve_level(const DerivativeFields& f, const HarmonicParams& h,
                                  const SolverConfig& cfg, AmplitudeField init, int level,
                                  ReconstructTrace* trace) {
  HarmonicSystem S = assemble_model1(f, h, cfg.lambda);
  std::vector<double> x = stack_amplitude(init);
  CgCallback cb;
  if (trace)
    cb = [&](int it, const std::vector<double>&, double rel) {
      trace->rows.push_back({level, "cg", 0, it, rel});
    };
  cg_solve(S, x, {cfg.cg_iters, cfg.cg_tol}, cb);
  return unstack_amplitude(x, f.grid);
}

AmplitudeField model1_reconstruct(const ImageSequence& I, const HarmonicParams& h,
                                  const SolverConfig& cfg, ReconstructTrace* trace) {
  return run_multiscale(I, h, cfg,
                        [trace](const DerivativeFields& f, const HarmonicParams& hh,
                                const SolverConfig& c, AmplitudeField init, int level) {
                          return model1_solve_level(f, hh, c, std::move(init), level, trace);
                        },
                        trace);
}

}  // namespace hof
