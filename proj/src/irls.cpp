#include "hof/irls.hpp"

#include <cmath>

#include "hof/diffops.hpp"
#include "hof/multiscale.hpp"

namespace hof {

double huber(double x, double eps) {
  const double ax = std::abs(x);
  if (ax >= eps) return ax;
  return x * x / (2.0 * eps) + eps / 2.0;
}

double quad_majorant(double x, double z, double eps) {
  const double m = std::max(eps, std::abs(z));
  return x * x / (2.0 * m) + m / 2.0;
}

namespace {

// Forward differences of all amplitude planes: dre[axis][comp], dim^2 planes
// each of grid size. ||grad v(t,x)||_F^2 = sum (dre c_t - dim s_t)^2.
struct AmplitudeGradients {
  Grid grid;
  std::vector<double> dre[2][2], dim_[2][2];
};

AmplitudeGradients amplitude_gradients(const AmplitudeField& a) {
  AmplitudeGradients g;
  g.grid = a.grid;
  const int d = a.grid.dim;
  const int N = a.grid.pixels();
  for (int axis = 0; axis < d; ++axis)
    for (int comp = 0; comp < d; ++comp) {
      g.dre[axis][comp].assign(N, 0.0);
      g.dim_[axis][comp].assign(N, 0.0);
      forward_diff(a.re_plane(comp), g.dre[axis][comp].data(), a.grid.rows, a.grid.cols, axis);
      forward_diff(a.im_plane(comp), g.dim_[axis][comp].data(), a.grid.rows, a.grid.cols, axis);
    }
  return g;
}

// Walks every (t, x) handing the data residual G(t,x) and (when want_grad)
// the Frobenius norm of the velocity gradient to the visitor.
template <class Fn>
void scan_residuals(const DerivativeFields& f, const AmplitudeField& a, const HarmonicParams& h,
                    bool want_grad, Fn&& visit) {
  const int d = f.grid.dim;
  const int N = f.grid.pixels();
  const AmplitudeGradients ag = want_grad ? amplitude_gradients(a) : AmplitudeGradients{};
  for (int t = 0; t < h.frames; ++t) {
    const double c = std::cos(t * h.omega), s = std::sin(t * h.omega);
    const double* gt = f.dt_plane(t);
    const double* g[2] = {f.grad_plane(0, t), d > 1 ? f.grad_plane(1, t) : nullptr};
    for (int x = 0; x < N; ++x) {
      double G = gt[x];
      for (int i = 0; i < d; ++i)
        G += g[i][x] * (a.re_plane(i)[x] * c - a.im_plane(i)[x] * s);
      double gn = 0.0;
      if (want_grad) {
        for (int axis = 0; axis < d; ++axis)
          for (int comp = 0; comp < d; ++comp) {
            const double e = ag.dre[axis][comp][x] * c - ag.dim_[axis][comp][x] * s;
            gn += e * e;
          }
        gn = std::sqrt(gn);
      }
      visit(t, x, G, gn);
    }
  }
}

}  // namespace

Weights compute_weights(const DerivativeFields& f, const AmplitudeField& a,
                        const HarmonicParams& h, double eps, double delta, RobustModel model) {
  if (!(eps > 0.0) || !(delta > 0.0))
    throw ConfigError("compute_weights: eps and delta must be positive");
  Weights w;
  w.grid = f.grid;
  w.frames = f.frames;
  const std::size_t sz = static_cast<std::size_t>(f.frames) * f.grid.pixels();
  w.data.assign(sz, 0.0);
  if (model == RobustModel::III) {
    w.reg_is_const = true;
    w.reg_const = 2.0;
  } else {
    w.reg.assign(sz, 0.0);
  }
  const int N = f.grid.pixels();
  scan_residuals(f, a, h, model == RobustModel::II, [&](int t, int x, double G, double gn) {
    const std::size_t idx = static_cast<std::size_t>(t) * N + x;
    w.data[idx] = 1.0 / std::max(eps, std::abs(G));
    if (model == RobustModel::II) w.reg[idx] = 1.0 / std::max(delta, gn);
  });
  return w;
}

HarmonicSystem assemble_weighted(const DerivativeFields& f, const HarmonicParams& h,
                                 double lambda, const Weights& w) {
  return assemble_core_weighted(f, h, lambda, &w.data, w.reg_is_const ? nullptr : &w.reg,
                                w.reg_const);
}

SmoothingSchedule update_smoothing(const SmoothingSchedule& s, double mean_abs_residual,
                                   double mean_grad_norm) {
  SmoothingSchedule out = s;
  const double root = std::sqrt(static_cast<double>(s.k + 1));
  out.eps = std::max(std::min(s.eps, 0.1 * mean_abs_residual / root), s.floor_c / root);
  out.delta = std::max(std::min(s.delta, 0.1 * mean_grad_norm / root), s.floor_c / root);
  out.k = s.k + 1;
  return out;
}

double huber_energy(const DerivativeFields& f, const AmplitudeField& a, const HarmonicParams& h,
                    double lambda, double eps, double delta, RobustModel model) {
  double data = 0.0, reg = 0.0;
  scan_residuals(f, a, h, true, [&](int, int, double G, double gn) {
    data += huber(G, eps);
    reg += model == RobustModel::II ? huber(gn, delta) : gn * gn;
  });
  return data + lambda * reg;
}

double weighted_energy(const DerivativeFields& f, const AmplitudeField& a,
                       const HarmonicParams& h, double lambda, const Weights& w) {
  const int N = f.grid.pixels();
  double data = 0.0, reg = 0.0;
  scan_residuals(f, a, h, true, [&](int t, int x, double G, double gn) {
    const std::size_t idx = static_cast<std::size_t>(t) * N + x;
    data += w.data[idx] * G * G;
    reg += (w.reg_is_const ? w.reg_const : w.reg[idx]) * gn * gn;
  });
  return data + lambda * reg;
}

namespace {

Weights unit_weights_for(const DerivativeFields& f, RobustModel model) {
  Weights w;
  w.grid = f.grid;
  w.frames = f.frames;
  w.data.assign(static_cast<std::size_t>(f.frames) * f.grid.pixels(), 1.0);
  w.reg_is_const = true;
  w.reg_const = model == RobustModel::III ? 2.0 : 1.0;
  return w;
}

// Mean |G| and mean ||grad v||_F over all (t, x), for the smoothing update.
void residual_means(const DerivativeFields& f, const AmplitudeField& a, const HarmonicParams& h,
                    double* mean_abs, double* mean_grad) {
  double sa = 0.0, sg = 0.0;
  std::size_t count = 0;
  scan_residuals(f, a, h, true, [&](int, int, double G, double gn) {
    sa += std::abs(G);
    sg += gn;
    ++count;
  });
  *mean_abs = count ? sa / count : 0.0;
  *mean_grad = count ? sg / count : 0.0;
}

}  // namespace

AmplitudeField irls_solve_level(const DerivativeFields& f, const HarmonicParams& h,
                                const SolverConfig& cfg, RobustModel model, AmplitudeField init,
                                int level, ReconstructTrace* trace,
                                std::vector<double>* energy_trace) {
  AmplitudeField a = std::move(init);
  SmoothingSchedule sched{cfg.eps0, cfg.delta0, 0, 1e-8};
  const bool want_energy = trace != nullptr || energy_trace != nullptr;

  for (int k = 0; k < cfg.irls_iters; ++k) {
    if (want_energy) {
      const double E = huber_energy(f, a, h, cfg.lambda, sched.eps, sched.delta, model);
      if (trace) trace->rows.push_back({level, "irls_energy", k, 0, E});
      if (energy_trace) energy_trace->push_back(E);
    }
    const Weights w = cfg.unit_weights ? unit_weights_for(f, model)
                                       : compute_weights(f, a, h, sched.eps, sched.delta, model);
    HarmonicSystem S = assemble_weighted(f, h, cfg.lambda, w);
    std::vector<double> x = stack_amplitude(a);
    CgCallback cb;
    if (trace)
      cb = [&](int it, const std::vector<double>&, double rel) {
        trace->rows.push_back({level, "cg", k, it, rel});
      };
    cg_solve(S, x, {cfg.cg_iters, cfg.cg_tol}, cb);
    a = unstack_amplitude(x, f.grid);

    double mean_abs = 0.0, mean_grad = 0.0;
    residual_means(f, a, h, &mean_abs, &mean_grad);
    sched = update_smoothing(sched, mean_abs, mean_grad);
    if (trace) {
      trace->rows.push_back({level, "eps", k, 0, sched.eps});
      trace->rows.push_back({level, "delta", k, 0, sched.delta});
    }
  }
  if (want_energy) {
    const double E = huber_energy(f, a, h, cfg.lambda, sched.eps, sched.delta, model);
    if (trace) trace->rows.push_back({level, "irls_energy", cfg.irls_iters, 0, E});
    if (energy_trace) energy_trace->push_back(E);
  }
  return a;
}

AmplitudeField irls_reconstruct(const ImageSequence& I, const HarmonicParams& h,
                                const SolverConfig& cfg, RobustModel model,
                                ReconstructTrace* trace) {
  return run_multiscale(I, h, cfg,
                        [model, trace](const DerivativeFields& f, const HarmonicParams& hh,
                                       const SolverConfig& c, AmplitudeField init, int level) {
                          return irls_solve_level(f, hh, c, model, std::move(init), level, trace);
                        },
                        trace);
}

}  // namespace hof
