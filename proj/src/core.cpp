#include "hof/core.hpp"

#include <cmath>

namespace hof {

TrigTables make_trig_tables(const HarmonicParams& h) {
  TrigTables t;
  t.c1.resize(h.frames);
  t.s1.resize(h.frames);
  t.c2.resize(h.frames);
  t.s2.resize(h.frames);
  for (int k = 0; k < h.frames; ++k) {
    t.c1[k] = std::cos(k * h.omega);
    t.s1[k] = std::sin(k * h.omega);
    t.c2[k] = std::cos(2.0 * k * h.omega);
    t.s2[k] = std::sin(2.0 * k * h.omega);
  }
  return t;
}

VelocityField velocity_from_amplitude(const AmplitudeField& a, const HarmonicParams& h) {
  a.validate();
  h.validate();
  const int N = a.grid.pixels();
  VelocityField v = VelocityField::zeros(a.grid, h.frames);
  for (int t = 0; t < h.frames; ++t) {
    const double c = std::cos(t * h.omega), s = std::sin(t * h.omega);
    for (int i = 0; i < a.grid.dim; ++i) {
      const double* ar = a.re_plane(i);
      const double* ai = a.im_plane(i);
      double* out = v.plane(t, i);
      for (int x = 0; x < N; ++x) out[x] = ar[x] * c - ai[x] * s;
    }
  }
  return v;
}

void velocity_at(const AmplitudeField& a, const HarmonicParams& h, double t,
                 std::vector<double>* v_comp0, std::vector<double>* v_comp1) {
  const int N = a.grid.pixels();
  const double c = std::cos(t * h.omega), s = std::sin(t * h.omega);
  std::vector<double>* outs[2] = {v_comp0, v_comp1};
  for (int i = 0; i < a.grid.dim; ++i) {
    if (!outs[i]) continue;
    outs[i]->resize(N);
    const double* ar = a.re_plane(i);
    const double* ai = a.im_plane(i);
    double* out = outs[i]->data();
    for (int x = 0; x < N; ++x) out[x] = ar[x] * c - ai[x] * s;
  }
}

AmplitudeField amplitude_from_velocity(const VelocityField& v, const HarmonicParams& h) {
  h.validate();
  if (v.frames != h.frames) throw ConfigError("amplitude_from_velocity: frame count mismatch");
  const int N = v.grid.pixels();
  AmplitudeField a = AmplitudeField::zeros(v.grid);
  // a = 2 F_d[v](omega): a_R = (2/T) sum v cos, a_I = -(2/T) sum v sin.
  for (int t = 0; t < h.frames; ++t) {
    const double c = std::cos(t * h.omega), s = std::sin(t * h.omega);
    for (int i = 0; i < v.grid.dim; ++i) {
      const double* vt = v.plane(t, i);
      double* ar = a.re_plane(i);
      double* ai = a.im_plane(i);
      for (int x = 0; x < N; ++x) {
        ar[x] += vt[x] * c;
        ai[x] -= vt[x] * s;
      }
    }
  }
  const double scale = 2.0 / h.frames;
  for (double& x : a.re) x *= scale;
  for (double& x : a.im) x *= scale;
  return a;
}

}  // namespace hof
