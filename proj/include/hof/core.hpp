#pragma once

// Conversions between the complex amplitude a(x) and the time-harmonic
// velocity v(t,x) = Re(a(x) e^{i t omega}) = a_R cos(t omega) - a_I sin(t omega).

#include "hof/types.hpp"

namespace hof {

// cos/sin tables at frequencies omega and 2*omega for t = 0..frames-1.
struct TrigTables {
  std::vector<double> c1, s1, c2, s2;
};
TrigTables make_trig_tables(const HarmonicParams& h);

// Samples v on the integer time grid t = 0..frames-1.
VelocityField velocity_from_amplitude(const AmplitudeField& a, const HarmonicParams& h);

// Evaluates one velocity snapshot at arbitrary (continuous) time t.
// Output planes v[comp] must be sized grid.pixels(); unused comps untouched.
void velocity_at(const AmplitudeField& a, const HarmonicParams& h, double t,
                 std::vector<double>* v_comp0, std::vector<double>* v_comp1);

// Recovers a = 2 * F_d[v](omega, .) from an exactly harmonic field sampled
// over full periods. Throws ConfigError when frames*omega != 2*pi*periods.
AmplitudeField amplitude_from_velocity(const VelocityField& v, const HarmonicParams& h);

}  // namespace hof
