#pragma once

// Time-dependent Rabi envelopes, mixing angles, and angle rates for a
// pulse schedule.  Angle extraction works in the log domain so the
// ratios stay exact arbitrarily deep into the Gaussian tails.

#include <array>
#include <complex>

#include "tripod/schedule.hpp"

namespace tripod {

struct RabiTriple {
    std::array<std::complex<double>, 3> omega{};  // rad/s
    double t = 0.0;                               // evaluation time, s
};

struct MixingAngles {
    double theta = 0.0;        // rad, in [0, pi/2]
    double phi = 0.0;          // rad, in [0, pi/2]
    double omega_total = 0.0;  // rad/s
    double dphi_dt = 0.0;      // rad/s
};

// Total phase of each beam at time t: static offset plus, for beam 3,
// the phase jump once t passes the middle of the free evolution.
std::array<double, 3> beam_phases(double t, const PulseSchedule& sched,
                                  const BeamGeometry& geom);

// Complex Rabi frequencies at time t, each beam summed over both pulses.
RabiTriple rabi_at(double t, const PulseSchedule& sched,
                   const BeamGeometry& geom);

// Angles from envelope magnitudes.  Below the amplitude floor of
// 1e-6 x max peak the ratios are 0/0 and the asymptotic tail-limit
// angles are returned instead.
MixingAngles mixing_angles(const RabiTriple& rabi, const PulseSchedule& sched);

// Angles directly from the schedule via log-domain envelope ratios,
// with the exact analytic dphi/dt.  Well defined at every t.
MixingAngles angles_at(double t, const PulseSchedule& sched);

// dphi/dt near the pulse centers.  For equal peak amplitudes on beams
// 1 and 2 this is the closed form +-(eta/2 sigma_t) sech(eta (t-t3)/sigma_t)
// inside |t - t3| <= 4 sigma_t and exactly 0 outside; for unequal peaks
// it falls back to a centered finite difference of phi with a 1 ns step.
double phi_rate(double t, const PulseSchedule& sched);

// Largest fractional excess of any |Omega_a| over its single-pulse peak
// caused by the other pulse's tail.
double inter_pulse_overlap(const PulseSchedule& sched);

}  // namespace tripod
