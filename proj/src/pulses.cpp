#include "tripod/pulses.hpp"

#include <algorithm>
#include <cmath>

#include "tripod/species.hpp"

namespace tripod {

namespace {

// Log envelope lambda_a = log|Omega_a(t)| and its time derivative,
// computed without underflow from the two Gaussian lobes per beam.
struct LogEnvelope {
    double lam;
    double dlam;
};

LogEnvelope log_envelope(double t, int a, const PulseSchedule& s) {
    const auto c1 = pulse_centers(1, s);
    const auto c2 = pulse_centers(2, s);
    const double inv = 1.0 / (4.0 * s.sigma_t * s.sigma_t);
    const double u1 = -(t - c1[a]) * (t - c1[a]) * inv;
    const double u2 = -(t - c2[a]) * (t - c2[a]) * inv;
    const double m = std::max(u1, u2);
    const double e1 = std::exp(u1 - m);
    const double e2 = std::exp(u2 - m);
    const double du1 = -2.0 * (t - c1[a]) * inv;
    const double du2 = -2.0 * (t - c2[a]) * inv;
    LogEnvelope le;
    le.lam = std::log(s.peak[a]) + m + std::log(e1 + e2);
    if (le.lam < -1e15) le.lam = -1e15;  // keeps differences finite for zero peaks
    le.dlam = (e1 * du1 + e2 * du2) / (e1 + e2);
    return le;
}

double phi_from_log_ratio(double d) {
    if (d <= 0.0) return std::atan(std::exp(d));
    return 0.5 * phys::pi - std::atan(std::exp(-d));
}

double sech_stable(double d) {
    const double e = std::exp(-std::abs(d));
    return 2.0 * e / (1.0 + e * e);
}

double phi_value(double t, const PulseSchedule& s) {
    const auto l1 = log_envelope(t, 0, s);
    const auto l2 = log_envelope(t, 1, s);
    return phi_from_log_ratio(l2.lam - l1.lam);
}

}  // namespace

std::array<double, 3> beam_phases(double t, const PulseSchedule& sched,
                                  const BeamGeometry& geom) {
    std::array<double, 3> S = geom.offset;
    if (t >= sched.t_jump()) S[2] += sched.phase_jump;
    return S;
}

RabiTriple rabi_at(double t, const PulseSchedule& sched,
                   const BeamGeometry& geom) {
    const auto c1 = pulse_centers(1, sched);
    const auto c2 = pulse_centers(2, sched);
    const auto S = beam_phases(t, sched, geom);
    const double inv = 1.0 / (4.0 * sched.sigma_t * sched.sigma_t);
    RabiTriple out;
    out.t = t;
    for (int a = 0; a < 3; ++a) {
        const double env =
            sched.peak[a] * (std::exp(-(t - c1[a]) * (t - c1[a]) * inv) +
                             std::exp(-(t - c2[a]) * (t - c2[a]) * inv));
        out.omega[a] = std::polar(env, S[a]);
    }
    return out;
}

MixingAngles mixing_angles(const RabiTriple& rabi, const PulseSchedule& sched) {
    const double m1 = std::abs(rabi.omega[0]);
    const double m2 = std::abs(rabi.omega[1]);
    const double m3 = std::abs(rabi.omega[2]);
    const double om = std::sqrt(m1 * m1 + m2 * m2 + m3 * m3);
    const double floor =
        1e-6 * std::max({sched.peak[0], sched.peak[1], sched.peak[2]});

    MixingAngles a;
    a.omega_total = om;
    if (om <= floor) {
        a.theta = 0.5 * phys::pi;
        if (rabi.t < sched.t3(1)) {
            a.phi = 0.0;
        } else if (rabi.t < sched.t3(2)) {
            a.phi = 0.5 * phys::pi;
        } else {
            a.phi = sched.mirror_second ? 0.0 : 0.5 * phys::pi;
        }
        a.dphi_dt = 0.0;
        return a;
    }
    a.theta = std::acos(std::min(1.0, m3 / om));
    a.phi = std::atan2(m2, m1);
    a.dphi_dt = phi_rate(rabi.t, sched);
    return a;
}

MixingAngles angles_at(double t, const PulseSchedule& sched) {
    const auto l1 = log_envelope(t, 0, sched);
    const auto l2 = log_envelope(t, 1, sched);
    const auto l3 = log_envelope(t, 2, sched);

    MixingAngles a;
    const double d = l2.lam - l1.lam;
    a.phi = phi_from_log_ratio(d);
    a.dphi_dt = 0.5 * (l2.dlam - l1.dlam) * sech_stable(d);

    const double g1 = std::exp(2.0 * (l1.lam - l3.lam));
    const double g2 = std::exp(2.0 * (l2.lam - l3.lam));
    const double ct = 1.0 / std::sqrt(1.0 + g1 + g2);
    a.theta = std::acos(std::min(1.0, ct));

    const RabiTriple r = rabi_at(t, sched, BeamGeometry::standard_tripod());
    a.omega_total = std::sqrt(std::norm(r.omega[0]) + std::norm(r.omega[1]) +
                              std::norm(r.omega[2]));
    return a;
}

double phi_rate(double t, const PulseSchedule& sched) {
    if (sched.peak[0] == sched.peak[1]) {
        for (int j = 1; j <= 2; ++j) {
            const double t3 = sched.t3(j);
            if (std::abs(t - t3) <= 4.0 * sched.sigma_t) {
                const double lead =
                    (j == 2 && sched.mirror_second) ? -1.0 : 1.0;
                const double x = sched.eta * (t - t3) / sched.sigma_t;
                return lead * (sched.eta / (2.0 * sched.sigma_t)) / std::cosh(x);
            }
        }
        return 0.0;
    }
    const double h = 1e-9;
    return (phi_value(t + h, sched) - phi_value(t - h, sched)) / (2.0 * h);
}

double inter_pulse_overlap(const PulseSchedule& sched) {
    const auto c1 = pulse_centers(1, sched);
    const auto c2 = pulse_centers(2, sched);
    const double inv = 1.0 / (4.0 * sched.sigma_t * sched.sigma_t);
    double worst = 0.0;
    for (int a = 0; a < 3; ++a) {
        const double gap = std::abs(c2[a] - c1[a]);
        worst = std::max(worst, std::exp(-gap * gap * inv));
    }
    return worst;
}

}  // namespace tripod
