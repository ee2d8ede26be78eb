#pragma once

// Beam geometry and the six-pulse Gaussian schedule: three beams, two
// pi/2 pulses, optional mirrored beam ordering in the second pulse, and
// a phase jump on beam 3 at the middle of the free evolution.

#include <array>

#include <Eigen/Core>

namespace tripod {

struct BeamGeometry {
    // Unit propagation directions in the x-y plane and static phase
    // offsets, one per beam.
    std::array<Eigen::Vector2d, 3> direction{Eigen::Vector2d(0.0, -1.0),
                                             Eigen::Vector2d(1.0, 0.0),
                                             Eigen::Vector2d(0.0, 1.0)};
    std::array<double, 3> offset{0.0, 0.0, 0.0};  // rad

    static BeamGeometry standard_tripod() { return BeamGeometry{}; }
};

struct PulseSchedule {
    std::array<double, 3> peak{2.0 * 3.14159265358979323846 * 260e3,
                               2.0 * 3.14159265358979323846 * 260e3,
                               2.0 * 3.14159265358979323846 * 130e3};  // rad/s
    double sigma_t = 2.5e-6;    // s
    double eta = 1.8;
    double free_time = 6e-6;    // s, gap between the two pulses
    bool mirror_second = true;  // swap beams 1 and 2 in pulse 2
    double phase_jump = 0.0;    // rad, applied to beam 3

    double t3(int j) const;     // beam-3 center of pulse j in {1,2}
    double t_end() const { return 16.0 * sigma_t + free_time; }
    double t_jump() const { return 8.0 * sigma_t + 0.5 * free_time; }
};

// Center times (t1, t2, t3) of pulse j for beams 1..3.  Pulse 1 runs
// beam 1 first; with the mirror flag on, pulse 2 runs beam 2 first.
// Throws std::domain_error for j outside {1,2}.
std::array<double, 3> pulse_centers(int j, const PulseSchedule& sched);

}  // namespace tripod
