#pragma once

// Dark-state frame, geometric potentials, and the time-ordered
// propagator restricted to the two-level dark subspace.

#include <array>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "tripod/pulses.hpp"
#include "tripod/species.hpp"

namespace tripod {

using DarkState = Eigen::Vector2cd;
using EffectiveOperator = Eigen::Matrix2cd;

// Overall sign of the scalar potential.  The positive (Gram-matrix)
// form makes Q11 at the asymptotic angles equal the kinetic energy of
// the momentum-shifted arm; the negative form flips it.  Observables
// built from |Q11 - Q22| are identical either way.
enum class QSign { positive, negative };

// Sign of the sigma_y coefficient in the rotation coupling.  `negative`
// reproduces -i hbar <D_mu | d/dt D_nu> for the frame defined here;
// `positive` selects the transposed convention.
enum class WSign { negative, positive };

struct DarkFrame {
    // Rows |D1>, |D2> over the bare basis (|1>,|2>,|3>,|e>).
    Eigen::Matrix<std::complex<double>, 2, 4> c;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Frame at given angles and per-beam total phases S_a.
DarkFrame dark_frame(const MixingAngles& angles, const std::array<double, 3>& S);

// Frame at position r and time t; S_a = k (k_hat_a . r) + beam phase.
DarkFrame frame_at(const Eigen::Vector2d& r, double t,
                   const PulseSchedule& sched, const BeamGeometry& geom,
                   const SpeciesConstants& species);

EffectiveOperator scalar_potential_Q(double theta, double phi,
                                     const SpeciesConstants& species,
                                     QSign sign = QSign::positive);

EffectiveOperator rotation_coupling_w(double theta, double dphi_dt,
                                      WSign sign = WSign::negative);

// Cartesian (x, y) components for the standard beam layout.
std::pair<EffectiveOperator, EffectiveOperator> gauge_potential_A(
    double theta, double phi, const SpeciesConstants& species);

// Populations |sum_mu c_mu C_mu_a|^2 over the four bare states.
std::array<double, 4> bare_projection(const DarkState& state,
                                      const DarkFrame& frame);

// Amplitudes c_mu = <D_mu|psi> of a four-component state.
DarkState dark_projection(const Eigen::Vector4cd& psi, const DarkFrame& frame);

struct DarkOptions {
    bool include_Q = true;
    bool include_w = true;
    // When set, adds p^2/2m times identity and -(A.p)/m to the generator.
    std::optional<Eigen::Vector2d> semiclassical_p;
    QSign q_sign = QSign::positive;
    WSign w_sign = WSign::negative;
    double step_divisor = 500.0;  // dt = sigma_t / step_divisor
    // Re-run at half step and require every final bare population to
    // move by less than 1e-6, else throw ConvergenceError.
    bool check_convergence = false;
    // Propagation end; defaults to the schedule's own t_end.
    std::optional<double> t_end;
};

struct DarkSample {
    double t = 0.0;
    DarkState state;
    Eigen::Matrix2cd unitary;  // cumulative, from t = 0
};

struct DarkTrajectory {
    DarkState final_state;
    Eigen::Matrix2cd final_unitary;
    std::vector<DarkSample> samples;
};

// Generator (Q + w, plus semiclassical terms when requested) at time t.
EffectiveOperator dark_generator(double t, const PulseSchedule& sched,
                                 const SpeciesConstants& species,
                                 const DarkOptions& opt);

// Midpoint piecewise-constant propagation of the initial state (0, 1)
// from t = 0 to t_end, with the phase-jump frame change inserted at the
// grid node nearest t_jump.  Samples are recorded at the first node at
// or past each requested time (sample_times must be ascending).
DarkTrajectory propagate_dark(const PulseSchedule& sched,
                              const SpeciesConstants& species,
                              const DarkOptions& opt = {},
                              const std::vector<double>& sample_times = {});

// Same stepper over [t0, t1] from an arbitrary initial state; no phase
// jump is applied and nothing is sampled.
DarkState propagate_dark_segment(const DarkState& initial, double t0,
                                 double t1, const PulseSchedule& sched,
                                 const SpeciesConstants& species,
                                 const DarkOptions& opt = {});

// Single analytic step exp(-i H dt / hbar) for Hermitian 2x2 H.
Eigen::Matrix2cd pauli_exponential(const EffectiveOperator& H, double dt);

}  // namespace tripod
