#pragma once

// Full four-level dynamics of one closed momentum family, integrated by
// brute force.  Serves as the ground truth for the dark-subspace model.

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "tripod/darkspace.hpp"
#include "tripod/pulses.hpp"
#include "tripod/species.hpp"

namespace tripod {

using FamilyState = Eigen::Vector4cd;

struct MomentumFamily {
    Eigen::Vector2d p;                      // envelope momentum, kg m/s
    std::array<Eigen::Vector2d, 4> offset;  // q_a per member
    std::array<double, 4> kinetic;          // |p + q_a|^2 / 2m, J
};

// Family member momenta follow from the beam directions: absorbing from
// beam 3 and emitting into beam a shifts |a> by hbar k (k_hat_3 - k_hat_a),
// and |e> sits at p + hbar k k_hat_3.
MomentumFamily momentum_family(const Eigen::Vector2d& p,
                               const SpeciesConstants& species,
                               const BeamGeometry& geom);

struct BareOptions {
    bool decay = false;          // -i hbar Gamma/2 on the excited diagonal
    double step_divisor = 500.0; // dt = min(sigma_t/divisor, 1/(50 Omega_max))
    bool check_convergence = false;  // half-step check, 1e-6 per population
    // Propagation end; defaults to the schedule's own t_end.
    std::optional<double> t_end;
};

// Hamiltonian of the family at time t: kinetic diagonal plus
// hbar Omega_a(t) |e><a| + h.c., with the optional decay term.
Eigen::Matrix4cd family_hamiltonian(const Eigen::Vector2d& p, double t,
                                    const PulseSchedule& sched,
                                    const BeamGeometry& geom,
                                    const SpeciesConstants& species,
                                    bool decay = false);

struct BareSample {
    double t = 0.0;
    FamilyState state;
    std::array<double, 4> populations{};
};

struct BareTrajectory {
    FamilyState final_state;
    std::array<double, 4> final_populations{};
    double max_excited = 0.0;  // max over all grid nodes
    std::vector<BareSample> samples;
};

// Midpoint piecewise-constant propagation of the initial |3> member
// from t = 0 to t_end.  Samples at the first node at or past each
// requested time (ascending).
BareTrajectory propagate_family(const Eigen::Vector2d& p,
                                const PulseSchedule& sched,
                                const SpeciesConstants& species,
                                const BeamGeometry& geom,
                                const BareOptions& opt = {},
                                const std::vector<double>& sample_times = {});

// Matrix exponential of a general complex 4x4 via Pade(6,6) scaling and
// squaring; used for the non-Hermitian decay-on generator.
Eigen::Matrix4cd expm_pade(const Eigen::Matrix4cd& A);

}  // namespace tripod
