#pragma once

// Thermal momentum grids and deterministic weighted averaging of
// per-sample observables.

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "tripod/darkspace.hpp"
#include "tripod/schedule.hpp"
#include "tripod/species.hpp"

namespace tripod {

enum class GridScheme { gauss_hermite, monte_carlo };

struct ThermalSample {
    Eigen::Vector2d p;  // kg m/s
    double weight = 0.0;
};

struct ThermalGrid {
    std::vector<ThermalSample> samples;
    double temperature = 0.0;  // K
    GridScheme scheme = GridScheme::gauss_hermite;
    std::uint64_t seed = 0;
};

// Maxwell-Boltzmann momentum grid in the x-y plane.  T0 = 0 collapses
// to the single sample p = 0.  Gauss-Hermite uses an order x order
// tensor product; Monte-Carlo draws `order` samples from a fixed-seed
// generator with equal weights.  Throws std::domain_error for T0 < 0
// or order < 1.
ThermalGrid thermal_grid(double T0, GridScheme scheme, int order,
                         std::uint64_t seed, const SpeciesConstants& species);

// Weighted sum of per-sample series, accumulated in sample order so the
// result is bit-reproducible.  A sample whose evaluation throws is
// reported by index and momentum in the rethrown message.
Eigen::ArrayXd ensemble_average(
    const ThermalGrid& grid,
    const std::function<Eigen::ArrayXd(const Eigen::Vector2d&)>& per_sample);

// Thermal-averaged final populations (P1, P2, P3) versus the free time,
// for the dark-subspace model.  The two pulse propagators are computed
// once per momentum sample from a reference schedule with a wide gap;
// between the pulses the generator is diagonal at the frozen asymptotic
// angles, so each free time only contributes two phase factors.  Requires
// phase_jump = 0 (throws std::domain_error).
struct FringeScan {
    std::vector<double> p1, p2, p3;
};
FringeScan fringe_scan(const std::vector<double>& free_times,
                       const ThermalGrid& grid, const PulseSchedule& sched,
                       const SpeciesConstants& species,
                       const BeamGeometry& geom, const DarkOptions& options);

}  // namespace tripod
