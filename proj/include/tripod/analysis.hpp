#pragma once

// Fringe fitting and closed-form figures of merit.

#include <vector>

#include "tripod/darkspace.hpp"
#include "tripod/species.hpp"

namespace tripod {

struct FringeFit {
    double C = 0.0;            // offset
    double A = 0.0;            // amplitude, >= 0
    double tau = 0.0;          // damping time, s
    double omega = 0.0;        // angular frequency, rad/s
    double phi0 = 0.0;         // phase, rad
    double residual_rms = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct CosineFit {
    double C = 0.0;
    double A = 0.0;
    double phi0 = 0.0;
    double residual_rms = 0.0;
    bool phase_defined = true;  // false when the data carry no oscillation
};

// Least-squares fit of y = C + A exp(-t/tau) cos(omega t + phi0).
// Initial guesses come from the discrete spectrum (omega), the mean (C)
// and the log-envelope slope (tau); a deterministic set of extra
// (tau, omega) starts guards against local minima, and the best start
// is polished by a Levenberg-damped Gauss-Newton loop with analytic
// Jacobian, capped at 500 iterations.  Requires at least 12 samples
// (throws std::domain_error); if the fitted frequency resolves fewer
// than 1.5 periods over the scan, the fit is flagged unconverged.
FringeFit fit_damped_cosine(const std::vector<double>& t,
                            const std::vector<double>& y);

// Least-squares fit of y = C + A cos(phi + phi0) with the period fixed
// at 2 pi.  The phase samples must span at least 2 pi (std::domain_error
// otherwise).  Constant data yield A = 0 with phase_defined = false.
CosineFit fit_cosine(const std::vector<double>& phi,
                     const std::vector<double>& y);

// Bloch polar angle 2 atan2(|c_D1|, |c_D2|), in [0, pi]; the ideal
// balanced splitter gives pi/2.  Throws std::domain_error on a zero state.
double polar_angle(const DarkState& state);

// Closed-form thermal dephasing scale sqrt(m pi / (2 k^2 kB T0)).
// Throws std::domain_error for T0 <= 0.
double decoherence_time(double T0, const SpeciesConstants& species);

}  // namespace tripod
