#include "tripod/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace tripod {
namespace {

constexpr double kPi = phys::pi;

double wrap_phase(double phi) {
    double w = std::remainder(phi, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

struct LinearStart {
    double C = 0.0;
    double a = 0.0;   // cosine quadrature
    double b = 0.0;   // sine quadrature
    double tau = 0.0;
    double omega = 0.0;
    double cost = std::numeric_limits<double>::infinity();
};

// For fixed (tau, omega) the model y = C + exp(-t/tau)(a cos wt + b sin wt)
// is linear in (C, a, b); solve the normal equations exactly.
LinearStart solve_linear(const std::vector<double>& t,
                         const std::vector<double>& y,
                         double tau, double omega) {
    const std::size_t n = t.size();
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d aty = Eigen::Vector3d::Zero();
    for (std::size_t j = 0; j < n; ++j) {
        const double env = std::exp(-t[j] / tau);
        const Eigen::Vector3d row(1.0, env * std::cos(omega * t[j]),
                                  env * std::sin(omega * t[j]));
        ata += row * row.transpose();
        aty += row * y[j];
    }
    ata.diagonal().array() += 1e-300;
    const Eigen::Vector3d sol = ata.ldlt().solve(aty);

    LinearStart s;
    s.C = sol(0);
    s.a = sol(1);
    s.b = sol(2);
    s.tau = tau;
    s.omega = omega;
    s.cost = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double env = std::exp(-t[j] / tau);
        const double r = s.C + env * (s.a * std::cos(omega * t[j]) +
                                      s.b * std::sin(omega * t[j])) - y[j];
        s.cost += r * r;
    }
    return s;
}

struct LmResult {
    Eigen::Matrix<double, 5, 1> p;  // C, A, tau, omega, phi0
    double cost = std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;
};

double lm_cost(const std::vector<double>& t, const std::vector<double>& y,
               const Eigen::Matrix<double, 5, 1>& p) {
    double cost = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
        const double r = p(0) + p(1) * std::exp(-t[j] / p(2)) *
                                    std::cos(p(3) * t[j] + p(4)) - y[j];
        cost += r * r;
    }
    return cost;
}

// Levenberg-damped Gauss-Newton on (C, A, tau, omega, phi0) with the
// analytic Jacobian; the damping factor moves by x10 / x0.3 as steps are
// rejected or accepted.
LmResult lm_polish(const std::vector<double>& t, const std::vector<double>& y,
                   const Eigen::Matrix<double, 5, 1>& init, int max_iter) {
    const std::size_t n = t.size();
    LmResult out;
    out.p = init;
    out.cost = lm_cost(t, y, out.p);

    double lambda = 1e-3;
    for (int iter = 0; iter < max_iter; ++iter) {
        out.iterations = iter + 1;
        Eigen::Matrix<double, 5, 5> jtj = Eigen::Matrix<double, 5, 5>::Zero();
        Eigen::Matrix<double, 5, 1> jtr = Eigen::Matrix<double, 5, 1>::Zero();
        const double C = out.p(0), A = out.p(1), tau = out.p(2),
                     omega = out.p(3), phi0 = out.p(4);
        for (std::size_t j = 0; j < n; ++j) {
            const double env = std::exp(-t[j] / tau);
            const double arg = omega * t[j] + phi0;
            const double c = std::cos(arg), s = std::sin(arg);
            const double r = C + A * env * c - y[j];
            Eigen::Matrix<double, 5, 1> g;
            g << 1.0,
                 env * c,
                 A * env * c * t[j] / (tau * tau),
                 -A * env * s * t[j],
                 -A * env * s;
            jtj += g * g.transpose();
            jtr += g * r;
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 8; ++attempt) {
            Eigen::Matrix<double, 5, 5> damped = jtj;
            for (int d = 0; d < 5; ++d)
                damped(d, d) += lambda * (jtj(d, d) + 1e-30);
            const Eigen::Matrix<double, 5, 1> step = damped.ldlt().solve(jtr);
            Eigen::Matrix<double, 5, 1> trial = out.p - step;
            trial(1) = std::abs(trial(1));
            trial(2) = std::abs(trial(2));
            trial(3) = std::abs(trial(3));
            if (!(trial(2) > 0.0) || !std::isfinite(trial(2)))
                trial(2) = out.p(2);
            const double trial_cost = lm_cost(t, y, trial);
            if (trial_cost < out.cost) {
                const double rel = (out.cost - trial_cost) /
                                   (out.cost + 1e-300);
                out.p = trial;
                out.cost = trial_cost;
                lambda = std::max(lambda * 0.3, 1e-12);
                accepted = true;
                if (rel < 1e-13) {
                    out.converged = true;
                    return out;
                }
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) {
            out.converged = true;  // stationary to machine precision
            return out;
        }
    }
    return out;
}

// Power of the mean-subtracted data projected on exp(-i omega t),
// scanned on a fine linear frequency grid; returns up to `count` local
// maxima, strongest first, each refined by a parabolic step.
std::vector<double> spectral_peaks(const std::vector<double>& t,
                                   const std::vector<double>& y,
                                   std::size_t count) {
    const std::size_t n = t.size();
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);

    const double span = t.back() - t.front();
    double dt_min = span;
    for (std::size_t j = 1; j < n; ++j)
        dt_min = std::min(dt_min, t[j] - t[j - 1]);
    const double omega_max = kPi / dt_min;
    const std::size_t bins = 4096;
    const double domega = omega_max / static_cast<double>(bins);

    std::vector<double> power(bins + 1, 0.0);
    for (std::size_t k = 1; k <= bins; ++k) {
        const double w = domega * static_cast<double>(k);
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            acc += (y[j] - mean) * std::polar(1.0, -w * t[j]);
        power[k] = std::norm(acc);
    }

    std::vector<std::size_t> order;
    for (std::size_t k = 2; k + 1 <= bins; ++k)
        if (power[k] > power[k - 1] && power[k] >= power[k + 1])
            order.push_back(k);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return power[a] > power[b]; });

    std::vector<double> peaks;
    for (std::size_t idx : order) {
        if (peaks.size() >= count) break;
        const double pm = power[idx - 1], p0 = power[idx], pp = power[idx + 1];
        const double denom = pm - 2.0 * p0 + pp;
        double shift = 0.0;
        if (std::abs(denom) > 0.0)
            shift = std::clamp(0.5 * (pm - pp) / denom, -0.5, 0.5);
        peaks.push_back(domega * (static_cast<double>(idx) + shift));
    }
    if (peaks.empty()) peaks.push_back(2.0 * kPi / std::max(span, dt_min));
    return peaks;
}

// Damping guess from the slope of log |y - C| at the local maxima of the
// rectified signal; returns 0 when fewer than two usable maxima exist.
double envelope_tau(const std::vector<double>& t,
                    const std::vector<double>& y) {
    const std::size_t n = t.size();
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);

    std::vector<double> tm, lm;
    double top = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        top = std::max(top, std::abs(y[j] - mean));
    if (top <= 0.0) return 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double a = std::abs(y[j] - mean);
        if (a > std::abs(y[j - 1] - mean) && a >= std::abs(y[j + 1] - mean) &&
            a > 1e-3 * top) {
            tm.push_back(t[j]);
            lm.push_back(std::log(a));
        }
    }
    if (tm.size() < 2) return 0.0;

    double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
    const double m = static_cast<double>(tm.size());
    for (std::size_t j = 0; j < tm.size(); ++j) {
        st += tm[j];
        sl += lm[j];
        stt += tm[j] * tm[j];
        stl += tm[j] * lm[j];
    }
    const double denom = m * stt - st * st;
    if (std::abs(denom) < 1e-300) return 0.0;
    const double slope = (m * stl - st * sl) / denom;
    if (slope >= -1e-300) return 0.0;
    return -1.0 / slope;
}

}  // namespace

FringeFit fit_damped_cosine(const std::vector<double>& t,
                            const std::vector<double>& y) {
    if (t.size() != y.size())
        throw std::domain_error("fit_damped_cosine: size mismatch");
    const std::size_t n = t.size();
    if (n < 12)
        throw std::domain_error(
            "fit_damped_cosine: need at least 12 samples");
    if (!std::is_sorted(t.begin(), t.end()))
        throw std::domain_error("fit_damped_cosine: times must be ascending");
    const double span = t.back() - t.front();
    if (!(span > 0.0))
        throw std::domain_error("fit_damped_cosine: zero time span");

    const std::vector<double> omegas = spectral_peaks(t, y, 3);

    std::vector<double> taus = {span / 10.0, span / 3.0, span, 3.0 * span};
    const double tau_env = envelope_tau(t, y);
    if (tau_env > 0.0)
        taus.push_back(std::clamp(tau_env, span * 1e-3, span * 100.0));

    std::vector<LinearStart> starts;
    for (double w : omegas)
        for (double tau : taus) starts.push_back(solve_linear(t, y, tau, w));
    std::sort(starts.begin(), starts.end(),
              [](const LinearStart& a, const LinearStart& b) {
                  return a.cost < b.cost;
              });

    LmResult best;
    const std::size_t polish = std::min<std::size_t>(4, starts.size());
    for (std::size_t i = 0; i < polish; ++i) {
        const LinearStart& s = starts[i];
        Eigen::Matrix<double, 5, 1> p;
        p << s.C, std::hypot(s.a, s.b), s.tau, s.omega,
            std::atan2(-s.b, s.a);
        const LmResult r = lm_polish(t, y, p, 500);
        if (r.cost < best.cost) best = r;
    }

    FringeFit fit;
    fit.C = best.p(0);
    fit.A = best.p(1);
    fit.tau = best.p(2);
    fit.omega = best.p(3);
    fit.phi0 = best.p(4);
    if (fit.A < 0.0) {
        fit.A = -fit.A;
        fit.phi0 += kPi;
    }
    fit.phi0 = wrap_phase(fit.phi0);
    fit.residual_rms = std::sqrt(best.cost / static_cast<double>(n));
    fit.iterations = best.iterations;
    const bool resolved = fit.omega * span >= 1.5 * 2.0 * kPi;
    fit.converged = best.converged && resolved;
    return fit;
}

CosineFit fit_cosine(const std::vector<double>& phi,
                     const std::vector<double>& y) {
    if (phi.size() != y.size())
        throw std::domain_error("fit_cosine: size mismatch");
    const std::size_t n = phi.size();
    if (n < 3) throw std::domain_error("fit_cosine: need at least 3 samples");
    const auto [lo, hi] = std::minmax_element(phi.begin(), phi.end());
    if (*hi - *lo < 2.0 * kPi - 1e-9)
        throw std::domain_error("fit_cosine: phases must span a full period");

    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d aty = Eigen::Vector3d::Zero();
    for (std::size_t j = 0; j < n; ++j) {
        const Eigen::Vector3d row(1.0, std::cos(phi[j]), std::sin(phi[j]));
        ata += row * row.transpose();
        aty += row * y[j];
    }
    const Eigen::Vector3d sol = ata.ldlt().solve(aty);

    CosineFit fit;
    fit.C = sol(0);
    // y = C + A cos(phi + phi0) = C + (A cos phi0) cos phi - (A sin phi0) sin phi
    fit.A = std::hypot(sol(1), sol(2));
    double rss = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double r = sol(0) + sol(1) * std::cos(phi[j]) +
                         sol(2) * std::sin(phi[j]) - y[j];
        rss += r * r;
    }
    fit.residual_rms = std::sqrt(rss / static_cast<double>(n));
    if (fit.A < 1e-12 * std::max(1.0, std::abs(fit.C))) {
        fit.A = 0.0;
        fit.phi0 = 0.0;
        fit.phase_defined = false;
    } else {
        fit.phi0 = wrap_phase(std::atan2(-sol(2), sol(1)));
    }
    return fit;
}

double polar_angle(const DarkState& state) {
    const double n1 = std::abs(state(0));
    const double n2 = std::abs(state(1));
    if (n1 == 0.0 && n2 == 0.0)
        throw std::domain_error("polar_angle: zero state");
    return 2.0 * std::atan2(n1, n2);
}

double decoherence_time(double T0, const SpeciesConstants& species) {
    if (!(T0 > 0.0))
        throw std::domain_error("decoherence_time: temperature must be positive");
    const double k = species.wave_number;
    return std::sqrt(species.mass * kPi /
                     (2.0 * k * k * phys::k_boltzmann * T0));
}

}  // namespace tripod
