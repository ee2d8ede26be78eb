#include "tripod/darkspace.hpp"

#include <cmath>

namespace tripod {

namespace {
const std::complex<double> I{0.0, 1.0};
}

DarkFrame dark_frame(const MixingAngles& a, const std::array<double, 3>& S) {
    const std::complex<double> e31 = std::polar(1.0, S[2] - S[0]);
    const std::complex<double> e32 = std::polar(1.0, S[2] - S[1]);
    const double st = std::sin(a.theta), ct = std::cos(a.theta);
    const double sp = std::sin(a.phi), cp = std::cos(a.phi);
    DarkFrame f;
    f.c(0, 0) = sp * e31;
    f.c(0, 1) = -cp * e32;
    f.c(0, 2) = 0.0;
    f.c(0, 3) = 0.0;
    f.c(1, 0) = ct * cp * e31;
    f.c(1, 1) = ct * sp * e32;
    f.c(1, 2) = -st;
    f.c(1, 3) = 0.0;
    return f;
}

DarkFrame frame_at(const Eigen::Vector2d& r, double t,
                   const PulseSchedule& sched, const BeamGeometry& geom,
                   const SpeciesConstants& species) {
    const auto base = beam_phases(t, sched, geom);
    std::array<double, 3> S;
    for (int a = 0; a < 3; ++a)
        S[a] = species.wave_number * geom.direction[a].dot(r) + base[a];
    return dark_frame(angles_at(t, sched), S);
}

EffectiveOperator scalar_potential_Q(double theta, double phi,
                                     const SpeciesConstants& species,
                                     QSign sign) {
    const double pref =
        species.recoil_momentum * species.recoil_momentum / (2.0 * species.mass);
    const double sp = std::sin(phi), cp = std::cos(phi), ct = std::cos(theta);
    EffectiveOperator Q;
    Q(0, 0) = 2.0 * (1.0 + sp * sp);
    Q(0, 1) = ct * std::sin(2.0 * phi);
    Q(1, 0) = Q(0, 1);
    Q(1, 1) = 2.0 * ct * ct * (1.0 + cp * cp);
    Q *= (sign == QSign::positive ? pref : -pref);
    return Q;
}

EffectiveOperator rotation_coupling_w(double theta, double dphi_dt,
                                      WSign sign) {
    const double c = phys::hbar * std::cos(theta) * dphi_dt *
                     (sign == WSign::negative ? -1.0 : 1.0);
    EffectiveOperator w;
    w(0, 0) = 0.0;
    w(0, 1) = -I * c;
    w(1, 0) = I * c;
    w(1, 1) = 0.0;
    return w;
}

std::pair<EffectiveOperator, EffectiveOperator> gauge_potential_A(
    double theta, double phi, const SpeciesConstants& species) {
    const double hk = species.recoil_momentum;
    const double sp = std::sin(phi), cp = std::cos(phi), ct = std::cos(theta);
    const double s2 = std::sin(2.0 * phi);
    EffectiveOperator Ax, Ay;
    Ax(0, 0) = cp * cp;
    Ax(1, 1) = ct * ct * sp * sp;
    Ax(0, 1) = -0.5 * ct * s2;
    Ax(1, 0) = Ax(0, 1);
    Ay(0, 0) = -(1.0 + sp * sp);
    Ay(1, 1) = -ct * ct * (1.0 + cp * cp);
    Ay(0, 1) = -0.5 * ct * s2;
    Ay(1, 0) = Ay(0, 1);
    return {hk * Ax, hk * Ay};
}

std::array<double, 4> bare_projection(const DarkState& state,
                                      const DarkFrame& frame) {
    std::array<double, 4> pops{};
    for (int a = 0; a < 4; ++a) {
        const std::complex<double> amp =
            state(0) * frame.c(0, a) + state(1) * frame.c(1, a);
        pops[a] = std::norm(amp);
    }
    return pops;
}

DarkState dark_projection(const Eigen::Vector4cd& psi, const DarkFrame& frame) {
    DarkState c;
    for (int mu = 0; mu < 2; ++mu) {
        std::complex<double> s = 0.0;
        for (int a = 0; a < 4; ++a) s += std::conj(frame.c(mu, a)) * psi(a);
        c(mu) = s;
    }
    return c;
}

EffectiveOperator dark_generator(double t, const PulseSchedule& sched,
                                 const SpeciesConstants& species,
                                 const DarkOptions& opt) {
    const MixingAngles a = angles_at(t, sched);
    EffectiveOperator H = EffectiveOperator::Zero();
    if (opt.include_Q)
        H += scalar_potential_Q(a.theta, a.phi, species, opt.q_sign);
    if (opt.include_w)
        H += rotation_coupling_w(a.theta, a.dphi_dt, opt.w_sign);
    if (opt.semiclassical_p) {
        const Eigen::Vector2d p = *opt.semiclassical_p;
        const auto [Ax, Ay] = gauge_potential_A(a.theta, a.phi, species);
        H += (p.squaredNorm() / (2.0 * species.mass)) *
             EffectiveOperator::Identity();
        H -= (Ax * p.x() + Ay * p.y()) / species.mass;
    }
    return H;
}

Eigen::Matrix2cd pauli_exponential(const EffectiveOperator& H, double dt) {
    const double a = 0.5 * std::real(H(0, 0) + H(1, 1));
    const double bz = std::real(H(0, 0)) - a;
    const double bx = std::real(H(0, 1));
    const double by = -std::imag(H(0, 1));
    const double bn = std::sqrt(bx * bx + by * by + bz * bz);
    const double alpha = a * dt / phys::hbar;
    const double beta = bn * dt / phys::hbar;
    const double c = std::cos(beta);
    const double sinc = beta < 1e-12 ? 1.0 - beta * beta / 6.0
                                     : std::sin(beta) / beta;
    const double s = sinc * dt / phys::hbar;
    const std::complex<double> g = std::polar(1.0, -alpha);
    Eigen::Matrix2cd U;
    U(0, 0) = g * (c - I * s * bz);
    U(0, 1) = g * (-I * s * (bx - I * by));
    U(1, 0) = g * (-I * s * (bx + I * by));
    U(1, 1) = g * (c + I * s * bz);
    return U;
}

namespace {

struct DarkRun {
    DarkState state;
    Eigen::Matrix2cd unitary;
    std::vector<DarkSample> samples;
};

DarkRun run_dark(const PulseSchedule& sched, const SpeciesConstants& species,
                 const DarkOptions& opt, double dt_target,
                 const std::vector<double>& sample_times) {
    const double t_end = opt.t_end.value_or(sched.t_end());
    const long n = std::max(1L, std::lround(std::ceil(t_end / dt_target)));
    const double dt = t_end / static_cast<double>(n);
    const long jump_node = std::lround(sched.t_jump() / dt);

    DarkRun run;
    run.state = DarkState(0.0, 1.0);
    run.unitary = Eigen::Matrix2cd::Identity();
    std::size_t next_sample = 0;

    auto record_until = [&](double t_node) {
        while (next_sample < sample_times.size() &&
               t_node >= sample_times[next_sample]) {
            run.samples.push_back({t_node, run.state, run.unitary});
            ++next_sample;
        }
    };

    record_until(0.0);
    for (long i = 0; i < n; ++i) {
        if (i == jump_node && sched.phase_jump != 0.0) {
            Eigen::Matrix2cd M = Eigen::Matrix2cd::Identity();
            M(0, 0) = std::polar(1.0, -sched.phase_jump);
            run.state = M * run.state;
            run.unitary = M * run.unitary;
            record_until(static_cast<double>(i) * dt);
        }
        const double tm = (static_cast<double>(i) + 0.5) * dt;
        const Eigen::Matrix2cd U =
            pauli_exponential(dark_generator(tm, sched, species, opt), dt);
        run.state = U * run.state;
        run.unitary = U * run.unitary;
        record_until(static_cast<double>(i + 1) * dt);
    }
    while (next_sample < sample_times.size()) {
        run.samples.push_back({t_end, run.state, run.unitary});
        ++next_sample;
    }
    return run;
}

}  // namespace

DarkTrajectory propagate_dark(const PulseSchedule& sched,
                              const SpeciesConstants& species,
                              const DarkOptions& opt,
                              const std::vector<double>& sample_times) {
    const double dt_target = sched.sigma_t / opt.step_divisor;
    DarkRun run = run_dark(sched, species, opt, dt_target, sample_times);

    if (opt.check_convergence) {
        const DarkRun half = run_dark(sched, species, opt, 0.5 * dt_target, {});
        const DarkFrame f = frame_at(Eigen::Vector2d::Zero(),
                                     opt.t_end.value_or(sched.t_end()),
                                     sched, BeamGeometry::standard_tripod(),
                                     species);
        const auto p0 = bare_projection(run.state, f);
        const auto p1 = bare_projection(half.state, f);
        for (int a = 0; a < 4; ++a)
            if (std::abs(p0[a] - p1[a]) > 1e-6)
                throw ConvergenceError(
                    "dark propagation not converged at dt = sigma_t/" +
                    std::to_string(opt.step_divisor));
    }

    return {run.state, run.unitary, std::move(run.samples)};
}

DarkState propagate_dark_segment(const DarkState& initial, double t0,
                                 double t1, const PulseSchedule& sched,
                                 const SpeciesConstants& species,
                                 const DarkOptions& opt) {
    if (!(t1 >= t0))
        throw std::domain_error("propagate_dark_segment: t1 < t0");
    const double dt_target = sched.sigma_t / opt.step_divisor;
    const long n =
        std::max(1L, std::lround(std::ceil((t1 - t0) / dt_target)));
    const double dt = (t1 - t0) / static_cast<double>(n);
    DarkState state = initial;
    for (long i = 0; i < n; ++i) {
        const double tm = t0 + (static_cast<double>(i) + 0.5) * dt;
        state = pauli_exponential(dark_generator(tm, sched, species, opt), dt) *
                state;
    }
    return state;
}

}  // namespace tripod
