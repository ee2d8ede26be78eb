#include "tripod/baremodel.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace tripod {

namespace {
const std::complex<double> I{0.0, 1.0};
}

MomentumFamily momentum_family(const Eigen::Vector2d& p,
                               const SpeciesConstants& species,
                               const BeamGeometry& geom) {
    const double hk = species.recoil_momentum;
    MomentumFamily f;
    f.p = p;
    for (int a = 0; a < 3; ++a)
        f.offset[a] = hk * (geom.direction[2] - geom.direction[a]);
    f.offset[3] = hk * geom.direction[2];
    for (int a = 0; a < 4; ++a)
        f.kinetic[a] = (p + f.offset[a]).squaredNorm() / (2.0 * species.mass);
    return f;
}

Eigen::Matrix4cd family_hamiltonian(const Eigen::Vector2d& p, double t,
                                    const PulseSchedule& sched,
                                    const BeamGeometry& geom,
                                    const SpeciesConstants& species,
                                    bool decay) {
    const MomentumFamily fam = momentum_family(p, species, geom);
    const RabiTriple rabi = rabi_at(t, sched, geom);
    Eigen::Matrix4cd H = Eigen::Matrix4cd::Zero();
    for (int a = 0; a < 4; ++a) H(a, a) = fam.kinetic[a];
    for (int a = 0; a < 3; ++a) {
        H(3, a) = phys::hbar * rabi.omega[a];
        H(a, 3) = std::conj(H(3, a));
    }
    if (decay) H(3, 3) -= I * phys::hbar * species.linewidth / 2.0;
    return H;
}

Eigen::Matrix4cd expm_pade(const Eigen::Matrix4cd& A) {
    static const double c[7] = {1.0,        1.0 / 2.0,    5.0 / 44.0,
                                1.0 / 66.0, 1.0 / 792.0,  1.0 / 15840.0,
                                1.0 / 665280.0};
    const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
    int s = 0;
    if (norm > 0.5) s = std::max(0, static_cast<int>(std::ceil(std::log2(norm / 0.5))));
    const Eigen::Matrix4cd As = A / std::pow(2.0, s);

    Eigen::Matrix4cd P = Eigen::Matrix4cd::Identity();
    Eigen::Matrix4cd Qm = Eigen::Matrix4cd::Identity();
    Eigen::Matrix4cd term = Eigen::Matrix4cd::Identity();
    double sign = 1.0;
    for (int i = 1; i <= 6; ++i) {
        term = term * As;
        sign = -sign;
        P += c[i] * term;
        Qm += c[i] * sign * term;
    }
    Eigen::Matrix4cd E = Qm.partialPivLu().solve(P);
    for (int i = 0; i < s; ++i) E = E * E;
    return E;
}

namespace {

struct BareRun {
    FamilyState state;
    double max_excited = 0.0;
    std::vector<BareSample> samples;
};

std::array<double, 4> populations_of(const FamilyState& psi) {
    return {std::norm(psi(0)), std::norm(psi(1)), std::norm(psi(2)),
            std::norm(psi(3))};
}

BareRun run_family(const Eigen::Vector2d& p, const PulseSchedule& sched,
                   const SpeciesConstants& species, const BeamGeometry& geom,
                   const BareOptions& opt, double dt_target,
                   const std::vector<double>& sample_times) {
    const double t_end = opt.t_end.value_or(sched.t_end());
    const long n = std::max(1L, std::lround(std::ceil(t_end / dt_target)));
    const double dt = t_end / static_cast<double>(n);

    BareRun run;
    run.state = FamilyState(0.0, 0.0, 1.0, 0.0);
    std::size_t next_sample = 0;

    auto record_until = [&](double t_node) {
        while (next_sample < sample_times.size() &&
               t_node >= sample_times[next_sample]) {
            run.samples.push_back({t_node, run.state, populations_of(run.state)});
            ++next_sample;
        }
    };

    record_until(0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es;
    for (long i = 0; i < n; ++i) {
        const double tm = (static_cast<double>(i) + 0.5) * dt;
        const Eigen::Matrix4cd H =
            family_hamiltonian(p, tm, sched, geom, species, opt.decay);
        if (opt.decay) {
            run.state = expm_pade(-I * dt / phys::hbar * H) * run.state;
        } else {
            es.compute(H);
            const Eigen::Vector4cd phases =
                ((-I * (dt / phys::hbar)) *
                 es.eigenvalues().cast<std::complex<double>>().array())
                    .exp()
                    .matrix();
            run.state = es.eigenvectors() *
                        (phases.asDiagonal() *
                         (es.eigenvectors().adjoint() * run.state));
        }
        run.max_excited = std::max(run.max_excited, std::norm(run.state(3)));
        record_until(static_cast<double>(i + 1) * dt);
    }
    while (next_sample < sample_times.size()) {
        run.samples.push_back({t_end, run.state, populations_of(run.state)});
        ++next_sample;
    }
    return run;
}

}  // namespace

BareTrajectory propagate_family(const Eigen::Vector2d& p,
                                const PulseSchedule& sched,
                                const SpeciesConstants& species,
                                const BeamGeometry& geom,
                                const BareOptions& opt,
                                const std::vector<double>& sample_times) {
    const double omega_max = std::sqrt(sched.peak[0] * sched.peak[0] +
                                       sched.peak[1] * sched.peak[1] +
                                       sched.peak[2] * sched.peak[2]);
    double dt_target = sched.sigma_t / opt.step_divisor;
    if (omega_max > 0.0)
        dt_target = std::min(dt_target, 1.0 / (50.0 * omega_max));

    BareRun run = run_family(p, sched, species, geom, opt, dt_target,
                             sample_times);
    if (opt.check_convergence) {
        const BareRun half =
            run_family(p, sched, species, geom, opt, 0.5 * dt_target, {});
        const auto p0 = populations_of(run.state);
        const auto p1 = populations_of(half.state);
        for (int a = 0; a < 4; ++a)
            if (std::abs(p0[a] - p1[a]) > 1e-6)
                throw ConvergenceError(
                    "family propagation not converged at dt = " +
                    std::to_string(dt_target) + " s");
    }
    return {run.state, populations_of(run.state), run.max_excited,
            std::move(run.samples)};
}

}  // namespace tripod
