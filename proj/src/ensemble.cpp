#include "tripod/ensemble.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace tripod {

namespace {

// Hermite-weight nodes and weights (weight e^{-x^2}) from the
// eigendecomposition of the Jacobi matrix.
void hermite_rule(int n, std::vector<double>& x, std::vector<double>& w) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double b = std::sqrt(0.5 * i);
        J(i, i - 1) = b;
        J(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const double sqrt_pi = std::sqrt(std::acos(-1.0));
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        x[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        w[i] = sqrt_pi * v0 * v0;
    }
}

}  // namespace

ThermalGrid thermal_grid(double T0, GridScheme scheme, int order,
                         std::uint64_t seed,
                         const SpeciesConstants& species) {
    if (T0 < 0.0) throw std::domain_error("temperature must be >= 0");
    if (order < 1) throw std::domain_error("grid order must be >= 1");

    ThermalGrid grid;
    grid.temperature = T0;
    grid.scheme = scheme;
    grid.seed = seed;
    if (T0 == 0.0) {
        grid.samples.push_back({Eigen::Vector2d::Zero(), 1.0});
        return grid;
    }

    const double sigma_p = std::sqrt(species.mass * phys::k_boltzmann * T0);
    if (scheme == GridScheme::gauss_hermite) {
        std::vector<double> x, w;
        hermite_rule(order, x, w);
        const double scale = sigma_p * std::sqrt(2.0);
        const double pi = std::acos(-1.0);
        for (int i = 0; i < order; ++i)
            for (int j = 0; j < order; ++j)
                grid.samples.push_back(
                    {Eigen::Vector2d(scale * x[i], scale * x[j]),
                     w[i] * w[j] / pi});
        return grid;
    }

    // Box-Muller on a fixed-seed engine; std::normal_distribution is not
    // bit-identical across standard libraries.
    std::mt19937_64 rng(seed);
    const double two_pi = 2.0 * std::acos(-1.0);
    auto uniform = [&rng]() {
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    };
    const double w_each = 1.0 / static_cast<double>(order);
    for (int i = 0; i < order; ++i) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        grid.samples.push_back(
            {sigma_p * Eigen::Vector2d(r * std::cos(two_pi * u2),
                                       r * std::sin(two_pi * u2)),
             w_each});
    }
    return grid;
}

FringeScan fringe_scan(const std::vector<double>& free_times,
                       const ThermalGrid& grid, const PulseSchedule& sched,
                       const SpeciesConstants& species,
                       const BeamGeometry& geom, const DarkOptions& options) {
    if (sched.phase_jump != 0.0)
        throw std::domain_error("fringe_scan: phase jump must be zero");
    for (double T : free_times)
        if (T < 0.0)
            throw std::domain_error("fringe_scan: negative free time");

    PulseSchedule ref = sched;
    ref.free_time = 8.0 * sched.sigma_t;
    const double split = ref.t_jump();
    const double t_ref = ref.free_time;

    const DarkFrame end_frame =
        frame_at(Eigen::Vector2d::Zero(), ref.t_end(), ref, geom, species);

    const std::size_t nt = free_times.size();
    FringeScan scan;
    scan.p1.assign(nt, 0.0);
    scan.p2.assign(nt, 0.0);
    scan.p3.assign(nt, 0.0);

    for (std::size_t i = 0; i < grid.samples.size(); ++i) {
        const auto& sample = grid.samples[i];
        DarkOptions opt = options;
        opt.semiclassical_p = sample.p;

        const DarkState psi1 = propagate_dark_segment(
            DarkState(0.0, 1.0), 0.0, split, ref, species, opt);
        Eigen::Matrix2cd u2;
        u2.col(0) = propagate_dark_segment(DarkState(1.0, 0.0), split,
                                           ref.t_end(), ref, species, opt);
        u2.col(1) = propagate_dark_segment(DarkState(0.0, 1.0), split,
                                           ref.t_end(), ref, species, opt);

        const EffectiveOperator gap =
            dark_generator(split, ref, species, opt);
        const double scale = std::abs(gap(0, 0)) + std::abs(gap(1, 1)) +
                             phys::hbar / ref.sigma_t;
        if (std::abs(gap(0, 1)) > 1e-6 * scale) {
            std::ostringstream msg;
            msg << "fringe_scan: gap generator not diagonal for sample " << i
                << " at p = (" << sample.p.x() << ", " << sample.p.y()
                << ") kg m/s";
            throw std::runtime_error(msg.str());
        }
        const double r1 = std::real(gap(0, 0)) / phys::hbar;
        const double r2 = std::real(gap(1, 1)) / phys::hbar;

        for (std::size_t j = 0; j < nt; ++j) {
            const double dT = free_times[j] - t_ref;
            DarkState state;
            state(0) = std::polar(1.0, -r1 * dT) * psi1(0);
            state(1) = std::polar(1.0, -r2 * dT) * psi1(1);
            state = u2 * state;
            const auto pops = bare_projection(state, end_frame);
            scan.p1[j] += sample.weight * pops[0];
            scan.p2[j] += sample.weight * pops[1];
            scan.p3[j] += sample.weight * pops[2];
        }
    }
    return scan;
}

Eigen::ArrayXd ensemble_average(
    const ThermalGrid& grid,
    const std::function<Eigen::ArrayXd(const Eigen::Vector2d&)>& per_sample) {
    Eigen::ArrayXd acc;
    for (std::size_t i = 0; i < grid.samples.size(); ++i) {
        const auto& s = grid.samples[i];
        Eigen::ArrayXd y;
        try {
            y = per_sample(s.p);
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "ensemble sample " << i << " at p = (" << s.p.x() << ", "
                << s.p.y() << ") kg m/s failed: " << e.what();
            throw std::runtime_error(msg.str());
        }
        if (acc.size() == 0) {
            acc = s.weight * y;
        } else {
            acc += s.weight * y;
        }
    }
    return acc;
}

}  // namespace tripod
