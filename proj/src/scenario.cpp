#include "tripod/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "tripod/analysis.hpp"
#include "tripod/baremodel.hpp"
#include "tripod/darkspace.hpp"
#include "tripod/ensemble.hpp"
#include "tripod/io.hpp"
#include "tripod/species.hpp"

namespace tripod {
namespace {

constexpr double kPi = phys::pi;

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw std::runtime_error("config key '" + key +
                                 "': expected a number, got '" + value + "'");
    return v;
}

long long parse_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw std::runtime_error("config key '" + key +
                                 "': expected an integer, got '" + value + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw std::runtime_error("config key '" + key +
                                 "': expected an unsigned integer, got '" +
                                 value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::runtime_error("config key '" + key +
                             "': expected true/false, got '" + value + "'");
}

SpeciesConstants species_of(const ScenarioConfig& cfg) {
    return derive_species_constants(cfg.mass_kg, cfg.wavelength_m,
                                    cfg.linewidth_rad_s);
}

PulseSchedule schedule_of(const ScenarioConfig& cfg) {
    PulseSchedule sched;
    sched.peak = {cfg.omega0_rad_s[0], cfg.omega0_rad_s[1],
                  cfg.omega0_rad_s[2]};
    sched.sigma_t = cfg.sigma_t_s;
    sched.eta = cfg.eta;
    sched.free_time = cfg.free_time_s;
    sched.mirror_second = cfg.mirror_second_pulse;
    sched.phase_jump = cfg.phase_jump_rad;
    return sched;
}

// Scenario defaults for fields left at their sentinels.
double resolved_temperature_nk(const ScenarioConfig& cfg) {
    if (cfg.temperature_nk >= 0.0) return cfg.temperature_nk;
    if (cfg.scenario == "fig2d" || cfg.scenario == "fig3b") return 50.0;
    return 0.0;
}

int resolved_grid_order(const ScenarioConfig& cfg) {
    if (cfg.grid_order > 0) return cfg.grid_order;
    return cfg.scenario == "fig3b" ? 40 : 20;
}

GridScheme scheme_of(const ScenarioConfig& cfg) {
    return cfg.grid_scheme == "monte_carlo" ? GridScheme::monte_carlo
                                            : GridScheme::gauss_hermite;
}

bool wants_bare(const ScenarioConfig& cfg) {
    return cfg.model == "bare" || cfg.model == "both";
}

bool wants_effective(const ScenarioConfig& cfg) {
    return cfg.model == "effective" || cfg.model == "both";
}

std::string temp_label(double t_nk) {
    std::ostringstream os;
    if (t_nk == std::floor(t_nk)) {
        os << static_cast<long long>(t_nk);
    } else {
        std::ostringstream raw;
        raw << t_nk;
        std::string s = raw.str();
        std::replace(s.begin(), s.end(), '.', 'p');
        os << s;
    }
    os << "nK";
    return os.str();
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return v;
}

DarkOptions effective_options(const Eigen::Vector2d& p) {
    DarkOptions opt;
    opt.semiclassical_p = p;
    return opt;
}

// Final bare-basis populations of the dark-subspace model.
std::array<double, 4> effective_final(const Eigen::Vector2d& p,
                                      const PulseSchedule& sched,
                                      const SpeciesConstants& species,
                                      const BeamGeometry& geom) {
    const DarkTrajectory run =
        propagate_dark(sched, species, effective_options(p));
    const DarkFrame frame =
        frame_at(Eigen::Vector2d::Zero(), sched.t_end(), sched, geom, species);
    return bare_projection(run.final_state, frame);
}

void echo_config(const ScenarioConfig& cfg, io::JsonObject& summary) {
    summary.emplace_back("config_scenario", cfg.scenario);
    summary.emplace_back("config_mass_kg", cfg.mass_kg);
    summary.emplace_back("config_wavelength_m", cfg.wavelength_m);
    summary.emplace_back("config_linewidth_rad_s", cfg.linewidth_rad_s);
    summary.emplace_back("config_omega0_1_rad_s", cfg.omega0_rad_s[0]);
    summary.emplace_back("config_omega0_2_rad_s", cfg.omega0_rad_s[1]);
    summary.emplace_back("config_omega0_3_rad_s", cfg.omega0_rad_s[2]);
    summary.emplace_back("config_sigma_t_s", cfg.sigma_t_s);
    summary.emplace_back("config_eta", cfg.eta);
    summary.emplace_back("config_free_time_s", cfg.free_time_s);
    summary.emplace_back("config_mirror_second_pulse", cfg.mirror_second_pulse);
    summary.emplace_back("config_phase_jump_rad", cfg.phase_jump_rad);
    summary.emplace_back("config_temperature_nk", resolved_temperature_nk(cfg));
    summary.emplace_back("config_grid_scheme", cfg.grid_scheme);
    summary.emplace_back("config_grid_order",
                         static_cast<std::int64_t>(resolved_grid_order(cfg)));
    summary.emplace_back("config_seed", std::to_string(cfg.seed));
    summary.emplace_back("config_model", cfg.model);
    summary.emplace_back("config_decay", cfg.decay);
}

void add_fit(const std::string& prefix, const FringeFit& fit,
             io::JsonObject& summary) {
    summary.emplace_back(prefix + "_C", fit.C);
    summary.emplace_back(prefix + "_A", fit.A);
    summary.emplace_back(prefix + "_tau_s", fit.tau);
    summary.emplace_back(prefix + "_omega_rad_s", fit.omega);
    summary.emplace_back(prefix + "_phi0_rad", fit.phi0);
    summary.emplace_back(prefix + "_residual_rms", fit.residual_rms);
    summary.emplace_back(prefix + "_converged", fit.converged);
}

void finish(const ScenarioConfig& cfg, ScenarioResult& result,
            io::JsonObject& summary) {
    bool ok = true;
    for (const auto& [key, value] : summary)
        if (key.rfind("pass_", 0) == 0 && std::holds_alternative<bool>(value))
            ok = ok && std::get<bool>(value);
    summary.emplace_back("thresholds_ok", ok);
    echo_config(cfg, summary);
    const std::string path = join_path(cfg.out_dir, "summary.json");
    io::write_json(path, summary);
    result.files.push_back("summary.json");
    result.summary = std::move(summary);
    result.thresholds_ok = ok;
}

ScenarioResult run_fig2d(const ScenarioConfig& cfg) {
    const SpeciesConstants species = species_of(cfg);
    const BeamGeometry geom = BeamGeometry::standard_tripod();
    const PulseSchedule sched = schedule_of(cfg);
    const double t_last = std::max(sched.t_end(), 48e-6);
    const std::vector<double> times = linspace(0.0, t_last, 481);
    const double temp_nk = resolved_temperature_nk(cfg);

    ScenarioResult result;
    io::JsonObject summary;
    summary.emplace_back("scenario", std::string("fig2d"));

    std::vector<double> temps = {0.0};
    if (temp_nk > 0.0) temps.push_back(temp_nk);

    std::array<double, 4> snap0{}, snap18{}, snap48{};
    for (double t_nk : temps) {
        ThermalGrid grid =
            thermal_grid(t_nk * 1e-9, scheme_of(cfg), resolved_grid_order(cfg),
                         cfg.seed, species);
        if (wants_bare(cfg)) {
            auto per_sample = [&](const Eigen::Vector2d& p) {
                BareOptions opt;
                opt.decay = cfg.decay;
                opt.t_end = t_last;
                const BareTrajectory run =
                    propagate_family(p, sched, species, geom, opt, times);
                Eigen::ArrayXd out(4 * times.size());
                for (std::size_t i = 0; i < times.size(); ++i)
                    for (int a = 0; a < 4; ++a)
                        out(4 * i + a) = run.samples[i].populations[a];
                return out;
            };
            const Eigen::ArrayXd avg = ensemble_average(grid, per_sample);
            io::Table table;
            table.header = {"t_s", "P1", "P2", "P3", "Pe"};
            table.columns.assign(5, {});
            for (std::size_t i = 0; i < times.size(); ++i) {
                table.columns[0].push_back(times[i]);
                for (int a = 0; a < 4; ++a)
                    table.columns[1 + a].push_back(avg(4 * i + a));
            }
            const std::string name =
                "fig2d_bare_" + temp_label(t_nk) + ".csv";
            io::write_csv(join_path(cfg.out_dir, name), table);
            result.files.push_back(name);

            if (t_nk == 0.0) {
                auto snapshot = [&](double t) {
                    std::array<double, 4> s{};
                    std::size_t best = 0;
                    for (std::size_t i = 0; i < times.size(); ++i)
                        if (std::abs(times[i] - t) <
                            std::abs(times[best] - t))
                            best = i;
                    for (int a = 0; a < 4; ++a)
                        s[a] = avg(4 * best + a);
                    return s;
                };
                snap0 = snapshot(0.0);
                snap18 = snapshot(18e-6);
                snap48 = snapshot(48e-6);
            }
        }
        if (wants_effective(cfg)) {
            std::vector<DarkFrame> frames;
            frames.reserve(times.size());
            for (double t : times)
                frames.push_back(frame_at(Eigen::Vector2d::Zero(), t, sched,
                                          geom, species));
            auto per_sample = [&](const Eigen::Vector2d& p) {
                DarkOptions opt = effective_options(p);
                opt.t_end = t_last;
                const DarkTrajectory run =
                    propagate_dark(sched, species, opt, times);
                Eigen::ArrayXd out(4 * times.size());
                for (std::size_t i = 0; i < times.size(); ++i) {
                    const auto pops =
                        bare_projection(run.samples[i].state, frames[i]);
                    for (int a = 0; a < 4; ++a) out(4 * i + a) = pops[a];
                }
                return out;
            };
            const Eigen::ArrayXd avg = ensemble_average(grid, per_sample);
            io::Table table;
            table.header = {"t_s", "P1", "P2", "P3", "Pe"};
            table.columns.assign(5, {});
            for (std::size_t i = 0; i < times.size(); ++i) {
                table.columns[0].push_back(times[i]);
                for (int a = 0; a < 4; ++a)
                    table.columns[1 + a].push_back(avg(4 * i + a));
            }
            const std::string name =
                "fig2d_effective_" + temp_label(t_nk) + ".csv";
            io::write_csv(join_path(cfg.out_dir, name), table);
            result.files.push_back(name);
        }
    }

    if (wants_bare(cfg)) {
        summary.emplace_back("snapshot_0us_P3", snap0[2]);
        summary.emplace_back("snapshot_18us_P1", snap18[0]);
        summary.emplace_back("snapshot_18us_P2", snap18[1]);
        summary.emplace_back("snapshot_18us_P3", snap18[2]);
        summary.emplace_back("snapshot_48us_P1", snap48[0]);
        summary.emplace_back("snapshot_48us_P2", snap48[1]);
        summary.emplace_back("snapshot_48us_P3", snap48[2]);
        summary.emplace_back("pass_start_in_port3", snap0[2] > 0.99);
        summary.emplace_back("pass_split_ports_1_3",
                             snap18[0] > 0.3 && snap18[2] > 0.3 &&
                                 snap18[1] < 0.05);
        summary.emplace_back("pass_exit_ports_2_3", snap48[0] < 0.05);
    }
    finish(cfg, result, summary);
    return result;
}

ScenarioResult run_fig3a(const ScenarioConfig& cfg) {
    const SpeciesConstants species = species_of(cfg);
    const BeamGeometry geom = BeamGeometry::standard_tripod();
    const double temp_nk = resolved_temperature_nk(cfg);
    const int npts = cfg.sweep_points > 0 ? cfg.sweep_points : 41;
    const bool custom_range = cfg.sweep_max > cfg.sweep_min;
    const double lo = custom_range ? cfg.sweep_min : 0.0;
    const double hi = custom_range ? cfg.sweep_max : 4.0 * kPi;
    const std::vector<double> phis = linspace(lo, hi, npts);

    ThermalGrid grid =
        thermal_grid(temp_nk * 1e-9, scheme_of(cfg), resolved_grid_order(cfg),
                     cfg.seed, species);

    ScenarioResult result;
    io::JsonObject summary;
    summary.emplace_back("scenario", std::string("fig3a"));

    for (const std::string model : {std::string("bare"),
                                    std::string("effective")}) {
        if ((model == "bare" && !wants_bare(cfg)) ||
            (model == "effective" && !wants_effective(cfg)))
            continue;
        io::Table table;
        table.header = {"phi_rad", "P1", "P2", "P3"};
        table.columns.assign(4, {});
        for (double phi : phis) {
            PulseSchedule sched = schedule_of(cfg);
            sched.phase_jump = phi;
            auto per_sample = [&](const Eigen::Vector2d& p) {
                std::array<double, 4> pops{};
                if (model == "bare") {
                    BareOptions opt;
                    opt.decay = cfg.decay;
                    pops = propagate_family(p, sched, species, geom, opt)
                               .final_populations;
                } else {
                    pops = effective_final(p, sched, species, geom);
                }
                Eigen::ArrayXd out(3);
                out << pops[0], pops[1], pops[2];
                return out;
            };
            const Eigen::ArrayXd avg = ensemble_average(grid, per_sample);
            table.columns[0].push_back(phi);
            for (int a = 0; a < 3; ++a)
                table.columns[1 + a].push_back(avg(a));
        }
        const std::string name = "fig3a_" + model + ".csv";
        io::write_csv(join_path(cfg.out_dir, name), table);
        result.files.push_back(name);

        const CosineFit fit = fit_cosine(table.columns[0], table.columns[3]);
        summary.emplace_back("fit_" + model + "_C", fit.C);
        summary.emplace_back("fit_" + model + "_A", fit.A);
        summary.emplace_back("fit_" + model + "_phi0_rad", fit.phi0);
        summary.emplace_back("fit_" + model + "_residual_rms",
                             fit.residual_rms);
        summary.emplace_back("fit_" + model + "_phase_defined",
                             fit.phase_defined);
        summary.emplace_back("pass_" + model + "_residual",
                             fit.residual_rms < 0.02);
    }
    finish(cfg, result, summary);
    return result;
}

ScenarioResult run_fig3b(const ScenarioConfig& cfg) {
    const SpeciesConstants species = species_of(cfg);
    const BeamGeometry geom = BeamGeometry::standard_tripod();
    const PulseSchedule sched = schedule_of(cfg);
    if (sched.phase_jump != 0.0)
        throw std::runtime_error("fig3b scans the free time at zero jump");
    const double temp_nk = resolved_temperature_nk(cfg);
    const int npts = cfg.sweep_points > 0 ? cfg.sweep_points : 121;
    const double hi = cfg.sweep_max > cfg.sweep_min ? cfg.sweep_max : 120e-6;
    const double lo = cfg.sweep_max > cfg.sweep_min ? cfg.sweep_min : 0.0;
    const std::vector<double> free_times = linspace(lo, hi, npts);
    const double omega_recoil = 4.0 * species.recoil_frequency;

    ScenarioResult result;
    io::JsonObject summary;
    summary.emplace_back("scenario", std::string("fig3b"));
    summary.emplace_back("omega_recoil_fringe_rad_s", omega_recoil);

    auto write_scan = [&](const std::string& name,
                          const std::vector<double>& p1,
                          const std::vector<double>& p2,
                          const std::vector<double>& p3) {
        io::Table table;
        table.header = {"T_s", "P1", "P2", "P3"};
        table.columns = {free_times, p1, p2, p3};
        io::write_csv(join_path(cfg.out_dir, name), table);
        result.files.push_back(name);
    };

    if (wants_bare(cfg)) {
        std::vector<double> p1, p2, p3;
        for (double T : free_times) {
            PulseSchedule s = sched;
            s.free_time = T;
            BareOptions opt;
            opt.decay = cfg.decay;
            const auto pops =
                propagate_family(Eigen::Vector2d::Zero(), s, species, geom,
                                 opt)
                    .final_populations;
            p1.push_back(pops[0]);
            p2.push_back(pops[1]);
            p3.push_back(pops[2]);
        }
        write_scan("fig3b_bare_0nK.csv", p1, p2, p3);
        const FringeFit fit = fit_damped_cosine(free_times, p3);
        add_fit("fit_bare_0nK", fit, summary);
        const double dev =
            std::abs(fit.omega - omega_recoil) / omega_recoil;
        summary.emplace_back("fit_bare_0nK_omega_dev", dev);
        summary.emplace_back("pass_bare_frequency", dev < 0.02);
    }

    if (wants_effective(cfg)) {
        const ThermalGrid zero =
            thermal_grid(0.0, scheme_of(cfg), 1, cfg.seed, species);
        const FringeScan scan0 = fringe_scan(free_times, zero, sched, species,
                                             geom, effective_options(Eigen::Vector2d::Zero()));
        write_scan("fig3b_effective_0nK.csv", scan0.p1, scan0.p2, scan0.p3);
        const FringeFit fit0 = fit_damped_cosine(free_times, scan0.p3);
        add_fit("fit_effective_0nK", fit0, summary);
        const double dev =
            std::abs(fit0.omega - omega_recoil) / omega_recoil;
        summary.emplace_back("fit_effective_0nK_omega_dev", dev);
        summary.emplace_back("pass_effective_frequency", dev < 0.02);

        if (temp_nk > 0.0) {
            const ThermalGrid grid =
                thermal_grid(temp_nk * 1e-9, scheme_of(cfg),
                             resolved_grid_order(cfg), cfg.seed, species);
            const FringeScan scan =
                fringe_scan(free_times, grid, sched, species, geom,
                            effective_options(Eigen::Vector2d::Zero()));
            write_scan("fig3b_effective_" + temp_label(temp_nk) + ".csv",
                       scan.p1, scan.p2, scan.p3);
            const FringeFit fit = fit_damped_cosine(free_times, scan.p3);
            add_fit("fit_thermal", fit, summary);
            summary.emplace_back("decoherence_time_s",
                                 decoherence_time(temp_nk * 1e-9, species));
            summary.emplace_back("pass_thermal_tau_range",
                                 fit.tau >= 30e-6 && fit.tau <= 90e-6);
        }
    }
    finish(cfg, result, summary);
    return result;
}

ScenarioResult run_fig4(const ScenarioConfig& cfg) {
    const SpeciesConstants species = species_of(cfg);
    const BeamGeometry geom = BeamGeometry::standard_tripod();
    std::vector<double> sigmas;
    if (cfg.sweep_points > 0 && cfg.sweep_max > cfg.sweep_min) {
        sigmas = linspace(cfg.sweep_min, cfg.sweep_max, cfg.sweep_points);
    } else {
        sigmas = {0.5e-6, 1e-6, 1.5e-6, 2e-6,    2.5e-6, 3e-6,  4e-6,
                  5e-6,   7.5e-6, 10e-6, 12.5e-6, 15e-6,  20e-6, 25e-6};
    }

    ScenarioResult result;
    io::JsonObject summary;
    summary.emplace_back("scenario", std::string("fig4"));

    io::Table table;
    table.header = {"sigma_t_s", "dtheta_rad", "theta_bare_rad",
                    "theta_effective_rad", "P1", "P2", "P3", "Pe"};
    table.columns.assign(8, {});
    double dtheta_1us = 0.0;
    bool have_1us = false;
    for (double sigma : sigmas) {
        PulseSchedule sched = schedule_of(cfg);
        sched.sigma_t = sigma;

        BareOptions bare_opt;
        bare_opt.decay = cfg.decay;
        bare_opt.t_end = 8.0 * sigma;
        const BareTrajectory bare = propagate_family(
            Eigen::Vector2d::Zero(), sched, species, geom, bare_opt);
        const auto pops = bare.final_populations;
        const double theta_bare =
            2.0 * std::atan2(std::sqrt(pops[0]), std::sqrt(pops[2]));

        DarkOptions dark_opt = effective_options(Eigen::Vector2d::Zero());
        dark_opt.t_end = 8.0 * sigma;
        const DarkTrajectory dark = propagate_dark(sched, species, dark_opt);
        const DarkFrame frame = frame_at(Eigen::Vector2d::Zero(), 8.0 * sigma,
                                         sched, geom, species);
        const auto dark_pops = bare_projection(dark.final_state, frame);
        const double theta_eff = 2.0 * std::atan2(std::sqrt(dark_pops[0]),
                                                  std::sqrt(dark_pops[2]));

        const double dtheta = theta_bare - theta_eff;
        table.columns[0].push_back(sigma);
        table.columns[1].push_back(dtheta);
        table.columns[2].push_back(theta_bare);
        table.columns[3].push_back(theta_eff);
        table.columns[4].push_back(pops[0]);
        table.columns[5].push_back(pops[1]);
        table.columns[6].push_back(pops[2]);
        table.columns[7].push_back(pops[3]);
        if (std::abs(sigma - 1e-6) < 1e-12) {
            dtheta_1us = dtheta;
            have_1us = true;
        }
    }
    io::write_csv(join_path(cfg.out_dir, "fig4_dtheta.csv"), table);
    result.files.push_back("fig4_dtheta.csv");

    if (have_1us) {
        summary.emplace_back("dtheta_1us_rad", dtheta_1us);
        summary.emplace_back("pass_nonadiabatic_onset",
                             std::abs(dtheta_1us) > 0.05);
    }
    finish(cfg, result, summary);
    return result;
}

ScenarioResult run_custom(const ScenarioConfig& cfg) {
    const SpeciesConstants species = species_of(cfg);
    const BeamGeometry geom = BeamGeometry::standard_tripod();
    const PulseSchedule sched = schedule_of(cfg);
    const double temp_nk = resolved_temperature_nk(cfg);
    const std::vector<double> times = linspace(0.0, sched.t_end(), 401);

    ThermalGrid grid =
        thermal_grid(temp_nk * 1e-9, scheme_of(cfg), resolved_grid_order(cfg),
                     cfg.seed, species);

    ScenarioResult result;
    io::JsonObject summary;
    summary.emplace_back("scenario", std::string("custom"));

    if (wants_bare(cfg)) {
        auto per_sample = [&](const Eigen::Vector2d& p) {
            BareOptions opt;
            opt.decay = cfg.decay;
            const BareTrajectory run =
                propagate_family(p, sched, species, geom, opt, times);
            Eigen::ArrayXd out(4 * times.size());
            for (std::size_t i = 0; i < times.size(); ++i)
                for (int a = 0; a < 4; ++a)
                    out(4 * i + a) = run.samples[i].populations[a];
            return out;
        };
        const Eigen::ArrayXd avg = ensemble_average(grid, per_sample);
        io::Table table;
        table.header = {"t_s", "P1", "P2", "P3", "Pe"};
        table.columns.assign(5, {});
        for (std::size_t i = 0; i < times.size(); ++i) {
            table.columns[0].push_back(times[i]);
            for (int a = 0; a < 4; ++a)
                table.columns[1 + a].push_back(avg(4 * i + a));
        }
        io::write_csv(join_path(cfg.out_dir, "custom_bare.csv"), table);
        result.files.push_back("custom_bare.csv");
        for (int a = 0; a < 4; ++a)
            summary.emplace_back(
                "final_bare_P" + (a == 3 ? std::string("e")
                                         : std::to_string(a + 1)),
                avg(4 * (times.size() - 1) + a));
    }
    if (wants_effective(cfg)) {
        std::vector<DarkFrame> frames;
        frames.reserve(times.size());
        for (double t : times)
            frames.push_back(
                frame_at(Eigen::Vector2d::Zero(), t, sched, geom, species));
        auto per_sample = [&](const Eigen::Vector2d& p) {
            const DarkTrajectory run =
                propagate_dark(sched, species, effective_options(p), times);
            Eigen::ArrayXd out(4 * times.size());
            for (std::size_t i = 0; i < times.size(); ++i) {
                const auto pops =
                    bare_projection(run.samples[i].state, frames[i]);
                for (int a = 0; a < 4; ++a) out(4 * i + a) = pops[a];
            }
            return out;
        };
        const Eigen::ArrayXd avg = ensemble_average(grid, per_sample);
        io::Table table;
        table.header = {"t_s", "P1", "P2", "P3", "Pe"};
        table.columns.assign(5, {});
        for (std::size_t i = 0; i < times.size(); ++i) {
            table.columns[0].push_back(times[i]);
            for (int a = 0; a < 4; ++a)
                table.columns[1 + a].push_back(avg(4 * i + a));
        }
        io::write_csv(join_path(cfg.out_dir, "custom_effective.csv"), table);
        result.files.push_back("custom_effective.csv");
        for (int a = 0; a < 4; ++a)
            summary.emplace_back(
                "final_effective_P" + (a == 3 ? std::string("e")
                                              : std::to_string(a + 1)),
                avg(4 * (times.size() - 1) + a));
    }
    finish(cfg, result, summary);
    return result;
}

}  // namespace

ScenarioConfig::ScenarioConfig() {
    const SpeciesConstants sr = strontium87_689nm();
    mass_kg = sr.mass;
    wavelength_m = sr.wavelength;
    linewidth_rad_s = sr.linewidth;
    omega0_rad_s[0] = 2.0 * kPi * 260e3;
    omega0_rad_s[1] = 2.0 * kPi * 260e3;
    omega0_rad_s[2] = 2.0 * kPi * 130e3;
    temperature_nk = -1.0;  // scenario default
}

ScenarioConfig config_from_map(const std::map<std::string, std::string>& kv) {
    ScenarioConfig cfg;
    for (const auto& [key, value] : kv) {
        if (key == "scenario") cfg.scenario = value;
        else if (key == "mass_kg") cfg.mass_kg = parse_double(key, value);
        else if (key == "wavelength_m")
            cfg.wavelength_m = parse_double(key, value);
        else if (key == "linewidth_rad_s")
            cfg.linewidth_rad_s = parse_double(key, value);
        else if (key == "omega0_1_rad_s")
            cfg.omega0_rad_s[0] = parse_double(key, value);
        else if (key == "omega0_2_rad_s")
            cfg.omega0_rad_s[1] = parse_double(key, value);
        else if (key == "omega0_3_rad_s")
            cfg.omega0_rad_s[2] = parse_double(key, value);
        else if (key == "sigma_t_s") cfg.sigma_t_s = parse_double(key, value);
        else if (key == "eta") cfg.eta = parse_double(key, value);
        else if (key == "free_time_s")
            cfg.free_time_s = parse_double(key, value);
        else if (key == "mirror_second_pulse")
            cfg.mirror_second_pulse = parse_bool(key, value);
        else if (key == "phase_jump_rad")
            cfg.phase_jump_rad = parse_double(key, value);
        else if (key == "temperature_nk")
            cfg.temperature_nk = parse_double(key, value);
        else if (key == "grid_scheme") cfg.grid_scheme = value;
        else if (key == "grid_order")
            cfg.grid_order = static_cast<int>(parse_int(key, value));
        else if (key == "seed") cfg.seed = parse_u64(key, value);
        else if (key == "model") cfg.model = value;
        else if (key == "decay") cfg.decay = parse_bool(key, value);
        else if (key == "sweep_points")
            cfg.sweep_points = static_cast<int>(parse_int(key, value));
        else if (key == "sweep_min") cfg.sweep_min = parse_double(key, value);
        else if (key == "sweep_max") cfg.sweep_max = parse_double(key, value);
        else if (key == "out_dir") cfg.out_dir = value;
        else
            throw std::runtime_error("unknown config key '" + key + "'");
    }

    if (cfg.model != "bare" && cfg.model != "effective" && cfg.model != "both")
        throw std::runtime_error("config key 'model': expected "
                                 "bare|effective|both, got '" + cfg.model +
                                 "'");
    if (cfg.grid_scheme != "gauss_hermite" &&
        cfg.grid_scheme != "monte_carlo")
        throw std::runtime_error("config key 'grid_scheme': expected "
                                 "gauss_hermite|monte_carlo, got '" +
                                 cfg.grid_scheme + "'");
    if (!(cfg.sigma_t_s > 0.0))
        throw std::runtime_error("config key 'sigma_t_s': must be positive");
    if (!(cfg.eta > 0.0))
        throw std::runtime_error("config key 'eta': must be positive");
    if (cfg.free_time_s < 0.0)
        throw std::runtime_error("config key 'free_time_s': must be >= 0");
    if (cfg.sweep_points < 0)
        throw std::runtime_error("config key 'sweep_points': must be >= 0");
    if (cfg.sweep_points > 0 && cfg.sweep_points > 1 &&
        !(cfg.sweep_max >= cfg.sweep_min))
        throw std::runtime_error("config: sweep range is empty");
    return cfg;
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {"fig2d", "fig3a", "fig3b",
                                                   "fig4", "custom"};
    return names;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    if (cfg.scenario == "fig2d") return run_fig2d(cfg);
    if (cfg.scenario == "fig3a") return run_fig3a(cfg);
    if (cfg.scenario == "fig3b") return run_fig3b(cfg);
    if (cfg.scenario == "fig4") return run_fig4(cfg);
    if (cfg.scenario == "custom") return run_custom(cfg);

    std::string names;
    for (const auto& n : scenario_names())
        names += (names.empty() ? "" : ", ") + n;
    throw std::runtime_error("unknown scenario '" + cfg.scenario +
                             "'; valid scenarios: " + names);
}

}  // namespace tripod
