#pragma once

// Named scenario runners: each reproduces one figure-style dataset and
// writes CSV series plus a flat JSON summary.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tripod/io.hpp"

namespace tripod {

struct ScenarioConfig {
    std::string scenario = "custom";

    // species
    double mass_kg;           // defaults to 87Sr
    double wavelength_m;      // defaults to 689 nm
    double linewidth_rad_s;   // defaults to 2 pi x 7.5 kHz

    // schedule
    double omega0_rad_s[3];   // 2 pi x {260, 260, 130} kHz
    double sigma_t_s = 2.5e-6;
    double eta = 1.8;
    double free_time_s = 6e-6;
    bool mirror_second_pulse = true;
    double phase_jump_rad = 0.0;

    // thermal ensemble
    double temperature_nk = 0.0;
    std::string grid_scheme = "gauss_hermite";  // or "monte_carlo"
    int grid_order = 0;                         // 0 = per-scenario default
    std::uint64_t seed = 20260822;

    // model selection
    std::string model = "both";  // bare | effective | both
    bool decay = false;

    // sweep (scenario-dependent variable)
    int sweep_points = 0;        // 0 = per-scenario default
    double sweep_min = 0.0;
    double sweep_max = 0.0;

    std::string out_dir = ".";

    ScenarioConfig();
};

// Parse and validate key = value pairs over the defaults; unknown keys
// and malformed values throw std::runtime_error naming the key.
ScenarioConfig config_from_map(const std::map<std::string, std::string>& kv);

struct ScenarioResult {
    std::vector<std::string> files;  // paths written, in order
    io::JsonObject summary;         // also written as summary.json
    bool thresholds_ok = true;      // all pass/fail flags in the summary
};

// Valid scenario names, in documentation order.
const std::vector<std::string>& scenario_names();

// Runs the configured scenario and writes its outputs under out_dir.
// Unknown scenario names throw std::runtime_error listing the options.
ScenarioResult run_scenario(const ScenarioConfig& config);

}  // namespace tripod
