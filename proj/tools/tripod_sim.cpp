// Command-line scenario runner: reproduces the figure-style datasets
// (fig2d, fig3a, fig3b, fig4) or a custom configuration, writing CSV
// series and a JSON summary.
//
// Exit codes: 0 success, 1 bad flags or unknown scenario, 2 runtime
// failure (non-converged propagation or fit, output errors), 3 config
// file or key errors.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tripod/darkspace.hpp"
#include "tripod/io.hpp"
#include "tripod/scenario.hpp"

namespace {

int run(const std::map<std::string, std::string>& kv) {
    tripod::ScenarioConfig cfg;
    try {
        cfg = tripod::config_from_map(kv);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    }

    bool known = false;
    for (const auto& name : tripod::scenario_names())
        known = known || name == cfg.scenario;
    if (!known) {
        std::string names;
        for (const auto& n : tripod::scenario_names())
            names += (names.empty() ? "" : ", ") + n;
        std::cerr << "error: unknown scenario '" << cfg.scenario
                  << "'; valid scenarios: " << names << "\n";
        return 1;
    }

    try {
        const tripod::ScenarioResult result = tripod::run_scenario(cfg);
        for (const auto& file : result.files)
            std::cout << "wrote " << cfg.out_dir << "/" << file << "\n";
        std::cout << "thresholds_ok="
                  << (result.thresholds_ok ? "true" : "false") << "\n";
        return 0;
    } catch (const tripod::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "run error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tripod atom-interferometer scenario runner"};

    std::string scenario, config_path, out_dir, model;
    std::vector<std::string> sets;
    std::string seed, temp_nk;
    app.add_option("--scenario", scenario,
                   "Scenario name: fig2d, fig3a, fig3b, fig4, custom");
    app.add_option("--config", config_path, "Config file (key = value lines)");
    app.add_option("--set", sets, "Override a config key, e.g. --set eta=2.0")
        ->take_all();
    app.add_option("--out", out_dir,
                   "Output directory (default: TRIPOD_SIM_OUT_DIR or .)");
    app.add_option("--seed", seed, "Random seed for monte_carlo grids");
    app.add_option("--model", model, "Model selector: bare, effective, both");
    app.add_option("--temp-nk", temp_nk, "Ensemble temperature in nK");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    std::map<std::string, std::string> kv;
    if (!config_path.empty()) {
        try {
            kv = tripod::io::read_config(config_path);
        } catch (const std::exception& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 3;
        }
    }
    for (const auto& item : sets) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "error: --set expects key=value, got '" << item
                      << "'\n";
            return 1;
        }
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    if (!scenario.empty()) kv["scenario"] = scenario;
    if (!model.empty()) kv["model"] = model;
    if (!seed.empty()) kv["seed"] = seed;
    if (!temp_nk.empty()) kv["temperature_nk"] = temp_nk;
    if (!out_dir.empty()) {
        kv["out_dir"] = out_dir;
    } else if (kv.find("out_dir") == kv.end()) {
        const char* env = std::getenv("TRIPOD_SIM_OUT_DIR");
        if (env != nullptr && env[0] != '\0') kv["out_dir"] = env;
    }

    return run(kv);
}
