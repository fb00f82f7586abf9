#include "tapgrowth/commands.hpp"

#include "tapgrowth/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <map>
#include <ostream>

namespace tapgrowth {

namespace {

std::string dashed(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

bool is_flag_key(const std::string& key) { return key == "allow_divergence" || key == "fit_m0"; }

struct Invocation {
    std::optional<std::filesystem::path> config_file;
    std::map<std::string, std::string> overrides;
    std::string trajectory;
};

void add_config_options(CLI::App& cmd, Invocation& inv) {
    cmd.add_option_function<std::string>(
        "--config", [&inv](const std::string& path) { inv.config_file = path; },
        "Config file (key = value lines or a JSON object)");
    for (const auto& key : config_keys()) {
        const std::string name = "--" + dashed(key);
        if (is_flag_key(key)) {
            cmd.add_flag_callback(name, [&inv, key] { inv.overrides[key] = "true"; });
        } else {
            cmd.add_option_function<std::string>(
                name, [&inv, key](const std::string& v) { inv.overrides[key] = v; },
                "Override '" + key + "'");
        }
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Combinatorial innovation growth model: simulate, calibrate, ensemble, analyze",
                 "tapgrowth"};
    app.require_subcommand(1);
    Invocation inv;

    auto* simulate = app.add_subcommand("simulate", "Run one trajectory");
    auto* calibrate = app.add_subcommand("calibrate", "Fit P (and optionally M0) to a GDP series");
    auto* ensemble = app.add_subcommand("ensemble", "Stochastic takeoff-time ensemble");
    auto* analyze = app.add_subcommand("analyze", "Report on an existing trajectory CSV");
    for (auto* cmd : {simulate, calibrate, ensemble, analyze}) {
        add_config_options(*cmd, inv);
    }
    analyze->add_option("trajectory", inv.trajectory, "Trajectory CSV (year,M,K,L,Y)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    RunConfig config;
    try {
        config = parse_config(inv.config_file, inv.overrides);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    }

    if (simulate->parsed()) {
        return cmd_simulate(config, out, err);
    }
    if (calibrate->parsed()) {
        return cmd_calibrate(config, out, err);
    }
    if (ensemble->parsed()) {
        return cmd_ensemble(config, out, err);
    }
    return cmd_analyze(config, inv.trajectory, out, err);
}

}  // namespace tapgrowth
