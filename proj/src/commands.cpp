#include "tapgrowth/commands.hpp"

#include "tapgrowth/calibration.hpp"
#include "tapgrowth/ensemble.hpp"
#include "tapgrowth/errors.hpp"
#include "tapgrowth/format.hpp"
#include "tapgrowth/series.hpp"
#include "tapgrowth/svg_plot.hpp"
#include "tapgrowth/trajectory_io.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tapgrowth {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

template <typename T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

std::string general(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

Json parameters_json(const ModelParameters& m) {
    return Json{{"y0", m.y0},   {"m0", m.m0},     {"p", m.p},   {"theta", m.theta},
                {"rho", m.rho}, {"l0", m.l0},     {"beta", m.beta}, {"s", m.s},
                {"delta", m.delta}, {"cutoff", m.cutoff}};
}

Json state_json(const EconomyState& s) {
    return Json{{"year", s.year}, {"M", s.m}, {"K", s.k}, {"L", s.l}, {"Y", s.y}};
}

const char* quantity_name(TakeoffQuantity q) { return q == TakeoffQuantity::output ? "Y" : "M"; }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << text;
}

void prepare_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
}

AnnualSeries load_labelled(const fs::path& path, const std::string& label) {
    auto series = load_series_file(path);
    if (series.label() != label) {
        throw DataError(path.string() + ": expected a '" + label + "' column, found '" +
                        series.label() + "'");
    }
    return series;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    }
}

std::string plot_trajectory(const Trajectory& traj) {
    std::vector<double> years;
    std::vector<double> y;
    std::vector<double> m;
    for (const auto& s : traj.states) {
        years.push_back(static_cast<double>(s.year));
        y.push_back(s.y);
        m.push_back(s.m);
    }
    return render_svg({
        {"Y (world GDP)", years, y, false},
        {"Y (world GDP), log scale", years, y, true},
        {"M (distinct goods)", years, m, false},
        {"M (distinct goods), log scale", years, m, true},
    });
}

}  // namespace

std::string analyze_report(const Trajectory& traj, const RunConfig& config) {
    std::ostringstream os;
    const auto& s = traj.states;
    os << "trajectory: " << s.size() << " rows, years " << s.front().year << ".."
       << s.back().year << '\n';

    const auto takeoff = takeoff_time(traj, config.takeoff);
    os << "takeoff: " << (takeoff ? "year " + std::to_string(*takeoff) : "not reached") << " ("
       << quantity_name(config.takeoff.quantity) << ", window " << config.takeoff.window
       << ", threshold " << general(config.takeoff.threshold) << ")\n";

    os << "doubling time of Y by era:\n";
    constexpr std::array<Year, 5> kEraBounds{1000, 1500, 1800, 1900, 1950};
    std::vector<Year> cuts{s.front().year};
    for (Year b : kEraBounds) {
        if (b > s.front().year && b < s.back().year) {
            cuts.push_back(b);
        }
    }
    cuts.push_back(s.back().year);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Year a = cuts[i];
        const Year b = cuts[i + 1];
        if (b <= a) {
            continue;
        }
        const double ya = s[static_cast<std::size_t>(a - s.front().year)].y;
        const double yb = s[static_cast<std::size_t>(b - s.front().year)].y;
        const double rate = std::log(yb / ya) / static_cast<double>(b - a);
        os << "  " << a << ".." << b << ": ";
        if (rate > 0.0) {
            os << general(std::log(2.0) / rate) << " years\n";
        } else {
            os << "no growth\n";
        }
    }

    const auto blowup = blowup_estimate(s.back().m, config.model.kernel());
    os << "blow-up estimate from final state (M = " << general(s.back().m) << "): "
       << (blowup ? general(*blowup) + " years" : std::string("none")) << '\n';

    const auto decline = first_capital_decline(traj);
    os << "K shrank: "
       << (decline ? "yes, first at year " + std::to_string(*decline) : std::string("no")) << '\n';
    return os.str();
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto population = load_labelled(config.population, "population");
        const auto& model = config.model;
        const auto anchor =
            initial_state(config.start_year, model.y0, model.m0, model.l0, model.beta);
        const SimulationMode mode = config.mode == Mode::stochastic
                                        ? SimulationMode::stochastic(config.seed)
                                        : SimulationMode::deterministic();
        auto traj = simulate(anchor, model.kernel(), model.macro(), population,
                             {config.start_year, config.end_year}, {mode});
        if (traj.diverged() && !config.allow_divergence) {
            err << "diverged at year " << *traj.divergence << " (before end year "
                << config.end_year << "); pass --allow-divergence to keep the partial run\n";
            return static_cast<int>(kExitDivergence);
        }

        std::optional<BackwardExtension> backcast;
        if (config.backcast_year && *config.backcast_year < config.start_year) {
            backcast = extend_backward(anchor, model.kernel(), model.macro(), population,
                                       *config.backcast_year);
            auto states = backcast->trajectory.states;
            states.pop_back();
            states.insert(states.end(), traj.states.begin(), traj.states.end());
            traj.states = std::move(states);
            traj.horizon.first = *config.backcast_year;
        }

        prepare_out_dir(config.out);
        std::ostringstream csv;
        write_trajectory_csv(csv, traj);
        write_text(config.out / "trajectory.csv", csv.str());
        write_text(config.out / "plot.svg", plot_trajectory(traj));

        const auto& last = traj.states.back();
        Json summary;
        summary["schema_version"] = kSchemaVersion;
        summary["command"] = "simulate";
        summary["preset"] = config.preset;
        summary["parameters"] = parameters_json(model);
        summary["mode"] = config.mode == Mode::stochastic ? "stochastic" : "deterministic";
        summary["seed"] = config.mode == Mode::stochastic ? Json(config.seed) : Json(nullptr);
        summary["horizon"] = Json{{"first", traj.horizon.first}, {"last", config.end_year}};
        summary["rows"] = traj.states.size();
        summary["final_state"] = state_json(last);
        summary["takeoff_year"] = optional_json(takeoff_time(traj, config.takeoff));
        summary["diverged_at"] = optional_json(traj.divergence);
        const auto blowup = blowup_estimate(last.m, model.kernel());
        summary["blowup_estimate_years"] = blowup ? number_or_null(*blowup) : Json(nullptr);
        summary["capital_first_decline"] = optional_json(first_capital_decline(traj));
        if (backcast) {
            summary["backcast"] = Json{{"start_year", *config.backcast_year},
                                       {"start_m", backcast->start_m},
                                       {"start_k", backcast->start_k},
                                       {"capital_first_decline",
                                        optional_json(backcast->first_capital_decline)}};
        }
        write_text(config.out / "summary.json", summary.dump(2) + "\n");

        out << "wrote " << traj.states.size() << " rows to "
            << (config.out / "trajectory.csv").string() << '\n';
        if (traj.divergence) {
            out << "diverged at year " << *traj.divergence << '\n';
        }
        return static_cast<int>(kExitOk);
    });
}

int cmd_calibrate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        CalibrationSpec spec(load_labelled(config.population, "population"),
                             load_labelled(config.benchmark, "gdp"));
        spec.fixed = config.model;
        spec.start_year = config.start_year;
        spec.horizon = {config.start_year, config.end_year};
        spec.p_bounds = {config.p_min, config.p_max};
        if (config.fit_m0) {
            spec.m0_bounds = Bounds{config.m0_min, config.m0_max};
        }
        spec.grid = config.grid;
        spec.refine_iters = config.refine_iters;
        spec.threads = config.threads;
        const auto result = calibrate(spec);

        prepare_out_dir(config.out);
        std::ostringstream trace;
        trace << "index,p,m0,loss\n";
        for (std::size_t i = 0; i < result.trace.size(); ++i) {
            const auto& e = result.trace[i];
            trace << i << ',' << format_double(e.params.p) << ',' << format_double(e.params.m0)
                  << ',' << (std::isfinite(e.loss) ? format_double(e.loss) : "inf") << '\n';
        }
        write_text(config.out / "trace.csv", trace.str());

        Json doc;
        doc["schema_version"] = kSchemaVersion;
        doc["command"] = "calibrate";
        doc["preset"] = config.preset;
        doc["free"] = config.fit_m0 ? Json{"p", "m0"} : Json{"p"};
        doc["horizon"] = Json{{"first", spec.horizon.first}, {"last", spec.horizon.last}};
        doc["best"] = parameters_json(result.best);
        doc["loss"] = number_or_null(result.loss);
        doc["evaluations"] = result.trace.size();
        doc["diverged_count"] = result.diverged_count;
        Json refs = Json::array();
        for (const auto& r : result.references) {
            refs.push_back(Json{{"name", r.name},
                                {"m0", r.params.m0},
                                {"delta", r.params.delta},
                                {"p", r.params.p},
                                {"loss", number_or_null(r.loss)}});
        }
        doc["references"] = refs;
        write_text(config.out / "calibration.json", doc.dump(2) + "\n");

        out << "best p = " << format_double(result.best.p);
        if (config.fit_m0) {
            out << ", m0 = " << format_double(result.best.m0);
        }
        out << ", loss = " << (std::isfinite(result.loss) ? format_double(result.loss) : "inf")
            << '\n';
        return static_cast<int>(kExitOk);
    });
}

int cmd_ensemble(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto& model = config.model;
        EnsembleConfig ens(
            initial_state(config.start_year, model.y0, model.m0, model.l0, model.beta),
            model.kernel(), model.macro(), load_labelled(config.population, "population"));
        ens.runs = config.runs;
        ens.master_seed = config.seed;
        ens.horizon_end = config.end_year;
        ens.horizon_cap = config.horizon_cap;
        ens.takeoff = config.takeoff;
        ens.threads = config.threads;
        if (std::floor(model.m0) != model.m0) {
            throw ConfigError("'m0' must be an integer for stochastic runs");
        }
        const auto stats = run_ensemble(ens);

        prepare_out_dir(config.out);
        std::ostringstream csv;
        csv << "run,seed,takeoff_year,diverged_at,simulated_through\n";
        for (std::size_t i = 0; i < stats.runs.size(); ++i) {
            const auto& r = stats.runs[i];
            csv << i << ',' << r.seed << ',' << (r.takeoff ? std::to_string(*r.takeoff) : "")
                << ',' << (r.divergence ? std::to_string(*r.divergence) : "") << ','
                << r.simulated_through << '\n';
        }
        write_text(config.out / "hitting_times.csv", csv.str());

        Json doc;
        doc["schema_version"] = kSchemaVersion;
        doc["command"] = "ensemble";
        doc["preset"] = config.preset;
        doc["parameters"] = parameters_json(model);
        doc["runs"] = config.runs;
        doc["master_seed"] = config.seed;
        doc["takeoff_rule"] = Json{{"window", config.takeoff.window},
                                   {"threshold", config.takeoff.threshold},
                                   {"quantity", quantity_name(config.takeoff.quantity)}};
        doc["horizon"] = Json{{"first", config.start_year},
                              {"last", config.end_year},
                              {"cap_years", config.horizon_cap}};
        doc["reached_fraction"] = stats.reached_fraction;
        doc["mean"] = optional_json(stats.mean);
        doc["median"] = optional_json(stats.median);
        doc["q05"] = optional_json(stats.q05);
        doc["q95"] = optional_json(stats.q95);
        write_text(config.out / "stats.json", doc.dump(2) + "\n");

        out << "reached_fraction = " << format_double(stats.reached_fraction) << " over "
            << config.runs << " runs\n";
        return static_cast<int>(kExitOk);
    });
}

int cmd_analyze(const RunConfig& config, const fs::path& trajectory, std::ostream& out,
                std::ostream& err) {
    return guarded(err, [&] {
        const auto traj = read_trajectory_file(trajectory);
        out << analyze_report(traj, config);
        return static_cast<int>(kExitOk);
    });
}

}  // namespace tapgrowth
