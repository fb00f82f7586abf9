#include "tapgrowth/config.hpp"

#include "tapgrowth/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#ifndef TAPGROWTH_DATA_DIR
#define TAPGROWTH_DATA_DIR "data"
#endif

namespace tapgrowth {

namespace {

using Setter = std::function<void(RunConfig&, const std::string&)>;

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw ConfigError("invalid value for '" + key + "': '" + value + "'");
}

template <typename T>
T parse_as(const std::string& key, const std::string& value) {
    T out{};
    const std::string text = trim(value);
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (!text.empty() && *begin == '+') {
        ++begin;
    }
    const auto r = std::from_chars(begin, end, out);
    if (r.ec != std::errc() || r.ptr != end || text.empty()) {
        bad_value(key, value);
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(out)) {
            bad_value(key, value);
        }
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no") {
        return false;
    }
    bad_value(key, value);
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        t["y0"] = [](RunConfig& c, const std::string& v) { c.model.y0 = parse_as<double>("y0", v); };
        t["m0"] = [](RunConfig& c, const std::string& v) { c.model.m0 = parse_as<double>("m0", v); };
        t["p"] = [](RunConfig& c, const std::string& v) { c.model.p = parse_as<double>("p", v); };
        t["theta"] = [](RunConfig& c, const std::string& v) {
            c.model.theta = parse_as<double>("theta", v);
        };
        t["rho"] = [](RunConfig& c, const std::string& v) { c.model.rho = parse_as<double>("rho", v); };
        t["l0"] = [](RunConfig& c, const std::string& v) { c.model.l0 = parse_as<double>("l0", v); };
        t["beta"] = [](RunConfig& c, const std::string& v) {
            c.model.beta = parse_as<double>("beta", v);
        };
        t["s"] = [](RunConfig& c, const std::string& v) { c.model.s = parse_as<double>("s", v); };
        t["delta"] = [](RunConfig& c, const std::string& v) {
            c.model.delta = parse_as<double>("delta", v);
        };
        t["cutoff"] = [](RunConfig& c, const std::string& v) {
            c.model.cutoff = parse_as<int>("cutoff", v);
        };
        t["start_year"] = [](RunConfig& c, const std::string& v) {
            c.start_year = parse_as<Year>("start_year", v);
        };
        t["end_year"] = [](RunConfig& c, const std::string& v) {
            c.end_year = parse_as<Year>("end_year", v);
        };
        t["backcast_year"] = [](RunConfig& c, const std::string& v) {
            c.backcast_year = parse_as<Year>("backcast_year", v);
        };
        t["mode"] = [](RunConfig& c, const std::string& v) {
            const auto m = trim(v);
            if (m == "deterministic") {
                c.mode = Mode::deterministic;
            } else if (m == "stochastic") {
                c.mode = Mode::stochastic;
            } else {
                bad_value("mode", v);
            }
        };
        t["seed"] = [](RunConfig& c, const std::string& v) {
            c.seed = parse_as<std::uint64_t>("seed", v);
        };
        t["population"] = [](RunConfig& c, const std::string& v) { c.population = trim(v); };
        t["benchmark"] = [](RunConfig& c, const std::string& v) { c.benchmark = trim(v); };
        t["out"] = [](RunConfig& c, const std::string& v) { c.out = trim(v); };
        t["allow_divergence"] = [](RunConfig& c, const std::string& v) {
            c.allow_divergence = parse_bool("allow_divergence", v);
        };
        t["fit_m0"] = [](RunConfig& c, const std::string& v) { c.fit_m0 = parse_bool("fit_m0", v); };
        t["grid"] = [](RunConfig& c, const std::string& v) { c.grid = parse_as<int>("grid", v); };
        t["refine_iters"] = [](RunConfig& c, const std::string& v) {
            c.refine_iters = parse_as<int>("refine_iters", v);
        };
        t["p_min"] = [](RunConfig& c, const std::string& v) { c.p_min = parse_as<double>("p_min", v); };
        t["p_max"] = [](RunConfig& c, const std::string& v) { c.p_max = parse_as<double>("p_max", v); };
        t["m0_min"] = [](RunConfig& c, const std::string& v) {
            c.m0_min = parse_as<double>("m0_min", v);
        };
        t["m0_max"] = [](RunConfig& c, const std::string& v) {
            c.m0_max = parse_as<double>("m0_max", v);
        };
        t["runs"] = [](RunConfig& c, const std::string& v) { c.runs = parse_as<int>("runs", v); };
        t["horizon_cap"] = [](RunConfig& c, const std::string& v) {
            c.horizon_cap = parse_as<Year>("horizon_cap", v);
        };
        t["window"] = [](RunConfig& c, const std::string& v) {
            c.takeoff.window = parse_as<int>("window", v);
        };
        t["threshold"] = [](RunConfig& c, const std::string& v) {
            c.takeoff.threshold = parse_as<double>("threshold", v);
        };
        t["quantity"] = [](RunConfig& c, const std::string& v) {
            const auto q = trim(v);
            if (q == "Y") {
                c.takeoff.quantity = TakeoffQuantity::output;
            } else if (q == "M") {
                c.takeoff.quantity = TakeoffQuantity::goods;
            } else {
                bad_value("quantity", v);
            }
        };
        t["threads"] = [](RunConfig& c, const std::string& v) {
            c.threads = parse_as<unsigned>("threads", v);
        };
        t["preset"] = [](RunConfig&, const std::string&) {};
        return t;
    }();
    return table;
}

std::map<std::string, std::string> read_pairs(const std::string& text) {
    std::map<std::string, std::string> pairs;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("config JSON: ") + e.what());
        }
        if (!doc.is_object()) {
            throw ConfigError("config JSON must be an object");
        }
        for (const auto& [key, value] : doc.items()) {
            pairs[key] = value.is_string() ? value.get<std::string>() : value.dump();
        }
        return pairs;
    }
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line.substr(0, line.find('#')));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        pairs[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
    }
    return pairs;
}

void apply(RunConfig& config, const std::map<std::string, std::string>& pairs) {
    const auto& table = setters();
    for (const auto& [key, value] : pairs) {
        const auto it = table.find(key);
        if (it == table.end()) {
            throw ConfigError("unknown key '" + key + "'");
        }
        try {
            it->second(config, value);
        } catch (const ConfigError&) {
            throw ConfigError("invalid value for '" + key + "': '" + value + "'");
        }
    }
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
    auto model_tuple = [](const ModelParameters& m) {
        return std::tie(m.y0, m.m0, m.p, m.theta, m.rho, m.l0, m.beta, m.s, m.delta, m.cutoff);
    };
    auto rule_tuple = [](const TakeoffRule& r) {
        return std::tie(r.window, r.threshold, r.quantity);
    };
    return model_tuple(model) == model_tuple(o.model) && preset == o.preset &&
           start_year == o.start_year && end_year == o.end_year &&
           backcast_year == o.backcast_year && mode == o.mode && seed == o.seed &&
           population == o.population && benchmark == o.benchmark && out == o.out &&
           allow_divergence == o.allow_divergence && fit_m0 == o.fit_m0 && grid == o.grid &&
           refine_iters == o.refine_iters && p_min == o.p_min && p_max == o.p_max &&
           m0_min == o.m0_min && m0_max == o.m0_max && runs == o.runs &&
           horizon_cap == o.horizon_cap && rule_tuple(takeoff) == rule_tuple(o.takeoff) &&
           threads == o.threads;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "preset", "y0", "m0", "p", "theta", "rho", "l0", "beta", "s", "delta", "cutoff",
        "start_year", "end_year", "backcast_year", "mode", "seed", "population", "benchmark",
        "out", "allow_divergence", "fit_m0", "grid", "refine_iters", "p_min", "p_max",
        "m0_min", "m0_max", "runs", "horizon_cap", "window", "threshold", "quantity",
        "threads"};
    return keys;
}

std::filesystem::path default_data_dir() { return TAPGROWTH_DATA_DIR; }

RunConfig parse_config_text(const std::string& text,
                            const std::map<std::string, std::string>& overrides) {
    const auto file_pairs = read_pairs(text);
    RunConfig config;
    config.population = default_data_dir() / "population.csv";
    config.benchmark = default_data_dir() / "world_gdp.csv";

    std::string preset = config.preset;
    if (auto it = file_pairs.find("preset"); it != file_pairs.end()) {
        preset = trim(it->second);
    }
    if (auto it = overrides.find("preset"); it != overrides.end()) {
        preset = trim(it->second);
    }
    const auto params = preset_parameters(preset);
    if (!params) {
        throw ConfigError("invalid value for 'preset': '" + preset + "'");
    }
    config.preset = preset;
    config.model = *params;

    apply(config, file_pairs);
    apply(config, overrides);
    validate_run_config(config);
    return config;
}

RunConfig parse_config(const std::optional<std::filesystem::path>& file,
                       const std::map<std::string, std::string>& overrides) {
    std::string text;
    if (file) {
        std::ifstream in(*file);
        if (!in) {
            throw ConfigError("cannot open config file " + file->string());
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return parse_config_text(text, overrides);
}

void validate_run_config(const RunConfig& c) {
    if (auto v = validate_params(c.model.kernel()); !v) {
        throw ConfigError("kernel parameters (p, theta, rho, cutoff): " + v.message());
    }
    if (auto v = validate_macro(c.model.macro()); !v) {
        throw ConfigError("macro parameters (beta, s, delta): " + v.message());
    }
    auto positive = [](double v, const char* key) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError(std::string("'") + key + "' must be positive");
        }
    };
    positive(c.model.y0, "y0");
    positive(c.model.m0, "m0");
    positive(c.model.l0, "l0");
    if (c.end_year < c.start_year) {
        throw ConfigError("'end_year' must not precede 'start_year'");
    }
    if (c.backcast_year && *c.backcast_year > c.start_year) {
        throw ConfigError("'backcast_year' must not follow 'start_year'");
    }
    if (c.grid < 1) {
        throw ConfigError("'grid' must be at least 1");
    }
    if (c.refine_iters < 0) {
        throw ConfigError("'refine_iters' must be non-negative");
    }
    if (!(c.p_min > 0.0 && c.p_max >= c.p_min)) {
        throw ConfigError("'p_min'/'p_max' must be positive and ordered");
    }
    if (!(c.m0_min > 0.0 && c.m0_max >= c.m0_min)) {
        throw ConfigError("'m0_min'/'m0_max' must be positive and ordered");
    }
    if (c.runs < 1) {
        throw ConfigError("'runs' must be at least 1");
    }
    if (c.horizon_cap < 1) {
        throw ConfigError("'horizon_cap' must be at least 1");
    }
    if (c.takeoff.window < 1) {
        throw ConfigError("'window' must be at least 1");
    }
    if (!(c.takeoff.threshold > 0.0)) {
        throw ConfigError("'threshold' must be positive");
    }
}

}  // namespace tapgrowth
