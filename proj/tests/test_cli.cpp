#include <doctest.h>

#include "support.hpp"
#include "tapgrowth/commands.hpp"
#include "tapgrowth/config.hpp"
#include "tapgrowth/errors.hpp"
#include "tapgrowth/trajectory_io.hpp"

#include <json.hpp>

#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

using namespace tapgrowth;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(std::initializer_list<std::string> args) {
    std::vector<std::string> storage{"tapgrowth"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : storage) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string golden_dir() { return TAPGROWTH_TEST_GOLDEN_DIR; }

}  // namespace

TEST_CASE("parse_config") {
    SUBCASE("presets") {
        const auto c = parse_config_text("", {{"preset", "m88-d006"}});
        CHECK(c.model.m0 == 88.0);
        CHECK(c.model.delta == 0.06);
        CHECK(c.model.p == 0.0006);
        CHECK(c.model.y0 == 1.82741e11);
        CHECK(c.model.l0 == 1.7e8);
        const auto d0 = parse_config_text("preset = m50-d0\n", {});
        CHECK(d0.model.delta == 0.0);
        CHECK(d0.model.m0 == 50.0);
        // An explicit key still wins over the preset.
        CHECK(parse_config_text("preset = m50-d0\ndelta = 0.01\n", {}).model.delta == 0.01);
    }

    SUBCASE("flags override file values") {
        const auto c = parse_config_text("p = 0.0001\nseed = 3\n", {{"p", "0.0002"}});
        CHECK(c.model.p == 0.0002);
        CHECK(c.seed == 3);
    }

    SUBCASE("flags alone equal a file with the same values") {
        const std::map<std::string, std::string> flags{
            {"preset", "m50-d0"}, {"p", "2e-5"},         {"m0", "46"},
            {"end_year", "1500"}, {"mode", "stochastic"}, {"seed", "77"},
            {"out", "elsewhere"}, {"allow_divergence", "true"}, {"quantity", "M"},
            {"window", "10"}};
        std::string file;
        for (const auto& [k, v] : flags) {
            file += k + " = " + v + "  # comment\n";
        }
        const auto from_flags = parse_config_text("", flags);
        CHECK(from_flags == parse_config_text(file, {}));
        const std::string json =
            R"({"preset": "m50-d0", "p": 2e-5, "m0": 46, "end_year": 1500, "mode": "stochastic",
                "seed": 77, "out": "elsewhere", "allow_divergence": true, "quantity": "M",
                "window": 10})";
        CHECK(from_flags == parse_config_text(json, {}));
        CHECK_FALSE(from_flags == parse_config_text("", {}));
    }

    SUBCASE("errors name the key") {
        auto message = [](const std::string& text, std::map<std::string, std::string> flags) {
            try {
                parse_config_text(text, flags);
            } catch (const ConfigError& e) {
                return std::string(e.what());
            }
            return std::string();
        };
        CHECK(message("bogus = 1\n", {}).find("'bogus'") != std::string::npos);
        CHECK(message("", {{"p", "abc"}}).find("'p'") != std::string::npos);
        CHECK(message("", {{"p", "0"}}).find("p must be positive") != std::string::npos);
        CHECK(message("", {{"p", "40"}}).find("p*alpha_1") != std::string::npos);
        CHECK(message("", {{"preset", "m1"}}).find("'preset'") != std::string::npos);
        CHECK(message("", {{"delta", "1.5"}}).find("delta") != std::string::npos);
        CHECK(message("", {{"mode", "random"}}).find("'mode'") != std::string::npos);
        CHECK(message("no equals sign\n", {}).find("line 1") != std::string::npos);
        CHECK(message("{\"p\": ", {}).find("JSON") != std::string::npos);
        CHECK_THROWS_AS(parse_config(fs::path("/nonexistent/config.txt"), {}), ConfigError);
    }

    CHECK(config_keys().size() == 33);
}

TEST_CASE("exit codes") {
    const auto dir = testing::scratch_dir("exit_codes");
    CHECK(run({"--help"}).code == kExitOk);
    CHECK(run({"simulate", "--help"}).code == kExitOk);
    CHECK(run({}).code == kExitConfig);
    CHECK(run({"frobnicate"}).code == kExitConfig);
    CHECK(run({"simulate", "--no-such-flag", "1"}).code == kExitConfig);

    const auto zero_p = run({"simulate", "--p", "0", "--out", (dir / "a").string()});
    CHECK(zero_p.code == kExitConfig);
    CHECK(zero_p.err.find("p must be positive") != std::string::npos);

    const auto missing = run({"simulate", "--population", (dir / "none.csv").string(), "--out",
                              (dir / "b").string()});
    CHECK(missing.code == kExitData);

    std::ofstream(dir / "bad.csv") << "year,M,K,L,Y\n1,2,3\n";
    const auto bad = run({"analyze", (dir / "bad.csv").string()});
    CHECK(bad.code == kExitData);
    CHECK(bad.err.find("line 2") != std::string::npos);

    std::ofstream(dir / "wrong_label.csv") << "year,gdp\n1,5\n2015,6\n";
    CHECK(run({"simulate", "--population", (dir / "wrong_label.csv").string(), "--out",
               (dir / "c").string()})
              .code == kExitData);

    const auto diverging = run({"simulate", "--out", (dir / "d").string()});
    CHECK(diverging.code == kExitDivergence);
    CHECK_FALSE(fs::exists(dir / "d" / "trajectory.csv"));
}

TEST_CASE("simulate output files") {
    const auto dir = testing::scratch_dir("simulate");

    SUBCASE("full horizon") {
        const auto r = run({"simulate", "--p", "2.25e-5", "--m0", "46.2", "--out", dir.string()});
        REQUIRE(r.code == kExitOk);
        std::ifstream csv(dir / "trajectory.csv");
        std::string header;
        std::getline(csv, header);
        CHECK(header == "year,M,K,L,Y");
        const auto traj = read_trajectory_file(dir / "trajectory.csv");
        CHECK(traj.states.size() == 2015);
        CHECK(traj.states.front().year == 1);
        CHECK(traj.states.back().year == 2015);

        const auto summary = nlohmann::json::parse(testing::slurp(dir / "summary.json"));
        CHECK(summary["schema_version"] == kSchemaVersion);
        CHECK(summary["diverged_at"].is_null());
        CHECK(summary["final_state"]["year"] == 2015);
        CHECK(summary["takeoff_year"].is_number_integer());
        CHECK(summary["blowup_estimate_years"].is_number());
        CHECK(fs::exists(dir / "plot.svg"));
    }

    SUBCASE("divergence is recorded when allowed") {
        const auto r = run({"simulate", "--allow-divergence", "--out", dir.string()});
        REQUIRE(r.code == kExitOk);
        const auto traj = read_trajectory_file(dir / "trajectory.csv");
        const auto summary = nlohmann::json::parse(testing::slurp(dir / "summary.json"));
        CHECK(summary["diverged_at"] == 70);
        CHECK(traj.states.back().year == 69);
        CHECK(summary["takeoff_year"].is_number_integer());
    }

    SUBCASE("backcast prepends the extension") {
        const auto r = run({"simulate", "--allow-divergence", "--backcast-year", "-349",
                            "--end-year", "20", "--out", dir.string()});
        REQUIRE(r.code == kExitOk);
        const auto traj = read_trajectory_file(dir / "trajectory.csv");
        CHECK(traj.states.front().year == -349);
        CHECK(traj.states.back().year == 20);
        CHECK(traj.states[350].m == 50.0);
        const auto summary = nlohmann::json::parse(testing::slurp(dir / "summary.json"));
        CHECK(summary["backcast"]["start_m"].get<double>() < 50.0);
    }
}

TEST_CASE("trajectory CSV round-trips exactly") {
    const auto dir = testing::scratch_dir("roundtrip");
    REQUIRE(run({"simulate", "--p", "2.25e-5", "--m0", "46.2", "--out", dir.string()}).code == 0);
    const auto traj = read_trajectory_file(dir / "trajectory.csv");
    std::ostringstream again;
    write_trajectory_csv(again, traj);
    CHECK(again.str() == testing::slurp(dir / "trajectory.csv"));
}

TEST_CASE("analyze report") {
    const auto dir = testing::scratch_dir("analyze");

    std::ofstream(dir / "flat.csv") << "year,M,K,L,Y\n1,5,1,1,5\n2,5,1,1,5\n3,5,1,1,5\n";
    const auto flat = run({"analyze", (dir / "flat.csv").string()});
    REQUIRE(flat.code == kExitOk);
    CHECK(flat.out.find("takeoff: not reached") != std::string::npos);
    CHECK(flat.out.find("K shrank: no") != std::string::npos);

    REQUIRE(run({"simulate", "--preset", "m50-d006", "--end-year", "10", "--out",
                 (dir / "m50").string()})
                .code == kExitOk);
    const auto m50 = run({"analyze", (dir / "m50" / "trajectory.csv").string()});
    CHECK(m50.out.find("K shrank: yes, first at year 2") != std::string::npos);

    REQUIRE(run({"simulate", "--preset", "m88-d006", "--end-year", "10", "--out",
                 (dir / "m88").string()})
                .code == kExitOk);
    const auto m88 = run({"analyze", (dir / "m88" / "trajectory.csv").string()});
    CHECK(m88.out.find("K shrank: no") != std::string::npos);
    CHECK(m88.out.find("doubling time of Y") != std::string::npos);
    CHECK(m88.out.find("blow-up estimate") != std::string::npos);
}

TEST_CASE("vanishing-P plot matches the golden file") {
    const auto dir = testing::scratch_dir("golden_svg");
    const auto r = run({"simulate", "--p", "1e-30", "--end-year", "300", "--population",
                        golden_dir() + "/flat_population.csv", "--out", dir.string()});
    REQUIRE(r.code == kExitOk);
    const auto svg = testing::slurp(dir / "plot.svg");
    CHECK(svg == testing::slurp(golden_dir() + "/flat_m.svg"));

    // The M panels draw a horizontal line.
    const auto traj = read_trajectory_file(dir / "trajectory.csv");
    for (const auto& s : traj.states) {
        CHECK(s.m == 50.0);
    }
}

TEST_CASE("outputs are byte-identical across runs") {
    const auto a = testing::scratch_dir("repeat_a");
    const auto b = testing::scratch_dir("repeat_b");
    for (const auto& dir : {a, b}) {
        REQUIRE(run({"simulate", "--mode", "stochastic", "--seed", "4", "--allow-divergence",
                     "--out", dir.string()})
                    .code == 0);
        REQUIRE(run({"ensemble", "--runs", "6", "--seed", "4", "--threads",
                     dir == a ? "1" : "3", "--out", dir.string()})
                    .code == 0);
        REQUIRE(run({"calibrate", "--grid", "5", "--refine-iters", "20", "--end-year", "200",
                     "--out", dir.string()})
                    .code == 0);
    }
    for (const char* name : {"trajectory.csv", "summary.json", "plot.svg", "hitting_times.csv",
                             "stats.json", "calibration.json", "trace.csv"}) {
        CAPTURE(name);
        CHECK(testing::slurp(a / name) == testing::slurp(b / name));
        CHECK_FALSE(testing::slurp(a / name).empty());
    }
    const auto stats = nlohmann::json::parse(testing::slurp(a / "stats.json"));
    CHECK(stats["schema_version"] == kSchemaVersion);
    CHECK(stats["runs"] == 6);
    const auto cal = nlohmann::json::parse(testing::slurp(a / "calibration.json"));
    CHECK(cal["references"].size() == 3);
    CHECK(cal["best"]["p"].get<double>() >= 1e-8);
}
