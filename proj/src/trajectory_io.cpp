#include "tapgrowth/trajectory_io.hpp"

#include "tapgrowth/errors.hpp"
#include "tapgrowth/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace tapgrowth {

namespace {

constexpr std::string_view kHeader = "year,M,K,L,Y";

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    for (;;) {
        const auto comma = line.find(',', pos);
        fields.push_back(line.substr(pos, comma - pos));
        if (comma == std::string_view::npos) {
            return fields;
        }
        pos = comma + 1;
    }
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    out << kHeader << '\n';
    for (const auto& s : trajectory.states) {
        out << s.year << ',' << format_double(s.m) << ',' << format_double(s.k) << ','
            << format_double(s.l) << ',' << format_double(s.y) << '\n';
    }
}

Trajectory read_trajectory_csv(std::istream& in) {
    Trajectory traj;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!have_header) {
            if (line != kHeader) {
                throw ParseError(line_no, "expected header '" + std::string(kHeader) + "'");
            }
            have_header = true;
            continue;
        }
        const auto fields = split(line);
        if (fields.size() != 5) {
            throw ParseError(line_no, "expected 5 fields, got " + std::to_string(fields.size()));
        }
        EconomyState s;
        const auto year_end = fields[0].data() + fields[0].size();
        if (auto r = std::from_chars(fields[0].data(), year_end, s.year);
            r.ec != std::errc() || r.ptr != year_end) {
            throw ParseError(line_no, "bad year '" + std::string(fields[0]) + "'");
        }
        std::array<double*, 4> targets{&s.m, &s.k, &s.l, &s.y};
        for (std::size_t i = 0; i < 4; ++i) {
            const auto f = fields[i + 1];
            const auto end = f.data() + f.size();
            auto r = std::from_chars(f.data(), end, *targets[i]);
            if (r.ec != std::errc() || r.ptr != end || f.empty() || !(*targets[i] > 0.0) ||
                !std::isfinite(*targets[i])) {
                throw ParseError(line_no, "bad value '" + std::string(f) + "'");
            }
        }
        if (!traj.states.empty() && s.year != traj.states.back().year + 1) {
            throw ParseError(line_no, "years must be consecutive");
        }
        traj.states.push_back(s);
    }
    if (!have_header) {
        throw ParseError(line_no, "missing header");
    }
    if (traj.states.empty()) {
        throw ParseError(line_no, "no rows");
    }
    traj.horizon = {traj.states.front().year, traj.states.back().year};
    return traj;
}

Trajectory read_trajectory_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return read_trajectory_csv(in);
}

}  // namespace tapgrowth
