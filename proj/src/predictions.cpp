#include "orbdet/predictions.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

namespace orbdet::harness {

namespace {

constexpr double kEpochTolerance = 1e-3;

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::string record_label(const EphemerisRecord& r, std::size_t index) {
    std::string out = "record " + std::to_string(index + 1);
    if (r.line > 0) out += " (line " + std::to_string(r.line) + ")";
    return out;
}

std::string fixed(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

}  // namespace

std::vector<EphemerisRecord> parse_ephemeris(std::istream& in, const std::string& source) {
    std::vector<EphemerisRecord> out;
    int line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        const std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;

        const auto fail = [&](const std::string& msg) {
            throw Error(ErrorCode::Format, source + ":" + std::to_string(line_no) + ": " + msg);
        };
        double values[4];
        std::size_t field = 0;
        std::size_t pos = 0;
        while (true) {
            const auto comma = line.find(',', pos);
            const std::string token = trim(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
            if (field == 4) fail("expected 4 comma-separated fields");
            char* end = nullptr;
            const double v = std::strtod(token.c_str(), &end);
            if (token.empty() || end != token.c_str() + token.size()) {
                fail("field " + std::to_string(field + 1) + " is not a number: '" + token + "'");
            }
            if (!std::isfinite(v)) fail("field " + std::to_string(field + 1) + " is not finite");
            values[field++] = v;
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (field != 4) fail("expected 4 comma-separated fields, got " + std::to_string(field));
        out.push_back({values[0], Vec3{values[1], values[2], values[3]}, line_no});
    }
    return out;
}

std::vector<EphemerisRecord> read_ephemeris(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Format, "cannot open " + path.string());
    return parse_ephemeris(in, path.string());
}

void write_ephemeris(std::ostream& out, const std::vector<EphemerisRecord>& records) {
    out << "# epoch_s, x_km, y_km, z_km\n";
    for (const auto& r : records) {
        out << fixed(r.epoch, "%.6f") << ", " << fixed(r.position.x(), "%.9f") << ", "
            << fixed(r.position.y(), "%.9f") << ", " << fixed(r.position.z(), "%.9f") << '\n';
    }
}

std::vector<EphemerisRecord> ecef_ephemeris(const std::vector<StateVector>& truth) {
    std::vector<EphemerisRecord> out;
    out.reserve(truth.size());
    for (const auto& s : truth) {
        const Vec3 p = s.frame == Frame::ECEF ? s.position : eci_to_ecef(s).position;
        out.push_back({s.epoch.t, p, 0});
    }
    return out;
}

RunResult score_run(const std::string& name, const std::vector<EphemerisRecord>& predictions,
                    const std::vector<EphemerisRecord>& truth) {
    const std::size_t n = std::min(predictions.size(), truth.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(predictions[k].epoch - truth[k].epoch) > kEpochTolerance) {
            throw Error(ErrorCode::Alignment,
                        name + ": " + record_label(predictions[k], k) + " has epoch " +
                            fixed(predictions[k].epoch, "%.6f") + " s, truth has " +
                            fixed(truth[k].epoch, "%.6f") + " s",
                        predictions[k].epoch);
        }
    }
    if (predictions.size() < truth.size()) {
        throw Error(ErrorCode::Alignment, name + ": record " + std::to_string(n + 1) +
                                              " is missing; truth has " +
                                              std::to_string(truth.size()) + " records");
    }
    if (predictions.size() > truth.size()) {
        throw Error(ErrorCode::Alignment, name + ": " + record_label(predictions[n], n) +
                                              " has no truth counterpart; truth has " +
                                              std::to_string(truth.size()) + " records");
    }
    if (truth.empty()) throw Error(ErrorCode::EmptyInput, name + ": no records to score");

    std::vector<double> epochs;
    std::vector<double> errors;
    for (std::size_t k = 0; k < n; ++k) {
        epochs.push_back(truth[k].epoch);
        errors.push_back((predictions[k].position - truth[k].position).norm());
    }
    return finished_run(name, std::move(epochs), std::move(errors));
}

RunReport score_predictions(const std::vector<std::filesystem::path>& predictions,
                            const std::filesystem::path& truth) {
    if (predictions.empty()) throw Error(ErrorCode::EmptyInput, "no prediction files given");
    const auto truth_records = read_ephemeris(truth);
    std::vector<RunResult> runs;
    for (const auto& path : predictions) {
        runs.push_back(score_run(path.string(), read_ephemeris(path), truth_records));
    }
    RunReport report;
    report.title = "score: truth " + truth.string();
    report.series.push_back(summarize("predictions", std::move(runs)));
    return report;
}

}  // namespace orbdet::harness
