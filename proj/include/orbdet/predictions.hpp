#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "orbdet/core.hpp"
#include "orbdet/report.hpp"

namespace orbdet::harness {

/// One line of an ephemeris file: `epoch_s, x_km, y_km, z_km`, ECEF.
struct EphemerisRecord {
    double epoch = 0.0;
    Vec3 position = Vec3::Zero();
    int line = 0;  // 1-based source line, 0 when not read from a file
};

/// Blank lines and `#` comments are skipped. Throws Format with
/// `source:line:` on malformed records.
std::vector<EphemerisRecord> parse_ephemeris(std::istream& in, const std::string& source);
std::vector<EphemerisRecord> read_ephemeris(const std::filesystem::path& path);

/// Writes `# epoch_s, x_km, y_km, z_km` then `%.6f, %.9f, %.9f, %.9f` rows.
void write_ephemeris(std::ostream& out, const std::vector<EphemerisRecord>& records);

/// ECEF positions of a truth trajectory.
std::vector<EphemerisRecord> ecef_ephemeris(const std::vector<StateVector>& truth);

/// Per-record position errors. Throws Alignment naming the first record whose
/// epoch differs by more than 1e-3 s or that has no counterpart.
RunResult score_run(const std::string& name, const std::vector<EphemerisRecord>& predictions,
                    const std::vector<EphemerisRecord>& truth);

/// One series, "predictions", with one run per prediction file.
RunReport score_predictions(const std::vector<std::filesystem::path>& predictions,
                            const std::filesystem::path& truth);

}  // namespace orbdet::harness
