#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "orbdet/dynamics.hpp"
#include "orbdet/elements.hpp"
#include "orbdet/filters.hpp"
#include "orbdet/iod.hpp"
#include "orbdet/measurements.hpp"

namespace orbdet::harness {

struct Scenario {
    std::variant<OrbitalElements, StateVector> orbit;
    double jitter_position = 0.0;  // km per axis, applied to the truth start of each run
    double jitter_velocity = 0.0;  // km/s per axis

    dynamics::ForceModel force = dynamics::ForceModel::full();
    dynamics::IntegratorConfig integrator;
    filters::NoiseConfig noise;

    double initial_position_sigma = 0.1;   // km
    double initial_velocity_sigma = 1e-4;  // km/s

    double step = 10.0;       // s between truth samples and filter steps
    double duration = 6000.0;
    measurements::MeasurementSchedule schedule;  // seed is derived per run

    std::vector<filters::Variant> variants;
    int n_runs = 25;
    std::uint64_t seed = 1;

    std::vector<iod::GroundStation> stations;
    double iod_spacing = 60.0;        // s between the three IOD epochs
    double iod_range_sigma = 0.01;    // km
    double iod_position_sigma = 1.0;  // km, filter prior after IOD
    double iod_velocity_sigma = 1e-2; // km/s

    void validate() const;
    StateVector initial_state() const;
};

/// 500 km circular LEO at 51.6 deg, J2 + drag, 10 s GPS cadence, 90 minute
/// dropout from t = 600 s, all three variants, 25 runs.
Scenario default_scenario();

/// Key/value scenario text. The first non-comment line must be
/// `orbdet-scenario 1`; unspecified keys keep default_scenario() values.
/// Throws Scenario with `source:line:` prefixed messages.
Scenario parse_scenario(std::istream& in, const std::string& source = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace orbdet::harness
