#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "orbdet/dynamics.hpp"
#include "orbdet/filters.hpp"
#include "orbdet/iod.hpp"

namespace orbdet::measurements {

/// Contact-loss interval [start, end).
struct DropoutWindow {
    Epoch start;
    Epoch end;

    bool contains(Epoch t) const { return start <= t && t < end; }
};

struct MeasurementSchedule {
    double cadence = 10.0;                 // s
    std::vector<DropoutWindow> windows;    // sorted, non-overlapping
    double sigma = 0.01;                   // km per axis
    std::uint64_t seed = 1;

    void validate() const;
    bool in_dropout(Epoch t) const;
    bool is_tick(Epoch t) const;
};

/// Truth trajectory sampled every `step` seconds, floor(duration/step)+1 states.
std::vector<StateVector> simulate_truth(const StateVector& initial,
                                        const dynamics::ForceModel& fm, double duration,
                                        double step, const dynamics::IntegratorConfig& cfg = {});

/// One optional GPS fix per truth sample: present at cadence ticks outside
/// every dropout window. Fixes report `reported_covariance`, defaulting to
/// sigma^2 I.
std::vector<std::optional<filters::Measurement>> synthesize_measurements(
    const std::vector<StateVector>& truth, const MeasurementSchedule& sched,
    const std::optional<Mat3>& reported_covariance = std::nullopt);

/// Elevation (rad) of the satellite above the station's local horizon plane.
double elevation(const Vec3& satellite_ecef, const iod::GroundStation& station);

/// Noisy ranges and range-rates from three stations. Throws Visibility naming
/// the first station that has the satellite at or below its horizon.
std::array<iod::RangeMeasurement, 3> range_observations(
    const StateVector& truth_state, const std::array<iod::GroundStation, 3>& stations,
    double sigma_range, std::uint64_t seed);

}  // namespace orbdet::measurements
