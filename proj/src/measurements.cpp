#include "orbdet/measurements.hpp"

#include <algorithm>
#include <string>

#include "orbdet/random.hpp"

namespace orbdet::measurements {

void MeasurementSchedule::validate() const {
    if (!(cadence > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "measurement cadence must be positive");
    }
    if (!(sigma >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "measurement sigma must be non-negative");
    }
    for (std::size_t k = 0; k < windows.size(); ++k) {
        if (!(windows[k].start < windows[k].end)) {
            throw Error(ErrorCode::InvalidArgument, "dropout window needs start < end");
        }
        if (k > 0 && windows[k].start < windows[k - 1].end) {
            throw Error(ErrorCode::InvalidArgument,
                        "dropout windows must be sorted and non-overlapping");
        }
    }
}

bool MeasurementSchedule::in_dropout(Epoch t) const {
    for (const auto& w : windows) {
        if (w.contains(t)) return true;
    }
    return false;
}

bool MeasurementSchedule::is_tick(Epoch t) const {
    const double ticks = std::round(t.t / cadence);
    return std::abs(t.t - ticks * cadence) <= 1e-6;
}

std::vector<StateVector> simulate_truth(const StateVector& initial,
                                        const dynamics::ForceModel& fm, double duration,
                                        double step, const dynamics::IntegratorConfig& cfg) {
    if (!(duration >= 0.0) || !(step > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "truth simulation needs duration >= 0, step > 0");
    }
    check_state(initial);
    const auto count = static_cast<std::size_t>(std::floor(duration / step + 1e-9));
    std::vector<StateVector> truth;
    truth.reserve(count + 1);
    truth.push_back(initial);
    for (std::size_t k = 0; k < count; ++k) {
        StateVector next = dynamics::propagate(truth.back(), fm, cfg, step);
        next.epoch = Epoch{initial.epoch.t + static_cast<double>(k + 1) * step};
        truth.push_back(std::move(next));
    }
    return truth;
}

std::vector<std::optional<filters::Measurement>> synthesize_measurements(
    const std::vector<StateVector>& truth, const MeasurementSchedule& sched,
    const std::optional<Mat3>& reported_covariance) {
    if (truth.empty()) {
        throw Error(ErrorCode::EmptyInput, "truth trajectory is empty");
    }
    sched.validate();
    const Mat3 cov = reported_covariance.value_or(Mat3::Identity() * sched.sigma * sched.sigma);

    GaussianRng rng(sched.seed);
    std::vector<std::optional<filters::Measurement>> out;
    out.reserve(truth.size());
    for (const StateVector& s : truth) {
        if (!sched.is_tick(s.epoch) || sched.in_dropout(s.epoch)) {
            out.emplace_back(std::nullopt);
            continue;
        }
        filters::Measurement z;
        z.epoch = s.epoch;
        const Vec3 truth_ecef = s.frame == Frame::ECEF ? s.position : eci_to_ecef(s).position;
        // Draw order: x, y, z.
        const double nx = rng.normal(sched.sigma);
        const double ny = rng.normal(sched.sigma);
        const double nz = rng.normal(sched.sigma);
        z.position = truth_ecef + Vec3{nx, ny, nz};
        z.covariance = cov;
        out.emplace_back(std::move(z));
    }
    return out;
}

double elevation(const Vec3& satellite_ecef, const iod::GroundStation& station) {
    const Vec3 los = satellite_ecef - iod::geodetic_to_ecef(station);
    return std::asin(std::clamp(los.normalized().dot(iod::ellipsoid_normal(station)), -1.0, 1.0));
}

std::array<iod::RangeMeasurement, 3> range_observations(
    const StateVector& truth_state, const std::array<iod::GroundStation, 3>& stations,
    double sigma_range, std::uint64_t seed) {
    if (!(sigma_range >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "range sigma must be non-negative");
    }
    const StateVector ecef =
        truth_state.frame == Frame::ECEF ? truth_state : eci_to_ecef(truth_state);

    GaussianRng rng(seed);
    std::array<iod::RangeMeasurement, 3> out;
    for (std::size_t k = 0; k < 3; ++k) {
        const iod::GroundStation& g = stations[k];
        if (!(elevation(ecef.position, g) > 0.0)) {
            throw Error(ErrorCode::Visibility,
                        "station " + std::to_string(k + 1) + " (lat " +
                            std::to_string(g.latitude) + " rad, lon " +
                            std::to_string(g.longitude) +
                            " rad) does not see the satellite",
                        truth_state.epoch.t);
        }
        const Vec3 los = ecef.position - iod::geodetic_to_ecef(g);
        const double rho = los.norm();
        out[k].station = g;
        out[k].epoch = truth_state.epoch;
        out[k].range = rho + rng.normal(sigma_range);
        out[k].range_rate = ecef.velocity.dot(los) / rho;
    }
    return out;
}

}  // namespace orbdet::measurements
