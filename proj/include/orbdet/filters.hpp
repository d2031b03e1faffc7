#pragma once

#include <optional>
#include <vector>

#include "orbdet/core.hpp"
#include "orbdet/dynamics.hpp"

namespace orbdet::filters {

/// GPS position fix: ECEF position with its 3x3 noise covariance (km^2).
struct Measurement {
    Epoch epoch;
    Vec3 position = Vec3::Zero();
    Mat3 covariance = Mat3::Identity();

    void validate() const;
};

struct FilterState {
    StateVector estimate;                   // x_{t|t}, ECI
    Covariance6 covariance;                 // P_{t|t}
    std::optional<Measurement> last_gps_fix;
};

/// Process noise Q is applied once per filter step regardless of its length.
struct NoiseConfig {
    Covariance6 process = Covariance6::diagonal(1e-8, 1e-10);
    Mat3 measurement = Mat3::Identity() * 1e-4;  // (10 m)^2 per axis

    void validate() const;
};

/// Everything a step needs besides the state itself.
struct StepContext {
    dynamics::ForceModel force_model;
    dynamics::IntegratorConfig integrator;
    NoiseConfig noise;
};

/// h(x): GPS-observable position, expressed in ECEF.
Vec3 measurement_model(const StateVector& s);

/// dh/dx = [Theta(t) | 0] for ECI states, [I | 0] for ECEF states.
Mat36 measurement_jacobian(const StateVector& s);

/// Condition-number ceiling for the innovation covariance S.
inline constexpr double kMaxInnovationCondition = 1e12;

/// Extended Kalman filter: predict through the dynamics, then update with z
/// when one is supplied. Without z this is a pure prediction.
FilterState ekf_step(const FilterState& fs, const std::optional<Measurement>& z,
                     const StepContext& ctx, double dt);

/// EKF with the update always run against the frozen last GPS fix.
FilterState ekffg_step(const FilterState& fs, const StepContext& ctx, double dt);

/// Prediction only: Cowell propagation of the state, F P F^T + Q for P.
FilterState cowell_only_step(const FilterState& fs, const StepContext& ctx, double dt);

enum class Variant { EKF, EKFFG, COWELL };

const char* to_string(Variant v) noexcept;
std::optional<Variant> parse_variant(std::string_view name);

struct ScheduleEntry {
    double dt = 0.0;
    std::optional<Measurement> measurement;
};

struct FilterRun {
    std::vector<FilterState> history;  // one entry per schedule entry that completed
    std::optional<Error> failure;

    bool ok() const { return !failure.has_value(); }
};

/// Folds the variant's step over the schedule.
///   EKF    updates whenever a measurement is delivered.
///   EKFFG  refreshes the frozen fix from every delivered measurement and
///          updates against it on every step.
///   COWELL ignores all measurements.
FilterRun run_filter(const FilterState& initial, const std::vector<ScheduleEntry>& schedule,
                     Variant variant, const StepContext& ctx);

namespace detail {

struct UpdateResult {
    StateVector estimate;
    Mat6 covariance;   // (I - K H) P, re-symmetrized
    Mat6 joseph;       // (I - K H) P (I - K H)^T + K R K^T
    Mat63 gain;
    Vec3 innovation;
    Mat3 innovation_covariance;
};

/// Measurement update against an arbitrary position fix.
UpdateResult update(const StateVector& predicted, const Mat6& p_predicted, const Vec3& z,
                    const Mat3& r);

}  // namespace detail

}  // namespace orbdet::filters
