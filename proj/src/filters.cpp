#include "orbdet/filters.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <string>

namespace orbdet::filters {

namespace {

constexpr double kEpochTolerance = 1e-6;  // s

template <typename M>
M symmetrized(const M& m) {
    return 0.5 * (m + m.transpose());
}

struct Prediction {
    StateVector state;
    Mat6 covariance;
};

Prediction predict(const FilterState& fs, const StepContext& ctx, double dt) {
    if (!(dt > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "filter step needs dt > 0",
                    fs.estimate.epoch.t);
    }
    const Mat6 f = dynamics::state_transition_jacobian(fs.estimate, ctx.force_model, dt,
                                                       ctx.integrator);
    Prediction out;
    out.state = dynamics::propagate(fs.estimate, ctx.force_model, ctx.integrator, dt);
    out.covariance =
        symmetrized(Mat6(f * fs.covariance.matrix() * f.transpose() + ctx.noise.process.matrix()));
    return out;
}

FilterState finish(const StateVector& estimate, const Mat6& p,
                   std::optional<Measurement> fix) {
    if (!estimate.is_finite()) {
        throw Error(ErrorCode::NumericalFailure, "filter estimate became non-finite",
                    estimate.epoch.t);
    }
    try {
        return FilterState{estimate, Covariance6(p), std::move(fix)};
    } catch (const Error& e) {
        throw Error(ErrorCode::NumericalFailure, e.what(), estimate.epoch.t);
    }
}

}  // namespace

void Measurement::validate() const {
    if (!position.allFinite() || !std::isfinite(epoch.t)) {
        throw Error(ErrorCode::InvalidArgument, "measurement has non-finite components");
    }
    if (!covariance.allFinite() ||
        (covariance - covariance.transpose()).cwiseAbs().maxCoeff() >
            1e-9 * covariance.cwiseAbs().maxCoeff()) {
        throw Error(ErrorCode::InvalidArgument, "measurement covariance is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> solver(covariance, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-12 * std::abs(covariance.trace())) {
        throw Error(ErrorCode::InvalidArgument, "measurement covariance is not PSD");
    }
}

void NoiseConfig::validate() const {
    Measurement probe;
    probe.covariance = measurement;
    probe.validate();
}

Vec3 measurement_model(const StateVector& s) {
    if (s.frame == Frame::ECEF) return s.position;
    return eci_to_ecef_rotation(s.epoch) * s.position;
}

Mat36 measurement_jacobian(const StateVector& s) {
    Mat36 h = Mat36::Zero();
    h.block<3, 3>(0, 0) =
        s.frame == Frame::ECEF ? Mat3::Identity() : eci_to_ecef_rotation(s.epoch);
    return h;
}

namespace detail {

UpdateResult update(const StateVector& predicted, const Mat6& p_predicted, const Vec3& z,
                    const Mat3& r) {
    const Mat36 h = measurement_jacobian(predicted);
    const Vec3 y = z - measurement_model(predicted);
    const Mat3 s = symmetrized(Mat3(h * p_predicted * h.transpose() + r));

    Eigen::SelfAdjointEigenSolver<Mat3> eig(s, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > kMaxInnovationCondition) {
        throw Error(ErrorCode::SingularInnovation,
                    "innovation covariance is numerically singular (eigenvalues " +
                        std::to_string(lo) + ", " + std::to_string(hi) + ")",
                    predicted.epoch.t);
    }
    const Eigen::LLT<Mat3> llt(s);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::SingularInnovation, "innovation covariance factorization failed",
                    predicted.epoch.t);
    }

    // K = P H^T S^-1, obtained as (S^-1 H P)^T since S and P are symmetric.
    const Mat63 k = llt.solve(Eigen::Matrix<double, 3, 6>(h * p_predicted)).transpose();
    const Mat6 i_kh = Mat6::Identity() - k * h;

    UpdateResult out;
    out.estimate = StateVector::from_stacked(predicted.epoch, predicted.stacked() + k * y,
                                             predicted.frame);
    out.covariance = symmetrized(Mat6(i_kh * p_predicted));
    out.joseph = symmetrized(Mat6(i_kh * p_predicted * i_kh.transpose() + k * r * k.transpose()));
    out.gain = k;
    out.innovation = y;
    out.innovation_covariance = s;
    return out;
}

}  // namespace detail

FilterState ekf_step(const FilterState& fs, const std::optional<Measurement>& z,
                     const StepContext& ctx, double dt) {
    const Prediction pred = predict(fs, ctx, dt);
    if (!z) return finish(pred.state, pred.covariance, fs.last_gps_fix);

    if (std::abs(z->epoch - pred.state.epoch) > kEpochTolerance) {
        throw Error(ErrorCode::EpochMismatch,
                    "measurement epoch " + std::to_string(z->epoch.t) +
                        " s does not match the predicted epoch",
                    pred.state.epoch.t);
    }
    const auto upd = detail::update(pred.state, pred.covariance, z->position, z->covariance);
    return finish(upd.estimate, upd.covariance, z);
}

FilterState ekffg_step(const FilterState& fs, const StepContext& ctx, double dt) {
    if (!fs.last_gps_fix) {
        throw Error(ErrorCode::NoFix, "EKFFG step without a GPS fix", fs.estimate.epoch.t);
    }
    const Measurement& fix = *fs.last_gps_fix;
    const Prediction pred = predict(fs, ctx, dt);
    const auto upd = detail::update(pred.state, pred.covariance, fix.position, fix.covariance);
    return finish(upd.estimate, upd.covariance, fs.last_gps_fix);
}

FilterState cowell_only_step(const FilterState& fs, const StepContext& ctx, double dt) {
    return ekf_step(fs, std::nullopt, ctx, dt);
}

const char* to_string(Variant v) noexcept {
    switch (v) {
        case Variant::EKF: return "ekf";
        case Variant::EKFFG: return "ekffg";
        case Variant::COWELL: return "cowell";
    }
    return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
    if (name == "ekf") return Variant::EKF;
    if (name == "ekffg") return Variant::EKFFG;
    if (name == "cowell") return Variant::COWELL;
    return std::nullopt;
}

FilterRun run_filter(const FilterState& initial, const std::vector<ScheduleEntry>& schedule,
                     Variant variant, const StepContext& ctx) {
    if (schedule.empty()) {
        throw Error(ErrorCode::EmptyInput, "filter schedule is empty");
    }
    FilterRun run;
    run.history.reserve(schedule.size());
    const FilterState* current = &initial;
    try {
        for (const ScheduleEntry& entry : schedule) {
            FilterState next = [&] {
                switch (variant) {
                    case Variant::EKF:
                        return ekf_step(*current, entry.measurement, ctx, entry.dt);
                    case Variant::EKFFG:
                        return entry.measurement
                                   ? ekf_step(*current, entry.measurement, ctx, entry.dt)
                                   : ekffg_step(*current, ctx, entry.dt);
                    case Variant::COWELL:
                        break;
                }
                return cowell_only_step(*current, ctx, entry.dt);
            }();
            run.history.push_back(std::move(next));
            current = &run.history.back();
        }
    } catch (const Error& e) {
        run.failure = e;
    }
    return run;
}

}  // namespace orbdet::filters
