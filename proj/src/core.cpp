#include "orbdet/core.hpp"

#include <Eigen/Eigenvalues>

#include <string>

namespace orbdet {

const char* to_string(Frame frame) noexcept {
    return frame == Frame::ECI ? "ECI" : "ECEF";
}

Vec6 StateVector::stacked() const {
    Vec6 x;
    x << position, velocity;
    return x;
}

StateVector StateVector::from_stacked(Epoch epoch, const Vec6& x, Frame frame) {
    return StateVector{epoch, x.head<3>(), x.tail<3>(), frame};
}

bool StateVector::is_finite() const {
    return std::isfinite(epoch.t) && position.allFinite() && velocity.allFinite();
}

void check_state(const StateVector& s) {
    if (!s.is_finite()) {
        throw Error(ErrorCode::InvalidArgument, "state has non-finite components", s.epoch.t);
    }
    if (s.position.norm() <= constants::earth_radius - 100.0) {
        throw Error(ErrorCode::SubsurfaceState,
                    "state position |r| = " + std::to_string(s.position.norm()) +
                        " km is inside the Earth",
                    s.epoch.t);
    }
}

Covariance6::Covariance6() : m_(Mat6::Zero()) {}

Covariance6::Covariance6(const Mat6& m) : m_(m) {
    if (!m.allFinite()) {
        throw Error(ErrorCode::NumericalFailure, "covariance has non-finite entries");
    }
    if (!is_symmetric(m)) {
        throw Error(ErrorCode::InvalidArgument, "covariance is not symmetric");
    }
    if (!is_psd(m)) {
        throw Error(ErrorCode::NumericalFailure, "covariance is not positive semidefinite");
    }
}

Covariance6 Covariance6::diagonal(double position_variance, double velocity_variance) {
    if (position_variance < 0.0 || velocity_variance < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "variances must be non-negative");
    }
    Vec6 d;
    d << Vec3::Constant(position_variance), Vec3::Constant(velocity_variance);
    return Covariance6(Mat6(d.asDiagonal()));
}

bool Covariance6::is_symmetric(const Mat6& m, double rel_tol) {
    const double scale = m.cwiseAbs().maxCoeff();
    if (scale == 0.0) return true;
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

bool Covariance6::is_psd(const Mat6& m) {
    const Mat6 sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Mat6> solver(sym, Eigen::EigenvaluesOnly);
    const double floor = -1e-12 * std::abs(sym.trace());
    return solver.eigenvalues().minCoeff() >= floor;
}

Mat3 eci_to_ecef_rotation(Epoch epoch) {
    const double theta = constants::earth_rotation * epoch.t;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Mat3 rot;
    rot << c, s, 0.0,
          -s, c, 0.0,
           0.0, 0.0, 1.0;
    return rot;
}

namespace {
const Vec3 kEarthSpin{0.0, 0.0, constants::earth_rotation};
}

StateVector eci_to_ecef(const StateVector& s) {
    if (s.frame != Frame::ECI) {
        throw Error(ErrorCode::FrameMismatch, "eci_to_ecef expects an ECI state", s.epoch.t);
    }
    const Mat3 rot = eci_to_ecef_rotation(s.epoch);
    StateVector out;
    out.epoch = s.epoch;
    out.position = rot * s.position;
    out.velocity = rot * (s.velocity - kEarthSpin.cross(s.position));
    out.frame = Frame::ECEF;
    return out;
}

StateVector ecef_to_eci(const StateVector& s) {
    if (s.frame != Frame::ECEF) {
        throw Error(ErrorCode::FrameMismatch, "ecef_to_eci expects an ECEF state", s.epoch.t);
    }
    const Mat3 rot_t = eci_to_ecef_rotation(s.epoch).transpose();
    StateVector out;
    out.epoch = s.epoch;
    out.position = rot_t * s.position;
    out.velocity = rot_t * s.velocity + kEarthSpin.cross(out.position);
    out.frame = Frame::ECI;
    return out;
}

}  // namespace orbdet
