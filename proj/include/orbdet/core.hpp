#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <compare>

#include "orbdet/errors.hpp"

namespace orbdet {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat36 = Eigen::Matrix<double, 3, 6>;
using Mat63 = Eigen::Matrix<double, 6, 3>;

/// Physical constants. Lengths in km, time in s.
namespace constants {
inline constexpr double mu = 398600.4418;           // km^3/s^2
inline constexpr double earth_radius = 6378.137;    // km, equatorial
inline constexpr double j2 = 1.08262668e-3;
inline constexpr double earth_rotation = 7.2921159e-5;  // rad/s
inline constexpr double flattening = 1.0 / 298.257223563;
}  // namespace constants

/// Seconds past scenario start.
struct Epoch {
    double t = 0.0;

    constexpr Epoch() = default;
    constexpr explicit Epoch(double seconds) : t(seconds) {}

    constexpr Epoch operator+(double dt) const { return Epoch{t + dt}; }
    constexpr double operator-(Epoch other) const { return t - other.t; }
    constexpr auto operator<=>(const Epoch&) const = default;
};

enum class Frame { ECI, ECEF };

const char* to_string(Frame frame) noexcept;

struct StateVector {
    Epoch epoch;
    Vec3 position = Vec3::Zero();  // km
    Vec3 velocity = Vec3::Zero();  // km/s
    Frame frame = Frame::ECI;

    Vec6 stacked() const;
    static StateVector from_stacked(Epoch epoch, const Vec6& x, Frame frame);

    bool is_finite() const;
};

/// Throws InvalidArgument for non-finite components and SubsurfaceState when
/// the position lies more than 100 km below the equatorial radius.
void check_state(const StateVector& s);

/// 6x6 covariance over [r; v]; km^2, km^2/s, km^2/s^2 blockwise.
/// Construction enforces symmetry (1e-9 relative) and PSD up to round-off.
class Covariance6 {
public:
    Covariance6();  // zero
    explicit Covariance6(const Mat6& m);

    static Covariance6 diagonal(double position_variance, double velocity_variance);

    const Mat6& matrix() const noexcept { return m_; }
    double trace() const { return m_.trace(); }

    static bool is_symmetric(const Mat6& m, double rel_tol = 1e-9);
    static bool is_psd(const Mat6& m);

private:
    Mat6 m_;
};

/// Rotation taking ECI coordinates to ECEF at `epoch` (uniform spin about z).
Mat3 eci_to_ecef_rotation(Epoch epoch);

StateVector eci_to_ecef(const StateVector& s);
StateVector ecef_to_eci(const StateVector& s);

inline bool all_finite(const Vec3& v) { return v.allFinite(); }

}  // namespace orbdet
