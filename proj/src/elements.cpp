#include "orbdet/elements.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace orbdet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double angle) {
    double w = std::fmod(angle, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w >= kTwoPi ? 0.0 : w;
}

Mat3 rot_z(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Mat3 m;
    m << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
    return m;
}

Mat3 rot_x(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Mat3 m;
    m << 1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c;
    return m;
}

}  // namespace

void OrbitalElements::validate() const {
    for (double v : {a, e, i, raan, argp, nu}) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "orbital elements must be finite");
    }
    if (e >= 1.0) {
        throw Error(ErrorCode::UnsupportedOrbit,
                    "eccentricity " + std::to_string(e) + " is not a bound orbit");
    }
    if (e < 0.0) throw Error(ErrorCode::InvalidArgument, "eccentricity must be non-negative");
    if (!(a > constants::earth_radius)) {
        throw Error(ErrorCode::InvalidArgument, "semi-major axis must exceed the Earth radius");
    }
}

StateVector elements_to_state(const OrbitalElements& el, Epoch epoch, double mu) {
    el.validate();
    const double p = el.a * (1.0 - el.e * el.e);
    const double c = std::cos(el.nu);
    const double s = std::sin(el.nu);
    const Vec3 r_pf = p / (1.0 + el.e * c) * Vec3{c, s, 0.0};
    const Vec3 v_pf = std::sqrt(mu / p) * Vec3{-s, el.e + c, 0.0};
    const Mat3 q = rot_z(el.raan) * rot_x(el.i) * rot_z(el.argp);

    StateVector out;
    out.epoch = epoch;
    out.position = q * r_pf;
    out.velocity = q * v_pf;
    out.frame = Frame::ECI;
    return out;
}

OrbitalElements state_to_elements(const StateVector& s, double mu) {
    if (s.frame != Frame::ECI) {
        throw Error(ErrorCode::FrameMismatch, "orbital elements need an ECI state");
    }
    const Vec3& r = s.position;
    const Vec3& v = s.velocity;
    const double rn = r.norm();
    const double energy = 0.5 * v.squaredNorm() - mu / rn;
    if (!(energy < 0.0)) throw Error(ErrorCode::UnsupportedOrbit, "state is not on a bound orbit");

    const Vec3 h = r.cross(v);
    const Vec3 w = h.normalized();
    const Vec3 e_vec = ((v.squaredNorm() - mu / rn) * r - r.dot(v) * v) / mu;

    OrbitalElements el;
    el.a = -mu / (2.0 * energy);
    el.e = e_vec.norm();
    el.i = std::acos(std::clamp(w.z(), -1.0, 1.0));

    const Vec3 node = Vec3::UnitZ().cross(h);
    const Vec3 n_hat = node.norm() > 1e-11 * h.norm() ? Vec3(node.normalized()) : Vec3::UnitX();
    const Vec3 p_hat = el.e > 1e-11 ? Vec3(e_vec / el.e) : n_hat;
    const Vec3 q_hat = w.cross(p_hat);

    el.raan = wrap(std::atan2(n_hat.y(), n_hat.x()));
    el.argp = wrap(std::atan2(p_hat.dot(w.cross(n_hat)), p_hat.dot(n_hat)));
    el.nu = wrap(std::atan2(r.dot(q_hat), r.dot(p_hat)));
    return el;
}

}  // namespace orbdet
