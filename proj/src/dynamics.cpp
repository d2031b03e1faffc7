#include "orbdet/dynamics.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace orbdet::dynamics {

namespace {

using constants::earth_radius;
using constants::mu;

const Vec3 kEarthSpin{0.0, 0.0, constants::earth_rotation};

// Throws with `code` when the position is at or below the surface.
void require_above_surface(const Vec3& r, double epoch, ErrorCode code) {
    const double rn = r.norm();
    if (!(rn > earth_radius)) {
        throw Error(code,
                    std::string(code == ErrorCode::Reentry ? "trajectory re-entered"
                                                           : "state is below the surface") +
                        " (|r| = " + std::to_string(rn) + " km at t = " +
                        std::to_string(epoch) + " s)",
                    epoch);
    }
}

Vec3 total_acceleration(const Vec3& r, const Vec3& v, const ForceModel& fm) {
    if (fm.freeze) return Vec3::Zero();

    const double r2 = r.squaredNorm();
    const double rn = std::sqrt(r2);
    Vec3 a = -mu / (r2 * rn) * r;

    if (fm.j2) {
        const double z2_r2 = r.z() * r.z() / r2;
        const double k = -1.5 * constants::j2 * mu * earth_radius * earth_radius /
                         (r2 * r2 * rn);
        a.x() += k * r.x() * (1.0 - 5.0 * z2_r2);
        a.y() += k * r.y() * (1.0 - 5.0 * z2_r2);
        a.z() += k * r.z() * (3.0 - 5.0 * z2_r2);
    }

    if (fm.drag) {
        const DragParams& p = fm.drag_params;
        const Vec3 v_rel = v - kEarthSpin.cross(r);
        const double rho = p.density(rn - earth_radius);
        // rho [kg/m^3] * A/m [m^2/kg] * |v|v [km^2/s^2 -> 1e6 m^2/s^2], result m/s^2 -> km/s^2.
        a += -0.5 * rho * p.cd * p.area_to_mass * v_rel.norm() * 1e3 * v_rel;
    }
    return a;
}

struct Derivative {
    const ForceModel& fm;
    double epoch;  // start of current step, for error reporting

    Vec6 operator()(const Vec6& y) const {
        const Vec3 r = y.head<3>();
        require_above_surface(r, epoch, ErrorCode::Reentry);
        Vec6 dy;
        dy << y.tail<3>(), total_acceleration(r, y.tail<3>(), fm);
        return dy;
    }
};

Vec6 rk4_step(const Derivative& f, const Vec6& y, double h) {
    const Vec6 k1 = f(y);
    const Vec6 k2 = f(y + 0.5 * h * k1);
    const Vec6 k3 = f(y + 0.5 * h * k2);
    const Vec6 k4 = f(y + h * k3);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Fehlberg 4(5) tableau; the step advances with the fifth-order weights.
struct FehlbergResult {
    Vec6 y5;
    Vec6 error;
};

FehlbergResult fehlberg_step(const Derivative& f, const Vec6& y, double h) {
    const Vec6 k1 = f(y);
    const Vec6 k2 = f(y + h * (1.0 / 4.0) * k1);
    const Vec6 k3 = f(y + h * (3.0 / 32.0 * k1 + 9.0 / 32.0 * k2));
    const Vec6 k4 = f(y + h * (1932.0 / 2197.0 * k1 - 7200.0 / 2197.0 * k2 +
                               7296.0 / 2197.0 * k3));
    const Vec6 k5 = f(y + h * (439.0 / 216.0 * k1 - 8.0 * k2 + 3680.0 / 513.0 * k3 -
                               845.0 / 4104.0 * k4));
    const Vec6 k6 = f(y + h * (-8.0 / 27.0 * k1 + 2.0 * k2 - 3544.0 / 2565.0 * k3 +
                               1859.0 / 4104.0 * k4 - 11.0 / 40.0 * k5));

    FehlbergResult out;
    out.y5 = y + h * (16.0 / 135.0 * k1 + 6656.0 / 12825.0 * k3 + 28561.0 / 56430.0 * k4 -
                      9.0 / 50.0 * k5 + 2.0 / 55.0 * k6);
    out.error = h * (1.0 / 360.0 * k1 - 128.0 / 4275.0 * k3 - 2197.0 / 75240.0 * k4 +
                     1.0 / 50.0 * k5 + 2.0 / 55.0 * k6);
    return out;
}

double error_norm(const Vec6& y0, const Vec6& y1, const Vec6& err,
                  const IntegratorConfig& cfg) {
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double scale =
            cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        worst = std::max(worst, std::abs(err[i]) / scale);
    }
    return worst;
}

std::vector<double> fixed_step_sequence(double dt, double step) {
    std::vector<double> steps;
    const auto full = static_cast<std::size_t>(std::floor(dt / step + 1e-9));
    steps.assign(full, step);
    const double rest = dt - static_cast<double>(full) * step;
    if (rest > 1e-9 * step) steps.push_back(rest);
    return steps;
}

}  // namespace

double DragParams::density(double h) const {
    return rho0 * std::exp(-(h - h0) / scale_height);
}

void ForceModel::validate() const {
    if (!drag) return;
    const DragParams& p = drag_params;
    if (!(p.cd > 0.0) || !(p.area_to_mass > 0.0) || !(p.scale_height > 0.0) ||
        !(p.rho0 >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "drag requires Cd > 0, A/m > 0, H > 0 and rho0 >= 0");
    }
}

void IntegratorConfig::validate() const {
    if (method == IntegratorMethod::RK4) {
        if (!(fixed_step > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "RK4 step must be positive");
        }
        return;
    }
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "integrator tolerances must be positive");
    }
    if (!(min_step > 0.0) || !(min_step <= max_step)) {
        throw Error(ErrorCode::InvalidArgument, "need 0 < min_step <= max_step");
    }
}

Vec3 acceleration(const StateVector& s, const ForceModel& fm) {
    if (s.frame != Frame::ECI) {
        throw Error(ErrorCode::FrameMismatch, "acceleration expects an ECI state", s.epoch.t);
    }
    require_above_surface(s.position, s.epoch.t, ErrorCode::SubsurfaceState);
    return total_acceleration(s.position, s.velocity, fm);
}

namespace detail {

Trajectory integrate(const Vec6& y0, double t0, double dt, const ForceModel& fm,
                     const IntegratorConfig& cfg) {
    Trajectory out{y0, {}};
    if (dt == 0.0) return out;

    if (cfg.method == IntegratorMethod::RK4) {
        out.steps = fixed_step_sequence(dt, cfg.fixed_step);
        out.final_state = integrate_steps(y0, t0, out.steps, fm, IntegratorMethod::RK4);
        return out;
    }

    Vec6 y = y0;
    double elapsed = 0.0;
    double h = std::min(cfg.max_step, dt);
    constexpr int kMaxAttempts = 10'000'000;
    for (int attempt = 0; elapsed < dt; ++attempt) {
        if (attempt == kMaxAttempts) {
            throw Error(ErrorCode::IntegrationFailure, "step budget exhausted", t0 + elapsed);
        }
        const double remaining = dt - elapsed;
        const bool last = h >= remaining * (1.0 - 1e-12);
        const double step = last ? remaining : h;

        const Derivative f{fm, t0 + elapsed};
        FehlbergResult trial;
        double err = 0.0;
        try {
            trial = fehlberg_step(f, y, step);
            err = error_norm(y, trial.y5, trial.error, cfg);
        } catch (const Error& e) {
            // A stage dipped below the surface: shrink until the crossing is
            // resolved to min_step, then report it.
            if (e.code() != ErrorCode::Reentry || step <= cfg.min_step) throw;
            h = std::max(0.5 * step, cfg.min_step);
            continue;
        }

        if (err <= 1.0) {
            y = trial.y5;
            elapsed = last ? dt : elapsed + step;
            require_above_surface(y.head<3>(), t0 + elapsed, ErrorCode::Reentry);
            out.steps.push_back(step);
            const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            // Keep the pre-clamp size when the last step was shortened to hit dt.
            h = std::min(cfg.max_step, std::max(h, step) * grow);
        } else {
            if (step <= cfg.min_step) {
                throw Error(ErrorCode::IntegrationFailure,
                            "step size underflow: tolerance not met at min_step",
                            t0 + elapsed);
            }
            const double shrink = std::clamp(0.9 * std::pow(err, -0.25), 0.1, 0.9);
            h = std::max(step * shrink, cfg.min_step);
        }
    }
    out.final_state = y;
    return out;
}

Vec6 integrate_steps(const Vec6& y0, double t0, const std::vector<double>& steps,
                     const ForceModel& fm, IntegratorMethod method) {
    Vec6 y = y0;
    double t = t0;
    for (const double h : steps) {
        const Derivative f{fm, t};
        y = method == IntegratorMethod::RK4 ? rk4_step(f, y, h) : fehlberg_step(f, y, h).y5;
        t += h;
        require_above_surface(y.head<3>(), t, ErrorCode::Reentry);
    }
    return y;
}

}  // namespace detail

namespace {

void check_propagation_input(const StateVector& s, const ForceModel& fm,
                             const IntegratorConfig& cfg, double dt) {
    if (s.frame != Frame::ECI) {
        throw Error(ErrorCode::FrameMismatch, "propagation expects an ECI state", s.epoch.t);
    }
    if (!(dt >= 0.0) || !std::isfinite(dt)) {
        throw Error(ErrorCode::InvalidArgument, "propagation interval must be >= 0");
    }
    if (!s.is_finite()) {
        throw Error(ErrorCode::NumericalFailure, "non-finite state", s.epoch.t);
    }
    fm.validate();
    cfg.validate();
}

}  // namespace

StateVector propagate(const StateVector& s, const ForceModel& fm,
                      const IntegratorConfig& cfg, double dt) {
    check_propagation_input(s, fm, cfg, dt);
    if (dt == 0.0) return s;
    const auto traj = detail::integrate(s.stacked(), s.epoch.t, dt, fm, cfg);
    return StateVector::from_stacked(s.epoch + dt, traj.final_state, Frame::ECI);
}

Mat6 state_transition_jacobian(const StateVector& s, const ForceModel& fm, double dt,
                               const IntegratorConfig& cfg) {
    check_propagation_input(s, fm, cfg, dt);
    if (dt == 0.0) return Mat6::Identity();

    const Vec6 x0 = s.stacked();
    const auto nominal = detail::integrate(x0, s.epoch.t, dt, fm, cfg);

    Mat6 jac;
    for (int j = 0; j < 6; ++j) {
        const double delta = j < 3 ? kJacobianPositionDelta : kJacobianVelocityDelta;
        Vec6 plus = x0;
        Vec6 minus = x0;
        plus[j] += delta;
        minus[j] -= delta;
        const Vec6 yp = detail::integrate_steps(plus, s.epoch.t, nominal.steps, fm, cfg.method);
        const Vec6 ym = detail::integrate_steps(minus, s.epoch.t, nominal.steps, fm, cfg.method);
        jac.col(j) = (yp - ym) / (2.0 * delta);
    }
    return jac;
}

double specific_energy(const StateVector& s) {
    return 0.5 * s.velocity.squaredNorm() - mu / s.position.norm();
}

double semi_major_axis(const StateVector& s) {
    return -mu / (2.0 * specific_energy(s));
}

}  // namespace orbdet::dynamics
