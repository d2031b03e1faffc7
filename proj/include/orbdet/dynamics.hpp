#pragma once

#include <vector>

#include "orbdet/core.hpp"

namespace orbdet::dynamics {

/// Cannonball drag with a single exponential atmosphere layer.
struct DragParams {
    double cd = 2.2;                // dimensionless
    double area_to_mass = 0.01;     // m^2/kg
    double rho0 = 3.614e-13;        // kg/m^3 at h0
    double h0 = 700.0;              // km
    double scale_height = 88.667;   // km

    /// Atmospheric density (kg/m^3) at geometric altitude `h` km.
    double density(double h) const;
};

/// Composition of the equations of motion. Two-body gravity is always on
/// unless `freeze` is set, which zeroes every acceleration (test fixture only).
struct ForceModel {
    bool j2 = false;
    bool drag = false;
    DragParams drag_params;
    bool freeze = false;

    void validate() const;

    static ForceModel two_body() { return {}; }
    static ForceModel with_j2() { return {.j2 = true, .drag = false, .drag_params = {}}; }
    static ForceModel full() { return {.j2 = true, .drag = true, .drag_params = {}}; }
};

enum class IntegratorMethod { RK4, RKF45 };

struct IntegratorConfig {
    IntegratorMethod method = IntegratorMethod::RKF45;
    double fixed_step = 10.0;   // s, RK4 only
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;     // km (and km/s)
    double min_step = 1e-6;     // s
    double max_step = 300.0;    // s

    void validate() const;

    static IntegratorConfig rk4(double step) {
        return {.method = IntegratorMethod::RK4, .fixed_step = step};
    }
    static IntegratorConfig rkf45(double rel_tol, double abs_tol) {
        return {.method = IntegratorMethod::RKF45, .rel_tol = rel_tol, .abs_tol = abs_tol};
    }
};

/// Total acceleration in km/s^2 for an ECI state.
Vec3 acceleration(const StateVector& s, const ForceModel& fm);

/// Cowell integration of the full equations of motion over [t, t + dt].
/// Throws Reentry (with the epoch of first violation) when an accepted step
/// lands below the surface, IntegrationFailure on step-size underflow.
StateVector propagate(const StateVector& s, const ForceModel& fm,
                      const IntegratorConfig& cfg, double dt);

/// d propagate / d state by central differences. Perturbed trajectories
/// replay the nominal trajectory's accepted step sequence, so the adaptive
/// step selector does not inject noise into the difference quotients.
Mat6 state_transition_jacobian(const StateVector& s, const ForceModel& fm, double dt,
                               const IntegratorConfig& cfg);

/// Finite-difference perturbation sizes.
inline constexpr double kJacobianPositionDelta = 1e-5;  // km
inline constexpr double kJacobianVelocityDelta = 1e-8;  // km/s

/// Specific orbital energy v^2/2 - mu/|r| (km^2/s^2).
double specific_energy(const StateVector& s);

/// Semi-major axis from vis-viva (km).
double semi_major_axis(const StateVector& s);

namespace detail {

struct Trajectory {
    Vec6 final_state;
    std::vector<double> steps;  // accepted step sizes, in order
};

/// Adaptive or fixed-step integration recording the accepted steps.
Trajectory integrate(const Vec6& y0, double t0, double dt, const ForceModel& fm,
                     const IntegratorConfig& cfg);

/// Integrates through a prescribed step sequence with the configured scheme.
Vec6 integrate_steps(const Vec6& y0, double t0, const std::vector<double>& steps,
                     const ForceModel& fm, IntegratorMethod method);

}  // namespace detail

}  // namespace orbdet::dynamics
