#pragma once

#include "orbdet/core.hpp"

namespace orbdet {

/// Classical Keplerian elements. Angles in radians.
struct OrbitalElements {
    double a = 0.0;     // km
    double e = 0.0;
    double i = 0.0;
    double raan = 0.0;
    double argp = 0.0;
    double nu = 0.0;

    /// a > earth_radius, 0 <= e < 1. Throws UnsupportedOrbit for e >= 1.
    void validate() const;
};

/// Inertial state at `epoch`.
StateVector elements_to_state(const OrbitalElements& el, Epoch epoch = {},
                              double mu = constants::mu);

/// Inverse of elements_to_state for bound orbits. Circular orbits report
/// argp = 0 with nu measured from the node; equatorial orbits report raan = 0.
/// Angles are wrapped to [0, 2 pi).
OrbitalElements state_to_elements(const StateVector& s, double mu = constants::mu);

}  // namespace orbdet
