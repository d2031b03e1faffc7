#pragma once

#include <array>
#include <optional>

#include "orbdet/core.hpp"

namespace orbdet::iod {

/// Geodetic site on the WGS84 ellipsoid.
struct GroundStation {
    double latitude = 0.0;   // rad, geodetic
    double longitude = 0.0;  // rad, (-pi, pi]
    double altitude = 0.0;   // km above the ellipsoid

    void validate() const;
    static GroundStation from_degrees(double lat_deg, double lon_deg, double alt_km);
};

struct RangeMeasurement {
    GroundStation station;
    Epoch epoch;
    double range = 0.0;                    // km
    std::optional<double> range_rate;      // km/s, carried but unused by trilateration
};

Vec3 geodetic_to_ecef(const GroundStation& g);

/// Outward ellipsoid normal at the station.
Vec3 ellipsoid_normal(const GroundStation& g);

/// Both algebraic sphere-intersection points, larger geocentric radius first.
struct TrilaterationCandidates {
    Vec3 upper;
    Vec3 lower;
};

TrilaterationCandidates trilaterate_candidates(const RangeMeasurement& m1,
                                               const RangeMeasurement& m2,
                                               const RangeMeasurement& m3);

/// ECEF position consistent with three simultaneous ranges; the
/// above-Earth (larger |p|) branch.
Vec3 trilaterate(const RangeMeasurement& m1, const RangeMeasurement& m2,
                 const RangeMeasurement& m3);

struct GibbsOptions {
    double coplanarity_tol = 0.0175;  // ~1 deg
    double min_separation = 0.1 * 3.14159265358979323846 / 180.0;  // rad
};

/// Velocity at r2 from three coplanar position vectors (km, inertial).
Vec3 gibbs(const Vec3& r1, const Vec3& r2, const Vec3& r3, double mu = constants::mu,
           const GibbsOptions& opts = {});

/// Ranges from three stations taken at one epoch.
using RangeTriplet = std::array<RangeMeasurement, 3>;

/// Trilateration at each epoch, rotation into ECI, then Gibbs. Returns the
/// inertial state at the middle epoch. Failures carry the offending epoch.
StateVector iod_pipeline(const std::array<RangeTriplet, 3>& sets,
                         const GibbsOptions& opts = {});

}  // namespace orbdet::iod
