#include "orbdet/iod.hpp"

#include <numbers>
#include <string>

namespace orbdet::iod {

namespace {

constexpr double kEpochTolerance = 1e-6;  // s

double eccentricity_squared() {
    constexpr double f = constants::flattening;
    return f * (2.0 - f);
}

double angle_between(const Vec3& a, const Vec3& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

Error relabel(const Error& e, double epoch) {
    return Error(e.code(), "epoch " + std::to_string(epoch) + " s: " + e.what(), epoch);
}

}  // namespace

void GroundStation::validate() const {
    if (!(std::abs(latitude) <= std::numbers::pi / 2.0)) {
        throw Error(ErrorCode::InvalidArgument, "station latitude outside [-pi/2, pi/2]");
    }
    if (!(longitude > -std::numbers::pi && longitude <= std::numbers::pi)) {
        throw Error(ErrorCode::InvalidArgument, "station longitude outside (-pi, pi]");
    }
    if (!(altitude > -1.0) || !std::isfinite(altitude)) {
        throw Error(ErrorCode::InvalidArgument, "station altitude must exceed -1 km");
    }
}

GroundStation GroundStation::from_degrees(double lat_deg, double lon_deg, double alt_km) {
    constexpr double deg = std::numbers::pi / 180.0;
    double lon = std::remainder(lon_deg * deg, 2.0 * std::numbers::pi);
    if (lon <= -std::numbers::pi) lon += 2.0 * std::numbers::pi;
    GroundStation g{lat_deg * deg, lon, alt_km};
    g.validate();
    return g;
}

Vec3 geodetic_to_ecef(const GroundStation& g) {
    g.validate();
    const double e2 = eccentricity_squared();
    const double sin_lat = std::sin(g.latitude);
    const double cos_lat = std::cos(g.latitude);
    const double n = constants::earth_radius / std::sqrt(1.0 - e2 * sin_lat * sin_lat);
    return Vec3{(n + g.altitude) * cos_lat * std::cos(g.longitude),
                (n + g.altitude) * cos_lat * std::sin(g.longitude),
                (n * (1.0 - e2) + g.altitude) * sin_lat};
}

Vec3 ellipsoid_normal(const GroundStation& g) {
    const double cos_lat = std::cos(g.latitude);
    return Vec3{cos_lat * std::cos(g.longitude), cos_lat * std::sin(g.longitude),
                std::sin(g.latitude)};
}

TrilaterationCandidates trilaterate_candidates(const RangeMeasurement& m1,
                                               const RangeMeasurement& m2,
                                               const RangeMeasurement& m3) {
    if (std::abs(m1.epoch - m2.epoch) > kEpochTolerance ||
        std::abs(m1.epoch - m3.epoch) > kEpochTolerance) {
        throw Error(ErrorCode::EpochMismatch, "trilateration needs simultaneous ranges",
                    m1.epoch.t);
    }
    for (const auto* m : {&m1, &m2, &m3}) {
        if (!(m->range > 0.0) || !std::isfinite(m->range)) {
            throw Error(ErrorCode::InvalidArgument, "ranges must be positive", m->epoch.t);
        }
    }

    const Vec3 s1 = geodetic_to_ecef(m1.station);
    const Vec3 s2 = geodetic_to_ecef(m2.station);
    const Vec3 s3 = geodetic_to_ecef(m3.station);

    // Local frame: s1 at the origin, s2 on the x-axis, s3 in the xy-plane.
    const Vec3 d12 = s2 - s1;
    const Vec3 d13 = s3 - s1;
    const double d = d12.norm();
    const double span = std::max(d, d13.norm());
    if (d <= 1e-9 * constants::earth_radius) {
        throw Error(ErrorCode::DegenerateGeometry, "coincident stations", m1.epoch.t);
    }
    const Vec3 ex = d12 / d;
    const double i = ex.dot(d13);
    const Vec3 ey_raw = d13 - i * ex;
    const double j = ey_raw.norm();
    if (j <= 1e-8 * span) {
        throw Error(ErrorCode::DegenerateGeometry, "collinear stations", m1.epoch.t);
    }
    const Vec3 ey = ey_raw / j;
    const Vec3 ez = ex.cross(ey);

    const double r1 = m1.range;
    const double r2 = m2.range;
    const double r3 = m3.range;
    const double x = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    const double y = (r1 * r1 - r3 * r3 + i * i + j * j) / (2.0 * j) - (i / j) * x;
    double z2 = r1 * r1 - x * x - y * y;
    if (z2 < 0.0) {
        if (z2 < -1e-9 * r1 * r1) {
            throw Error(ErrorCode::InfeasibleMeasurement,
                        "ranges admit no common intersection point", m1.epoch.t);
        }
        z2 = 0.0;
    }
    const double z = std::sqrt(z2);

    const Vec3 base = s1 + x * ex + y * ey;
    Vec3 a = base + z * ez;
    Vec3 b = base - z * ez;
    if (b.norm() > a.norm()) std::swap(a, b);
    return {a, b};
}

Vec3 trilaterate(const RangeMeasurement& m1, const RangeMeasurement& m2,
                 const RangeMeasurement& m3) {
    return trilaterate_candidates(m1, m2, m3).upper;
}

Vec3 gibbs(const Vec3& r1, const Vec3& r2, const Vec3& r3, double mu,
           const GibbsOptions& opts) {
    if (!r1.allFinite() || !r2.allFinite() || !r3.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "non-finite position vector");
    }
    if (angle_between(r1, r2) < opts.min_separation ||
        angle_between(r2, r3) < opts.min_separation ||
        angle_between(r1, r3) < opts.min_separation) {
        throw Error(ErrorCode::IllConditionedGeometry,
                    "position vectors are too close to parallel for Gibbs");
    }

    const Vec3 z12 = r1.cross(r2);
    const Vec3 z23 = r2.cross(r3);
    const Vec3 z31 = r3.cross(r1);

    const double coplanarity = r1.normalized().dot(z23.normalized());
    if (std::abs(coplanarity) > opts.coplanarity_tol) {
        throw Error(ErrorCode::NonCoplanarInput,
                    "position vectors are not coplanar (|u1 . n23| = " +
                        std::to_string(std::abs(coplanarity)) + ")");
    }

    const double n1 = r1.norm();
    const double n2 = r2.norm();
    const double n3 = r3.norm();

    const Vec3 n = n1 * z23 + n2 * z31 + n3 * z12;
    const Vec3 d = z12 + z23 + z31;
    const Vec3 s = r1 * (n2 - n3) + r2 * (n3 - n1) + r3 * (n1 - n2);

    const double nd = n.norm() * d.norm();
    if (!(nd > 0.0)) {
        throw Error(ErrorCode::IllConditionedGeometry, "degenerate Gibbs geometry");
    }
    return std::sqrt(mu / nd) * (d.cross(r2) / n2 + s);
}

StateVector iod_pipeline(const std::array<RangeTriplet, 3>& sets, const GibbsOptions& opts) {
    std::array<Epoch, 3> epochs;
    for (std::size_t k = 0; k < 3; ++k) epochs[k] = sets[k][0].epoch;
    if (!(epochs[0] < epochs[1] && epochs[1] < epochs[2])) {
        throw Error(ErrorCode::EpochOrdering, "IOD epochs must be strictly increasing",
                    epochs[0].t);
    }

    std::array<Vec3, 3> inertial;
    for (std::size_t k = 0; k < 3; ++k) {
        try {
            const Vec3 ecef = trilaterate(sets[k][0], sets[k][1], sets[k][2]);
            inertial[k] = eci_to_ecef_rotation(epochs[k]).transpose() * ecef;
        } catch (const Error& e) {
            throw relabel(e, epochs[k].t);
        }
    }

    Vec3 v2;
    try {
        v2 = gibbs(inertial[0], inertial[1], inertial[2], constants::mu, opts);
    } catch (const Error& e) {
        throw relabel(e, epochs[1].t);
    }
    return StateVector{epochs[1], inertial[1], v2, Frame::ECI};
}

}  // namespace orbdet::iod
