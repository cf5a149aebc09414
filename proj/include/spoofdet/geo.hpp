#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "spoofdet/errors.hpp"

namespace spoofdet::geo {

using Vec3 = Eigen::Vector3d;

// WGS-84 ellipsoid
inline constexpr double kWgs84A = 6378137.0;
inline constexpr double kWgs84F = 1.0 / 298.257223563;

struct EcefPosition {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 vec() const { return {x, y, z}; }
    static EcefPosition from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
};

// Direction with the unit-norm invariant enforced on construction.
class UnitVector3 {
public:
    UnitVector3() : u_(1.0, 0.0, 0.0) {}

    // Normalizes; throws DegenerateGeometry for a near-zero input.
    static UnitVector3 normalized(const Vec3& v);

    double ux() const { return u_.x(); }
    double uy() const { return u_.y(); }
    double uz() const { return u_.z(); }
    const Vec3& vec() const { return u_; }

private:
    explicit UnitVector3(const Vec3& u) : u_(u) {}
    Vec3 u_;
};

// Per-satellite time series of ECEF positions, sorted by time.
class SatPositionTable {
public:
    void add(const std::string& sat, double t, const EcefPosition& pos);

    bool has(const std::string& sat) const { return entries_.count(sat) > 0; }
    std::vector<std::string> satellites() const;

    // Piecewise-linear interpolation; exact at knots.
    // Throws UnknownSatellite / OutOfRange.
    EcefPosition interpolate(const std::string& sat, double t) const;

    // Time span [first, last] for one satellite.
    std::pair<double, double> span(const std::string& sat) const;

    bool empty() const { return entries_.empty(); }

    // Every stored (sat, t, pos) knot, satellite-major in time order.
    std::vector<std::tuple<std::string, double, EcefPosition>> knots() const;

private:
    struct Knot {
        double t;
        EcefPosition pos;
    };
    std::map<std::string, std::vector<Knot>> entries_;
};

// Unit vector from receiver toward transmitter.
// Throws DegenerateGeometry if the positions coincide within 1 m.
UnitVector3 los_unit_vector(const EcefPosition& receiver,
                            const EcefPosition& transmitter);

// Geodetic latitude/longitude (radians) of an ECEF point, Bowring's method.
void ecef_to_geodetic(const EcefPosition& p, double& lat, double& lon);

// ENU components of (v - reference) at the reference's geodetic
// latitude/longitude.
Vec3 ecef_to_local(const EcefPosition& reference, const EcefPosition& v);

// Rotation taking ECEF difference vectors to ENU at the reference.
Eigen::Matrix3d ecef_to_enu_rotation(const EcefPosition& reference);

// Elevation of the receiver->target direction above the local horizon,
// degrees.
double elevation_deg(const EcefPosition& receiver, const EcefPosition& target);

// Point at geodetic latitude/longitude (radians) and ellipsoidal height h.
EcefPosition geodetic_to_ecef(double lat, double lon, double h = 0.0);

// Point displaced from `reference` by an ENU offset expressed at the
// reference.
EcefPosition offset_enu(const EcefPosition& reference, const Vec3& enu);

}  // namespace spoofdet::geo
