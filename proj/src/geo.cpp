#include "spoofdet/geo.hpp"

#include <algorithm>
#include <cmath>

namespace spoofdet::geo {

UnitVector3 UnitVector3::normalized(const Vec3& v) {
    const double n = v.norm();
    if (!(n > 1e-30) || !std::isfinite(n))
        throw DegenerateGeometry("cannot normalize near-zero vector");
    return UnitVector3(v / n);
}

void SatPositionTable::add(const std::string& sat, double t,
                           const EcefPosition& pos) {
    auto& knots = entries_[sat];
    if (!knots.empty() && t <= knots.back().t)
        throw OutOfRange("satellite table timestamps must strictly increase for " + sat);
    knots.push_back({t, pos});
}

std::vector<std::string> SatPositionTable::satellites() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [sat, _] : entries_) out.push_back(sat);
    return out;
}

std::pair<double, double> SatPositionTable::span(const std::string& sat) const {
    auto it = entries_.find(sat);
    if (it == entries_.end() || it->second.empty())
        throw UnknownSatellite("no positions for satellite " + sat);
    return {it->second.front().t, it->second.back().t};
}

std::vector<std::tuple<std::string, double, EcefPosition>>
SatPositionTable::knots() const {
    std::vector<std::tuple<std::string, double, EcefPosition>> out;
    for (const auto& [sat, knots] : entries_) {
        for (const Knot& k : knots) out.emplace_back(sat, k.t, k.pos);
    }
    return out;
}

EcefPosition SatPositionTable::interpolate(const std::string& sat,
                                           double t) const {
    auto it = entries_.find(sat);
    if (it == entries_.end())
        throw UnknownSatellite("no positions for satellite " + sat);
    const auto& knots = it->second;
    if (knots.size() < 2)
        throw OutOfRange("satellite " + sat + " needs at least 2 table entries");
    if (t < knots.front().t || t > knots.back().t)
        throw OutOfRange("time " + std::to_string(t) + " outside table span for " + sat);

    auto upper = std::upper_bound(
        knots.begin(), knots.end(), t,
        [](double value, const Knot& k) { return value < k.t; });
    if (upper == knots.begin()) return knots.front().pos;
    if (upper == knots.end()) return knots.back().pos;
    const Knot& hi = *upper;
    const Knot& lo = *(upper - 1);
    const double w = (t - lo.t) / (hi.t - lo.t);
    return EcefPosition::from(lo.pos.vec() + w * (hi.pos.vec() - lo.pos.vec()));
}

UnitVector3 los_unit_vector(const EcefPosition& receiver,
                            const EcefPosition& transmitter) {
    const Vec3 d = transmitter.vec() - receiver.vec();
    if (d.norm() <= 1.0)
        throw DegenerateGeometry("receiver and transmitter coincide within 1 m");
    return UnitVector3::normalized(d);
}

void ecef_to_geodetic(const EcefPosition& p, double& lat, double& lon) {
    const double a = kWgs84A;
    const double f = kWgs84F;
    const double b = a * (1.0 - f);
    const double e2 = f * (2.0 - f);
    const double ep2 = e2 / (1.0 - e2);

    lon = std::atan2(p.y, p.x);
    const double rho = std::hypot(p.x, p.y);
    if (rho < 1e-9) {
        lat = (p.z >= 0.0) ? M_PI / 2.0 : -M_PI / 2.0;
        return;
    }
    // Bowring's closed-form start, one Newton refinement is plenty at
    // terrestrial altitudes.
    double beta = std::atan2(p.z * a, rho * b);
    for (int i = 0; i < 3; ++i) {
        lat = std::atan2(p.z + ep2 * b * std::pow(std::sin(beta), 3),
                         rho - e2 * a * std::pow(std::cos(beta), 3));
        const double beta_next = std::atan2((1.0 - f) * std::sin(lat), std::cos(lat));
        if (std::fabs(beta_next - beta) < 1e-15) {
            beta = beta_next;
            break;
        }
        beta = beta_next;
    }
    lat = std::atan2(p.z + ep2 * b * std::pow(std::sin(beta), 3),
                     rho - e2 * a * std::pow(std::cos(beta), 3));
}

Eigen::Matrix3d ecef_to_enu_rotation(const EcefPosition& reference) {
    if (reference.vec().norm() < 1.0)
        throw DegenerateGeometry("reference at Earth center");
    double lat = 0.0, lon = 0.0;
    ecef_to_geodetic(reference, lat, lon);
    const double sl = std::sin(lat), cl = std::cos(lat);
    const double so = std::sin(lon), co = std::cos(lon);
    Eigen::Matrix3d r;
    r << -so, co, 0.0,
         -sl * co, -sl * so, cl,
         cl * co, cl * so, sl;
    return r;
}

Vec3 ecef_to_local(const EcefPosition& reference, const EcefPosition& v) {
    return ecef_to_enu_rotation(reference) * (v.vec() - reference.vec());
}

double elevation_deg(const EcefPosition& receiver, const EcefPosition& target) {
    const Vec3 enu = ecef_to_local(receiver, target);
    const double horiz = std::hypot(enu.x(), enu.y());
    return std::atan2(enu.z(), horiz) * 180.0 / M_PI;
}

EcefPosition geodetic_to_ecef(double lat, double lon, double h) {
    const double e2 = kWgs84F * (2.0 - kWgs84F);
    const double sl = std::sin(lat), cl = std::cos(lat);
    const double n = kWgs84A / std::sqrt(1.0 - e2 * sl * sl);
    return {(n + h) * cl * std::cos(lon), (n + h) * cl * std::sin(lon),
            (n * (1.0 - e2) + h) * sl};
}

EcefPosition offset_enu(const EcefPosition& reference, const Vec3& enu) {
    const Eigen::Matrix3d r = ecef_to_enu_rotation(reference);
    return EcefPosition::from(reference.vec() + r.transpose() * enu);
}

}  // namespace spoofdet::geo
