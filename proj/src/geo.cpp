#include "locswitch/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "locswitch/errors.hpp"

namespace locswitch {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_lon(double lon) noexcept {
    // Into [-pi, pi).
    double w = std::fmod(lon + kPi, 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    return w - kPi;
}

}  // namespace

bool is_valid(const GeoPoint& p) noexcept {
    return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -kPi / 2 &&
           p.lat <= kPi / 2 && p.lon >= -kPi && p.lon < kPi;
}

bool is_valid(const PlanarPoint& p) noexcept {
    return std::isfinite(p.x) && std::isfinite(p.y);
}

bool is_valid(const Position& p) noexcept {
    return std::visit([](const auto& q) { return is_valid(q); }, p);
}

double haversine_distance(const GeoPoint& a, const GeoPoint& b, const EarthModel& earth) {
    const double s_lat = std::sin((a.lat - b.lat) / 2.0);
    const double s_lon = std::sin((a.lon - b.lon) / 2.0);
    double h = s_lat * s_lat + std::cos(a.lat) * std::cos(b.lat) * s_lon * s_lon;
    h = std::clamp(h, 0.0, 1.0);
    return 2.0 * std::asin(std::sqrt(h)) * earth.radius_km;
}

double planar_distance(const PlanarPoint& a, const PlanarPoint& b) noexcept {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double time_to_switch(double distance_m, double speed_mps) {
    if (!(speed_mps > 0.0)) throw NonPositiveSpeed(speed_mps);
    if (distance_m < 0.0) throw std::invalid_argument("switch distance must be non-negative");
    return distance_m / speed_mps;
}

double distance_m(const Position& a, const Position& b, const EarthModel& earth) {
    if (const auto* ga = std::get_if<GeoPoint>(&a)) {
        const auto* gb = std::get_if<GeoPoint>(&b);
        if (gb == nullptr) throw FrameMismatch("distance between outdoor and indoor positions");
        return haversine_distance(*ga, *gb, earth) * 1000.0;
    }
    const auto* pb = std::get_if<PlanarPoint>(&b);
    if (pb == nullptr) throw FrameMismatch("distance between indoor and outdoor positions");
    return planar_distance(std::get<PlanarPoint>(a), *pb);
}

Position step_toward(const Position& from, const Position& to, double step_m,
                     const EarthModel& earth) {
    const double remaining = distance_m(from, to, earth);
    if (remaining <= step_m) return to;
    const double f = step_m / remaining;
    if (const auto* pa = std::get_if<PlanarPoint>(&from)) {
        const auto& pb = std::get<PlanarPoint>(to);
        return PlanarPoint{pa->x + f * (pb.x - pa->x), pa->y + f * (pb.y - pa->y)};
    }
    const auto& ga = std::get<GeoPoint>(from);
    const auto& gb = std::get<GeoPoint>(to);
    const double dlon = wrap_lon(gb.lon - ga.lon);
    return GeoPoint{ga.lat + f * (gb.lat - ga.lat), wrap_lon(ga.lon + f * dlon)};
}

Position offset_by(const Position& p, double east_m, double north_m, const EarthModel& earth) {
    if (const auto* pp = std::get_if<PlanarPoint>(&p)) {
        return PlanarPoint{pp->x + east_m, pp->y + north_m};
    }
    const auto& g = std::get<GeoPoint>(p);
    const double r = earth.radius_km * 1000.0;
    const double lat = std::clamp(g.lat + north_m / r, -kPi / 2, kPi / 2);
    const double c = std::max(std::cos(g.lat), 1e-12);
    return GeoPoint{lat, wrap_lon(g.lon + east_m / (r * c))};
}

LocalTangent::LocalTangent(GeoPoint anchor, EarthModel earth)
    : anchor_(anchor), radius_m_(earth.radius_km * 1000.0), cos_lat_(std::cos(anchor.lat)) {}

GeoPoint LocalTangent::to_geo(const PlanarPoint& local) const noexcept {
    return GeoPoint{anchor_.lat + local.y / radius_m_,
                    wrap_lon(anchor_.lon + local.x / (radius_m_ * cos_lat_))};
}

PlanarPoint LocalTangent::to_local(const GeoPoint& g) const noexcept {
    return PlanarPoint{wrap_lon(g.lon - anchor_.lon) * radius_m_ * cos_lat_,
                       (g.lat - anchor_.lat) * radius_m_};
}

double deg_to_rad(double deg) noexcept { return deg * kPi / 180.0; }
double rad_to_deg(double rad) noexcept { return rad * 180.0 / kPi; }

}  // namespace locswitch
