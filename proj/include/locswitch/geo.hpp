#pragma once

#include <variant>

namespace locswitch {

/// A point on the sphere. Both angles in radians.
struct GeoPoint {
    double lat = 0.0;  ///< [-pi/2, pi/2]
    double lon = 0.0;  ///< [-pi, pi)

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// A point in a local planar frame, meters.
struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

/// Outdoor positions are GeoPoints, indoor positions are PlanarPoints.
using Position = std::variant<GeoPoint, PlanarPoint>;

struct EarthModel {
    double radius_km = 6371.0;
};

bool is_valid(const GeoPoint& p) noexcept;
bool is_valid(const PlanarPoint& p) noexcept;
bool is_valid(const Position& p) noexcept;

/// Great-circle distance in kilometers (haversine form). The arcsin argument is
/// clamped to [0, 1] so near-antipodal rounding cannot produce NaN.
double haversine_distance(const GeoPoint& a, const GeoPoint& b, const EarthModel& earth = {});

/// Euclidean distance in meters.
double planar_distance(const PlanarPoint& a, const PlanarPoint& b) noexcept;

/// Walking time to cover `distance_m` at `speed_mps`. Throws NonPositiveSpeed.
double time_to_switch(double distance_m, double speed_mps);

/// Distance in meters between two positions of the same frame; throws
/// FrameMismatch otherwise.
double distance_m(const Position& a, const Position& b, const EarthModel& earth = {});

/// Moves `from` by `step_m` meters toward `to`, landing exactly on `to` when
/// the remaining distance is not larger than the step.
Position step_toward(const Position& from, const Position& to, double step_m,
                     const EarthModel& earth = {});

/// Displaces a position by east/north offsets in meters. Geo points use the
/// local tangent-plane approximation, which is accurate at the few-kilometer
/// scale of the simulated fields.
Position offset_by(const Position& p, double east_m, double north_m,
                   const EarthModel& earth = {});

/// Maps a local meters rectangle onto the sphere around an anchor point
/// (small-area equirectangular approximation).
class LocalTangent {
public:
    LocalTangent(GeoPoint anchor, EarthModel earth);

    GeoPoint to_geo(const PlanarPoint& local) const noexcept;
    PlanarPoint to_local(const GeoPoint& g) const noexcept;

    const GeoPoint& anchor() const noexcept { return anchor_; }

private:
    GeoPoint anchor_;
    double radius_m_;
    double cos_lat_;
};

double deg_to_rad(double deg) noexcept;
double rad_to_deg(double rad) noexcept;

}  // namespace locswitch
