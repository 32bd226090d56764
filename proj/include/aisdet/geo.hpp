#pragma once

#include <numbers>

namespace aisdet {

// WGS-84 mean earth radius; spherical haversine distances stay within 0.6% of
// ellipsoidal geodesics, far below every threshold they feed.
inline constexpr double kEarthRadiusM = 6'371'008.8;

inline constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

struct GeoPos {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
};

// Local tangent-plane coordinates in meters east/north of `origin`.
struct PlanarPos {
  double x = 0.0;
  double y = 0.0;
  GeoPos origin{};
};

// Great-circle distance in meters (spherical haversine).
double geodesic_distance(const GeoPos& a, const GeoPos& b);

// Equirectangular local projection: x = R*dlon*cos(lat0), y = R*dlat.
// Throws std::domain_error beyond 500 km separation; callers re-anchor.
PlanarPos project_local(const GeoPos& origin, const GeoPos& p);
GeoPos unproject_local(const PlanarPos& p);

// Minimal angular separation on the circle, degrees in [0, 180].
double angle_diff_deg(double a_deg, double b_deg);

// Normalize an angle in radians to (-pi, pi].
double wrap_pi(double rad);

// AIS course-over-ground (degrees clockwise from north) <-> math heading
// (radians counterclockwise from east) used by the motion models.
inline double compass_to_math_rad(double cog_deg) {
  return wrap_pi(std::numbers::pi / 2.0 - deg2rad(cog_deg));
}
double math_rad_to_compass_deg(double psi_rad);

}  // namespace aisdet
