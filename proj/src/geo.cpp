#include "aisdet/geo.hpp"

#include <cmath>
#include <stdexcept>

namespace aisdet {

double wrap_pi(double rad) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(rad + std::numbers::pi, two_pi);
  if (r <= 0.0) r += two_pi;
  return r - std::numbers::pi;
}

double geodesic_distance(const GeoPos& a, const GeoPos& b) {
  const double phi1 = deg2rad(a.lat);
  const double phi2 = deg2rad(b.lat);
  const double dphi = phi2 - phi1;
  const double dlam = wrap_pi(deg2rad(b.lon - a.lon));
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlam / 2.0);
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

PlanarPos project_local(const GeoPos& origin, const GeoPos& p) {
  if (geodesic_distance(origin, p) > 500'000.0) {
    throw std::domain_error("project_local: point farther than 500 km from origin");
  }
  const double dlam = wrap_pi(deg2rad(p.lon - origin.lon));
  const double dphi = deg2rad(p.lat - origin.lat);
  return PlanarPos{kEarthRadiusM * dlam * std::cos(deg2rad(origin.lat)),
                   kEarthRadiusM * dphi, origin};
}

GeoPos unproject_local(const PlanarPos& p) {
  const double dphi = p.y / kEarthRadiusM;
  const double dlam = p.x / (kEarthRadiusM * std::cos(deg2rad(p.origin.lat)));
  return GeoPos{p.origin.lat + rad2deg(dphi), p.origin.lon + rad2deg(dlam)};
}

double angle_diff_deg(double a_deg, double b_deg) {
  double d = std::fmod(std::fabs(a_deg - b_deg), 360.0);
  if (d > 180.0) d = 360.0 - d;
  return d;
}

double math_rad_to_compass_deg(double psi_rad) {
  double deg = 90.0 - rad2deg(psi_rad);
  deg = std::fmod(deg, 360.0);
  if (deg < 0.0) deg += 360.0;
  return deg;
}

}  // namespace aisdet
