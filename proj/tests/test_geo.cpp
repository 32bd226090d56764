#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "aisdet/geo.hpp"
#include "oracles.hpp"

using namespace aisdet;

TEST_CASE("geodesic distance basics") {
  CHECK(geodesic_distance({33.0, 126.0}, {33.0, 126.0}) == 0.0);

  // Frozen from the haversine oracle with R = 6 371 008.8 m.
  const double d = geodesic_distance({33.0, 126.0}, {33.0, 127.0});
  CHECK(d == doctest::Approx(93255.68997927282).epsilon(1e-12));
  CHECK(d == doctest::Approx(oracle::haversine_m(33.0, 126.0, 33.0, 127.0)).epsilon(1e-12));

  const double anti = geodesic_distance({0.0, 0.0}, {0.0, 180.0});
  CHECK(anti == doctest::Approx(20015114.442035925).epsilon(1e-12));
  CHECK(anti == doctest::Approx(std::numbers::pi * kEarthRadiusM).epsilon(1e-12));
}

TEST_CASE("geodesic distance agrees with the oracle on random pairs") {
  oracle::Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const GeoPos a{rng.uniform(-80, 80), rng.uniform(-180, 180)};
    const GeoPos b{rng.uniform(-80, 80), rng.uniform(-180, 180)};
    const double got = geodesic_distance(a, b);
    const double want = oracle::haversine_m(a.lat, a.lon, b.lat, b.lon);
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("distance symmetry and triangle inequality") {
  oracle::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const GeoPos a{rng.uniform(-80, 80), rng.uniform(-180, 180)};
    const GeoPos b{rng.uniform(-80, 80), rng.uniform(-180, 180)};
    const GeoPos c{rng.uniform(-80, 80), rng.uniform(-180, 180)};
    const double ab = geodesic_distance(a, b);
    const double ba = geodesic_distance(b, a);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    const double ac = geodesic_distance(a, c);
    const double cb = geodesic_distance(c, b);
    CHECK(ab <= ac + cb + 1e-6 * (ab + 1.0));
  }
}

TEST_CASE("local projection basics") {
  const GeoPos origin{33.0, 126.0};
  const PlanarPos at_origin = project_local(origin, origin);
  CHECK(at_origin.x == 0.0);
  CHECK(at_origin.y == 0.0);

  // 0.01 deg due north: y = R * dphi, frozen from the oracle.
  const PlanarPos north = project_local(origin, {33.01, 126.0});
  CHECK(north.x == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(north.y == doctest::Approx(1111.9508023353292).epsilon(1e-12));

  CHECK_THROWS_AS(project_local(origin, {38.0, 126.0}), std::domain_error);  // ~556 km
}

TEST_CASE("projection round-trip within 0.1 m up to 200 km") {
  oracle::Rng rng(13);
  const GeoPos origin{34.5, 128.0};
  for (int i = 0; i < 500; ++i) {
    const GeoPos p{origin.lat + rng.uniform(-1.5, 1.5), origin.lon + rng.uniform(-1.5, 1.5)};
    if (geodesic_distance(origin, p) > 200'000.0) continue;
    const GeoPos back = unproject_local(project_local(origin, p));
    CHECK(geodesic_distance(p, back) < 0.1);
  }
}

TEST_CASE("projection magnitude tracks geodesic distance within 0.5% at 50 km") {
  oracle::Rng rng(17);
  const GeoPos origin{34.0, 127.0};
  int tested = 0;
  for (int i = 0; i < 4000 && tested < 1000; ++i) {
    const GeoPos p{origin.lat + rng.uniform(-0.45, 0.45), origin.lon + rng.uniform(-0.55, 0.55)};
    const double d = geodesic_distance(origin, p);
    if (d > 50'000.0 || d < 1.0) continue;
    ++tested;
    const PlanarPos proj = project_local(origin, p);
    const double planar = std::hypot(proj.x, proj.y);
    CHECK(std::fabs(planar - d) / d < 0.005);
  }
  CHECK(tested == 1000);
}

TEST_CASE("projection linearity near the origin") {
  oracle::Rng rng(19);
  const GeoPos origin{33.5, 126.5};
  for (int i = 0; i < 200; ++i) {
    const GeoPos a{origin.lat + rng.uniform(-0.04, 0.04), origin.lon + rng.uniform(-0.05, 0.05)};
    const GeoPos b{origin.lat + rng.uniform(-0.04, 0.04), origin.lon + rng.uniform(-0.05, 0.05)};
    if (geodesic_distance(a, b) > 10'000.0) continue;
    const GeoPos mid{0.5 * (a.lat + b.lat), 0.5 * (a.lon + b.lon)};
    const PlanarPos pa = project_local(origin, a);
    const PlanarPos pb = project_local(origin, b);
    const PlanarPos pm = project_local(origin, mid);
    CHECK(std::hypot(pm.x - 0.5 * (pa.x + pb.x), pm.y - 0.5 * (pa.y + pb.y)) < 1.0);
  }
}

TEST_CASE("angle differences") {
  CHECK(angle_diff_deg(10.0, 350.0) == doctest::Approx(20.0));
  CHECK(angle_diff_deg(90.0, 90.0) == 0.0);
  CHECK(angle_diff_deg(0.0, 180.0) == doctest::Approx(180.0));
  CHECK(angle_diff_deg(359.9, 0.1) == doctest::Approx(0.2));
}

TEST_CASE("compass / math heading conversions invert each other") {
  oracle::Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    const double cog = rng.uniform(0.0, 360.0);
    const double back = math_rad_to_compass_deg(compass_to_math_rad(cog));
    CHECK(angle_diff_deg(cog, back) < 1e-9);
  }
}
