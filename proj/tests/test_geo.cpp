#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "opgt/error.hpp"
#include "opgt/geo.hpp"

using namespace opgt;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double deg(double d) { return d * kPi / 180.0; }

// Reference vectors frozen from an independent high-precision transverse
// Mercator evaluation (50-digit arithmetic, numerically derived series).
struct UtmVector {
  double lat, lon;
  int zone;
  bool north;
  double easting, northing;
};
const UtmVector kUtmVectors[] = {
    {48.1375, 11.5755, 32, true, 691602.6596870066, 5334791.1445362528},
    {-33.8568, 151.2153, 56, false, 334900.5696522619, 6252288.7528882924},
    {63.8258, 20.2630, 34, true, 463728.089272526, 7077812.1787083157},
    {37.7749, -122.4194, 10, true, 551130.7684812823, 4180998.8814990615},
    {83.5, -70.0, 19, true, 487362.1111606678, 9272385.4513209682},
    {-45.8667, 170.5, 59, false, 461190.9907804697, 4920641.3407528944},
};
}  // namespace

TEST_CASE("geodetic_to_utm central meridian identities") {
  const UtmPosition u = geodetic_to_utm({0.0, 3.0, 0.0});
  CHECK(u.zone == 31);
  CHECK(u.north);
  CHECK(u.easting_m == doctest::Approx(500000.0).epsilon(1e-12));
  CHECK(u.northing_m == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));

  const UtmPosition s = geodetic_to_utm({-0.0001, 3.0, 0.0});
  CHECK_FALSE(s.north);
  CHECK(s.northing_m < 10000000.0);
  CHECK(s.northing_m > 10000000.0 - 12.0);
}

TEST_CASE("geodetic_to_utm matches independent reference conversions") {
  for (const auto& v : kUtmVectors) {
    const UtmPosition u = geodetic_to_utm({v.lat, v.lon, 100.0});
    CHECK(u.zone == v.zone);
    CHECK(u.north == v.north);
    CHECK(std::abs(u.easting_m - v.easting) < 1e-6);
    CHECK(std::abs(u.northing_m - v.northing) < 1e-6);
    CHECK(u.altitude_m == 100.0);
  }
}

TEST_CASE("geodetic_to_utm rejects latitudes outside the UTM band") {
  CHECK_THROWS_AS(geodetic_to_utm({84.5, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(geodetic_to_utm({-85.0, 10.0, 0.0}), DomainError);
}

TEST_CASE("UTM round trip within 1e-6 m") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> lat(-84.0, 84.0);
  std::uniform_real_distribution<double> lon(-180.0, 180.0);
  for (int i = 0; i < 2000; ++i) {
    const GeodeticPosition g{lat(rng), lon(rng), 50.0};
    const UtmPosition u = geodetic_to_utm(g);
    const GeodeticPosition back = utm_to_geodetic(u);
    const UtmPosition u2 = geodetic_to_utm(back, u.zone);
    CHECK(std::abs(u2.easting_m - u.easting_m) < 1e-6);
    CHECK(std::abs(u2.northing_m - u.northing_m) < 1e-6);
    // degrees of latitude/longitude are ~1e-11 per micrometer here
    CHECK(std::abs(back.latitude_deg - g.latitude_deg) < 1e-9);
  }
}

TEST_CASE("normalized_offset examples") {
  const FrameGeometry fg = FrameGeometry::of(640, 480);
  CHECK(fg.center.x1 == 319.5);
  CHECK(fg.center.x2 == 239.5);

  const NormalizedOffset at_center = normalized_offset({319.5, 239.5}, fg);
  CHECK(at_center.w1 == 0.0);
  CHECK(at_center.w2 == 0.0);

  const NormalizedOffset right_edge = normalized_offset({639.5, 239.5}, fg);
  CHECK(right_edge.w1 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(right_edge.w2 == 0.0);

  const NormalizedOffset q = normalized_offset({159.5, 359.5}, fg);
  CHECK(q.w1 == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(q.w2 == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("normalized_offset is affine in the pixel position") {
  const FrameGeometry fg = FrameGeometry::of(640, 480);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> px(0.0, 639.0);
  std::uniform_real_distribution<double> py(0.0, 479.0);
  for (int i = 0; i < 200; ++i) {
    const PixelPoint p{px(rng), py(rng)};
    const PixelPoint doubled{fg.center.x1 + 2.0 * (p.x1 - fg.center.x1),
                             fg.center.x2 + 2.0 * (p.x2 - fg.center.x2)};
    const NormalizedOffset w = normalized_offset(p, fg);
    const NormalizedOffset w2 = normalized_offset(doubled, fg);
    CHECK(w2.w1 == doctest::Approx(2.0 * w.w1).epsilon(1e-12));
    CHECK(w2.w2 == doctest::Approx(2.0 * w.w2).epsilon(1e-12));
  }
}

TEST_CASE("misalignment_from_offset examples") {
  const CameraIntrinsics c{deg(60.0), deg(46.8)};
  const MisalignmentAngles zero = misalignment_from_offset({0.0, 0.0}, c);
  CHECK(zero.d_phi_rad == 0.0);
  CHECK(zero.d_theta_rad == 0.0);

  const MisalignmentAngles edge = misalignment_from_offset({0.5, 0.0}, c);
  CHECK(edge.d_phi_rad == doctest::Approx(deg(30.0)).epsilon(1e-14));

  // quarter-frame offset, frozen from high-precision evaluation of
  // arctan(0.5 tan 30 deg)
  const MisalignmentAngles quarter = misalignment_from_offset({0.25, 0.0}, c);
  CHECK(quarter.d_phi_rad == doctest::Approx(0.2810349015028136).epsilon(1e-14));
  CHECK(quarter.d_phi_rad * 180.0 / kPi ==
        doctest::Approx(16.102113751986015).epsilon(1e-14));
}

TEST_CASE("frame-edge identity holds for every field of view") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> fov(0.01, kPi - 0.01);
  for (int i = 0; i < 500; ++i) {
    const CameraIntrinsics c{fov(rng), fov(rng)};
    const MisalignmentAngles a = misalignment_from_offset({0.5, -0.5}, c);
    CHECK(a.d_phi_rad == doctest::Approx(0.5 * c.hfov_rad).epsilon(1e-12));
    CHECK(a.d_theta_rad == doctest::Approx(-0.5 * c.vfov_rad).epsilon(1e-12));
  }
}

TEST_CASE("misalignment is odd and strictly increasing in the offset") {
  const CameraIntrinsics c{deg(60.0), deg(46.8)};
  double prev = -10.0;
  for (int i = -20; i <= 20; ++i) {
    const double w1 = i / 40.0;
    const double phi = misalignment_from_offset({w1, 0.0}, c).d_phi_rad;
    const double neg = misalignment_from_offset({-w1, 0.0}, c).d_phi_rad;
    CHECK(phi == doctest::Approx(-neg).epsilon(1e-15));
    CHECK(phi > prev);
    prev = phi;
  }
}

TEST_CASE("offset/misalignment round trip to 1e-12 rad") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> fov(deg(5.0), deg(170.0));
  std::uniform_real_distribution<double> ang(-kPi / 2 + 1e-3, kPi / 2 - 1e-3);
  for (int i = 0; i < 20000; ++i) {
    const CameraIntrinsics c{fov(rng), fov(rng)};
    const MisalignmentAngles a{ang(rng), ang(rng)};
    const MisalignmentAngles back =
        misalignment_from_offset(offset_from_misalignment(a, c), c);
    CHECK(std::abs(back.d_phi_rad - a.d_phi_rad) < 1e-12);
    CHECK(std::abs(back.d_theta_rad - a.d_theta_rad) < 1e-12);
  }
  const NormalizedOffset z = offset_from_misalignment({0.0, 0.0}, {deg(60), deg(46.8)});
  CHECK(z.w1 == 0.0);
  CHECK(z.w2 == 0.0);
  const NormalizedOffset e =
      offset_from_misalignment({deg(30.0), 0.0}, {deg(60), deg(46.8)});
  CHECK(e.w1 == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("misalignment_from_positions basics") {
  const Position3 station{0.0, 0.0, 0.0};

  SUBCASE("target on the boresight") {
    const PtuPose pose{deg(12.0), deg(4.0)};
    const Position3 target =
        station + 25.0 * direction_from(deg(30.0) + pose.pan_rad, pose.tilt_rad);
    const MisalignmentAngles a =
        misalignment_from_positions(station, deg(30.0), pose, target);
    CHECK(std::abs(a.d_phi_rad) < 1e-12);
    CHECK(std::abs(a.d_theta_rad) < 1e-12);
  }

  SUBCASE("10 m north, 10 m up") {
    const MisalignmentAngles a =
        misalignment_from_positions(station, 0.0, {0.0, 0.0}, {0.0, 10.0, 10.0});
    CHECK(a.d_phi_rad == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(a.d_theta_rad == doctest::Approx(deg(45.0)).epsilon(1e-14));
  }

  SUBCASE("coincident target is degenerate") {
    CHECK_THROWS_AS(misalignment_from_positions(station, 0.0, {0, 0}, station),
                    DomainError);
  }
}

TEST_CASE("misalignment_from_positions vs vector-algebra oracle") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  std::uniform_real_distribution<double> head(-kPi, kPi);
  std::uniform_real_distribution<double> tilt(-1.2, 1.2);
  for (int i = 0; i < 5000; ++i) {
    const Position3 station{coord(rng), coord(rng), coord(rng)};
    Position3 target{coord(rng), coord(rng), coord(rng)};
    if ((target - station).norm() < 1e-3) target.x() += 1.0;
    const double heading = head(rng);
    const PtuPose pose{head(rng), tilt(rng)};
    const MisalignmentAngles a =
        misalignment_from_positions(station, heading, pose, target);

    // rotating the boresight by the reported misalignment must point at the
    // target exactly
    const Position3 corrected = direction_from(
        heading + pose.pan_rad + a.d_phi_rad, pose.tilt_rad + a.d_theta_rad);
    const Position3 unit = (target - station).normalized();
    CHECK((corrected - unit).norm() < 1e-9);

    // elevation component cross-checked through asin instead of atan2
    const double el = std::asin(std::clamp(unit.z(), -1.0, 1.0));
    CHECK(a.d_theta_rad == doctest::Approx(el - pose.tilt_rad).epsilon(1e-9));
  }
}

TEST_CASE("euclidean_distance") {
  CHECK(euclidean_distance({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(euclidean_distance({0, 0, 0}, {3, 4, 0}) == doctest::Approx(5.0));
  CHECK(euclidean_distance({0, 0, 0}, {30, 40, 0}) == doctest::Approx(50.0));
}

TEST_CASE("wrap_angle maps to (-pi, pi]") {
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_angle(-3 * kPi / 2) == doctest::Approx(kPi / 2));
  CHECK(wrap_angle(deg(370.0)) == doctest::Approx(deg(10.0)));
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> x(-50.0, 50.0);
  for (int i = 0; i < 2000; ++i) {
    const double w = wrap_angle(x(rng));
    CHECK(w > -kPi - 1e-15);
    CHECK(w <= kPi + 1e-15);
  }
}

TEST_CASE("ENU anchoring round trip") {
  const UtmPosition anchor = geodetic_to_utm({48.1375, 11.5755, 519.0});
  const Position3 enu{12.5, -30.0, 4.5};
  const UtmPosition u = enu_to_utm(enu, anchor);
  const Position3 back = utm_to_enu(u, anchor);
  CHECK((back - enu).norm() < 1e-12);

  UtmPosition other = anchor;
  other.zone += 1;
  CHECK_THROWS_AS(utm_to_enu(other, anchor), DomainError);
}
