#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "opgt/control.hpp"
#include "opgt/error.hpp"

using namespace opgt;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double deg(double d) { return d * kPi / 180.0; }
}  // namespace

TEST_CASE("pi_step basics") {
  const PiGains gains{8.0, 16.0, deg(10.0)};
  const PtuLimits lim;

  SUBCASE("zero error, fresh state") {
    const auto [cmd, s] = pi_step({0.0, 0.0}, {}, gains, lim, 0.05);
    CHECK(cmd.pan_rate_rad_s == 0.0);
    CHECK(cmd.tilt_rate_rad_s == 0.0);
    CHECK(s.integral_phi == 0.0);
  }

  SUBCASE("one unsaturated step matches kp*e + ki*e*dt") {
    const double e = 0.01, dt = 0.1;
    const auto [cmd, s] = pi_step({e, 0.0}, {}, gains, lim, dt);
    CHECK(cmd.pan_rate_rad_s ==
          doctest::Approx(gains.kp * e + gains.ki * e * dt).epsilon(1e-15));
    CHECK(s.integral_phi == doctest::Approx(e * dt).epsilon(1e-15));
  }

  SUBCASE("two-step sequence with saturation on step 1") {
    // hand-computed: e=0.2 rad, dt=0.05 -> raw = 8*0.2 + 16*0.01 = 1.76,
    // above the 60 deg/s pan limit, so the command clamps and the integral
    // stays at zero; the second, smaller error integrates normally
    const auto [cmd1, s1] = pi_step({0.2, 0.0}, {}, gains, lim, 0.05);
    CHECK(cmd1.pan_rate_rad_s == doctest::Approx(lim.max_pan_speed_rad_s));
    CHECK(s1.integral_phi == 0.0);

    const auto [cmd2, s2] = pi_step({0.05, 0.0}, s1, gains, lim, 0.05);
    CHECK(cmd2.pan_rate_rad_s ==
          doctest::Approx(8.0 * 0.05 + 16.0 * 0.05 * 0.05).epsilon(1e-12));
    CHECK(s2.integral_phi == doctest::Approx(0.05 * 0.05).epsilon(1e-15));
  }

  SUBCASE("output is odd in the error for a fresh state") {
    for (double e : {0.001, 0.02, 0.1, 0.4}) {
      const auto [pos, s_pos] = pi_step({e, e / 2}, {}, gains, lim, 0.05);
      const auto [neg, s_neg] = pi_step({-e, -e / 2}, {}, gains, lim, 0.05);
      CHECK(pos.pan_rate_rad_s == doctest::Approx(-neg.pan_rate_rad_s).epsilon(1e-15));
      CHECK(pos.tilt_rate_rad_s == doctest::Approx(-neg.tilt_rate_rad_s).epsilon(1e-15));
      CHECK(s_pos.integral_phi == doctest::Approx(-s_neg.integral_phi).epsilon(1e-15));
    }
  }

  SUBCASE("integral clamps at the configured limit") {
    PiState s;
    for (int i = 0; i < 200; ++i) {
      // small error keeps the output unsaturated so integration continues
      std::tie(std::ignore, s) = pi_step({0.02, 0.0}, s, gains, lim, 0.5);
    }
    CHECK(s.integral_phi <= gains.integral_limit + 1e-12);
  }

  SUBCASE("nonpositive dt rejected") {
    CHECK_THROWS_AS(pi_step({0, 0}, {}, gains, lim, 0.0), DomainError);
  }
}

TEST_CASE("ptu_step") {
  const PtuLimits lim;

  SUBCASE("zero command leaves an on-grid pose unchanged") {
    const PtuPose pose{500 * lim.pan_resolution_rad, 100 * lim.tilt_resolution_rad};
    const PtuPose next = ptu_step(pose, {0.0, 0.0}, lim, 0.05);
    CHECK(next.pan_rad == doctest::Approx(pose.pan_rad).epsilon(1e-15));
    CHECK(next.tilt_rad == doctest::Approx(pose.tilt_rad).epsilon(1e-15));
  }

  SUBCASE("rates saturate at the axis speed limits") {
    // 60 deg/s * 0.05 s = 3 deg, an exact multiple of the 0.006 deg grid
    const PtuPose next =
        ptu_step({0.0, 0.0}, {2.0 * lim.max_pan_speed_rad_s, 0.0}, lim, 0.05);
    CHECK(next.pan_rad == doctest::Approx(lim.max_pan_speed_rad_s * 0.05).epsilon(1e-12));
  }

  SUBCASE("pose quantizes to the resolution grid") {
    // request a 0.004 deg advance: rounds to one 0.006 deg step
    const double rate = deg(0.004) / 0.05;
    const PtuPose next = ptu_step({0.0, 0.0}, {rate, 0.0}, lim, 0.05);
    CHECK(next.pan_rad == doctest::Approx(deg(0.006)).epsilon(1e-12));

    const double small = deg(0.002) / 0.05;  // rounds to zero
    const PtuPose same = ptu_step({0.0, 0.0}, {small, 0.0}, lim, 0.05);
    CHECK(same.pan_rad == 0.0);
  }

  SUBCASE("tilt clamps to mechanical limits") {
    const PtuPose next =
        ptu_step({0.0, lim.tilt_max_rad}, {0.0, lim.max_tilt_speed_rad_s}, lim, 0.5);
    CHECK(next.tilt_rad == doctest::Approx(lim.tilt_max_rad));
    const PtuPose low =
        ptu_step({0.0, lim.tilt_min_rad}, {0.0, -lim.max_tilt_speed_rad_s}, lim, 0.5);
    CHECK(low.tilt_rad == doctest::Approx(lim.tilt_min_rad));
  }

  SUBCASE("pan wraps through +/- pi") {
    const PtuPose near_pi{kPi - deg(0.006), 0.0};
    const PtuPose next = ptu_step(near_pi, {deg(0.024) / 0.05, 0.0}, lim, 0.05);
    CHECK(next.pan_rad < 0.0);
    CHECK(next.pan_rad == doctest::Approx(-kPi + deg(0.018)).epsilon(1e-9));
  }
}

TEST_CASE("supervisor_step mode selection") {
  const StationGeometry station{{0.0, 0.0, 0.0}, 0.0};
  const SupervisorConfig cfg{1.0};
  const CameraIntrinsics intr{deg(60.0), deg(46.8)};
  const PtuPose pose{0.0, 0.0};

  Detection det;
  det.ellipse.center = {330.0, 240.0};
  det.pixel_count = 80;
  det.w = {0.05, -0.02};

  SUBCASE("detection wins regardless of telemetry") {
    const TelemetryEstimate tel{9.8, {0.0, 10.0, 0.0}};
    const auto [err, st] =
        supervisor_step(det, intr, tel, station, pose, {}, cfg, 10.0);
    CHECK(st.mode == TrackerMode::Visual);
    REQUIRE(err.has_value());
    CHECK(err->d_phi_rad ==
          doctest::Approx(misalignment_from_offset(det.w, intr).d_phi_rad));
    CHECK(st.last_detection_t == 10.0);
  }

  SUBCASE("fresh telemetry gives GNSS fallback") {
    const TelemetryEstimate tel{9.8, {10.0, 10.0, 0.0}};
    const auto [err, st] =
        supervisor_step(std::nullopt, intr, tel, station, pose, {}, cfg, 10.0);
    CHECK(st.mode == TrackerMode::GnssFallback);
    REQUIRE(err.has_value());
    CHECK(err->d_phi_rad == doctest::Approx(deg(45.0)));
  }

  SUBCASE("stale telemetry falls through to SEARCH") {
    const TelemetryEstimate tel{5.0, {10.0, 10.0, 0.0}};
    const auto [err, st] =
        supervisor_step(std::nullopt, intr, tel, station, pose, {}, cfg, 10.0);
    CHECK(st.mode == TrackerMode::Search);
    CHECK_FALSE(err.has_value());
  }

  SUBCASE("from VISUAL one lost frame with fresh telemetry never jumps to SEARCH") {
    TrackerState st;
    std::tie(std::ignore, st) =
        supervisor_step(det, intr, std::nullopt, station, pose, st, cfg, 0.0);
    CHECK(st.mode == TrackerMode::Visual);
    const TelemetryEstimate tel{0.02, {0.0, 10.0, 0.0}};
    const auto [err, next] =
        supervisor_step(std::nullopt, intr, tel, station, pose, st, cfg, 0.05);
    CHECK(next.mode == TrackerMode::GnssFallback);
    CHECK(err.has_value());
  }
}

TEST_CASE("closed-loop regulation with the plant model") {
  // stationary target, default gains: any initial error up to 20 deg must
  // settle below twice the pan resolution within 3 s and stay there
  const PiGains gains;
  const PtuLimits lim;
  const double dt = 0.05;
  const Position3 station{0.0, 0.0, 0.0};

  for (double initial_deg : {2.0, 10.0, 20.0, -20.0}) {
    const Position3 target =
        30.0 * direction_from(deg(initial_deg), deg(initial_deg / 2.0));
    PtuPose pose{0.0, 0.0};
    PiState pi;
    bool settled_by_3s = true;
    for (int k = 0; k * dt < 6.0; ++k) {
      const MisalignmentAngles err =
          misalignment_from_positions(station, 0.0, pose, target);
      if (k * dt >= 3.0) {
        if (std::abs(err.d_phi_rad) > 2.0 * lim.pan_resolution_rad ||
            std::abs(err.d_theta_rad) > 2.0 * lim.pan_resolution_rad) {
          settled_by_3s = false;
        }
      }
      VelocityCommand cmd;
      std::tie(cmd, pi) = pi_step(err, pi, gains, lim, dt);
      pose = ptu_step(pose, cmd, lim, dt);
    }
    CHECK(settled_by_3s);
  }
}

TEST_CASE("saturated pursuit recovers after the target slows") {
  // target angular rate above the pan speed limit opens the error, ends
  // bounded, and closes again once the sweep stops
  const PiGains gains;
  const PtuLimits lim;
  const double dt = 0.05;
  const Position3 station{0.0, 0.0, 0.0};
  PtuPose pose{0.0, 0.0};
  PiState pi;
  double worst = 0.0;
  double az = 0.0;
  for (int k = 0; k * dt < 4.0; ++k) {
    const double t = k * dt;
    if (t < 0.6) az += 2.0 * dt;  // ~115 deg/s sweep
    const Position3 target = 20.0 * direction_from(az, 0.0);
    const MisalignmentAngles err = misalignment_from_positions(station, 0.0, pose, target);
    worst = std::max(worst, std::abs(err.d_phi_rad));
    VelocityCommand cmd;
    std::tie(cmd, pi) = pi_step(err, pi, gains, lim, dt);
    pose = ptu_step(pose, cmd, lim, dt);
  }
  CHECK(worst > deg(5.0));  // saturation visibly opened the error
  const Position3 target = 20.0 * direction_from(az, 0.0);
  const MisalignmentAngles final_err =
      misalignment_from_positions(station, 0.0, pose, target);
  CHECK(std::abs(final_err.d_phi_rad) < 2.0 * lim.pan_resolution_rad);
}

TEST_CASE("tracker mode names") {
  CHECK(std::string(tracker_mode_name(TrackerMode::Visual)) == "VISUAL");
  CHECK(std::string(tracker_mode_name(TrackerMode::GnssFallback)) == "GNSS_FALLBACK");
  CHECK(std::string(tracker_mode_name(TrackerMode::Search)) == "SEARCH");
}
