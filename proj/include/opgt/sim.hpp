#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "opgt/control.hpp"
#include "opgt/gas.hpp"
#include "opgt/link.hpp"
#include "opgt/vision.hpp"

namespace opgt {

struct DroneState {
  Position3 position = Position3::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  std::size_t waypoint_index = 0;  // next waypoint to reach
  double t_s = 0.0;
};

struct Route {
  std::vector<Position3> waypoints_enu;
  double cruise_speed_mps = 1.0;
  double arrival_tolerance_m = 0.2;
};

// Scenario defaults render a clean sky: the tracking assumption is that the
// drone is the largest red object in frame, so persistent red clutter would
// defeat the vision-loss fallback by design.
struct RenderConfig {
  double led_ring_radius_m = 0.15;
  double ring_thickness_px = 3.0;
  int brightness_min = 120;
  int brightness_max = 255;
  int distractor_count = 0;
  int distractor_pixels = 8;
  std::array<std::uint8_t, 3> distractor_color{200, 40, 40};
  double pixel_noise_probability = 1e-4;
};

// Config-level gas field description; build() assembles the evaluable field.
struct GasFieldSpec {
  double background_ppm = 400.0;
  std::optional<GaussianPlumeField> plume;

  std::shared_ptr<const GasField> build() const;
};

struct ScenarioConfig {
  std::string name = "custom";
  double duration_s = 10.0;
  double timestep_s = 0.05;
  std::uint64_t seed = 1;

  GeodeticPosition station_geodetic{48.1375, 11.5755, 519.0};
  double mount_heading_rad = 0.0;
  Position3 laser_offset_enu{0.0, 0.0, -0.1};  // aperture relative to the antenna
  PtuPose initial_pose;

  Route route;
  Position3 antenna_offset_enu{0.0, 0.0, 0.4};  // GNSS antenna above the reflector
  double gnss_noise_sd_m = 0.01;
  int telemetry_every_ticks = 4;

  GasFieldSpec field;
  SensorModel sensor;
  int sensor_every_ticks = 2;

  VisionConfig vision;
  RenderConfig render;
  int camera_every_ticks = 1;

  PiGains gains;
  PtuLimits ptu;
  SupervisorConfig supervisor;
  int control_every_ticks = 1;

  LinkParams link;
  std::vector<std::pair<double, double>> sun_glare_intervals_s;
};

// Throws ConfigError naming every offending field.
void validate(const ScenarioConfig& cfg);

struct TelemetryRow {
  double t_s = 0.0;
  GeodeticPosition position;
  std::uint32_t sequence = 0;
};

struct TrackerRow {
  double t_s = 0.0;
  TrackerMode mode = TrackerMode::Search;
  double pan_deg = 0.0;
  double tilt_deg = 0.0;
  double d_phi_deg = 0.0;    // NaN when no error signal (SEARCH)
  double d_theta_deg = 0.0;  // NaN when no error signal
  int zoom = 1;
};

struct TruthRow {
  double t_s = 0.0;
  Position3 drone_enu = Position3::Zero();
};

struct RunLogs {
  std::vector<TelemetryRow> telemetry;      // the drone's own position log
  std::vector<MeasurementRecord> measurements;
  std::vector<TrackerRow> tracker;
  std::vector<TruthRow> truth;              // simulation-only ground truth
  std::vector<double> waypoint_times_s;     // waypoint advance events
};

// Constant-speed straight-line motion toward the active waypoint; advancing
// to the next waypoint happens in the same step on arrival, and the drone
// hovers once the route is exhausted.
DroneState drone_step(const DroneState& d, const Route& r, double dt);

// Draws the LED ring as a red annulus at the exact image position implied by
// inverting the offset/misalignment geometry, plus distractor blobs and salt
// noise. The drone outside the field of view yields a background-only frame.
Frame render_frame(const Position3& true_drone, const Position3& station,
                   double mount_heading_rad, const PtuPose& pose,
                   const CameraIntrinsics& intrinsics, const FrameGeometry& fg,
                   const RenderConfig& rc, std::mt19937_64& rng);

RunLogs run_scenario(const ScenarioConfig& cfg);

std::vector<std::string> builtin_scenario_names();
ScenarioConfig builtin_scenario(const std::string& name);

}  // namespace opgt
