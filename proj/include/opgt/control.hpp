#pragma once

#include <optional>

#include "opgt/geo.hpp"
#include "opgt/vision.hpp"

namespace opgt {

struct PtuLimits {
  double pan_resolution_rad = 1.0471975511965977e-4;   // 0.006 deg
  double tilt_resolution_rad = 5.2359877559829887e-5;  // 0.003 deg
  double max_pan_speed_rad_s = 1.0471975511965976;     // 60 deg/s
  double max_tilt_speed_rad_s = 0.5235987755982988;    // 30 deg/s
  double tilt_min_rad = -0.5235987755982988;           // -30 deg
  double tilt_max_rad = 1.0471975511965976;            // 60 deg
};

struct VelocityCommand {
  double pan_rate_rad_s = 0.0;
  double tilt_rate_rad_s = 0.0;
};

struct PiGains {
  double kp = 8.0;                        // 1/s
  double ki = 16.0;                       // 1/s^2
  double integral_limit = 0.17453292519943295;  // rad*s, 10 deg equivalent
};

struct PiState {
  double integral_phi = 0.0;    // rad*s
  double integral_theta = 0.0;  // rad*s
  double t = 0.0;               // time of last update
};

enum class TrackerMode { Visual, GnssFallback, Search };

struct TrackerState {
  TrackerMode mode = TrackerMode::Search;
  double last_detection_t = -1e300;
  double last_telemetry_t = -1e300;
};

// Last drone position received over the link, already converted to the
// station's local ENU frame.
struct TelemetryEstimate {
  double t_received = 0.0;
  Position3 position = Position3::Zero();
};

struct StationGeometry {
  Position3 position = Position3::Zero();  // laser aperture, local ENU
  double mount_heading_rad = 0.0;          // azimuth of pan zero
};

struct SupervisorConfig {
  double telemetry_staleness_s = 1.0;
};

// One PI update per axis: the integral accumulates err*dt under the clamp,
// but is left untouched while the commanded rate saturates (anti-windup).
std::pair<VelocityCommand, PiState> pi_step(const MisalignmentAngles& err,
                                            const PiState& s, const PiGains& gains,
                                            const PtuLimits& lim, double dt);

// Vision-primary / GNSS-fallback mode selection. Returns the tracking error
// to drive the controller with, or nothing in SEARCH (hold position).
std::pair<std::optional<MisalignmentAngles>, TrackerState> supervisor_step(
    const std::optional<Detection>& det, const CameraIntrinsics& intrinsics,
    const std::optional<TelemetryEstimate>& telemetry,
    const StationGeometry& station, const PtuPose& pose, const TrackerState& st,
    const SupervisorConfig& cfg, double now_s);

// Rate-saturating, resolution-quantizing PTU plant. Pan wraps to (-pi, pi],
// tilt clamps to the mechanical limits.
PtuPose ptu_step(const PtuPose& pose, const VelocityCommand& cmd,
                 const PtuLimits& lim, double dt);

const char* tracker_mode_name(TrackerMode mode);

}  // namespace opgt
