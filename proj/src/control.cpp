#include "opgt/control.hpp"

#include <algorithm>
#include <cmath>

#include "opgt/error.hpp"

namespace opgt {
namespace {

// integral update with conditional integration: suspended while saturated
double axis_command(double err, double& integral, double kp, double ki,
                    double i_max, double speed_limit, double dt) {
  const double candidate = std::clamp(integral + err * dt, -i_max, i_max);
  const double raw = kp * err + ki * candidate;
  if (std::abs(raw) > speed_limit) {
    return std::clamp(raw, -speed_limit, speed_limit);
  }
  integral = candidate;
  return raw;
}

double quantize(double value, double resolution) {
  return std::round(value / resolution) * resolution;
}

}  // namespace

std::pair<VelocityCommand, PiState> pi_step(const MisalignmentAngles& err,
                                            const PiState& s, const PiGains& gains,
                                            const PtuLimits& lim, double dt) {
  if (!(dt > 0.0)) throw DomainError("pi_step: dt must be positive");
  PiState next = s;
  next.t = s.t + dt;
  VelocityCommand cmd;
  cmd.pan_rate_rad_s =
      axis_command(err.d_phi_rad, next.integral_phi, gains.kp, gains.ki,
                   gains.integral_limit, lim.max_pan_speed_rad_s, dt);
  cmd.tilt_rate_rad_s =
      axis_command(err.d_theta_rad, next.integral_theta, gains.kp, gains.ki,
                   gains.integral_limit, lim.max_tilt_speed_rad_s, dt);
  return {cmd, next};
}

std::pair<std::optional<MisalignmentAngles>, TrackerState> supervisor_step(
    const std::optional<Detection>& det, const CameraIntrinsics& intrinsics,
    const std::optional<TelemetryEstimate>& telemetry,
    const StationGeometry& station, const PtuPose& pose, const TrackerState& st,
    const SupervisorConfig& cfg, double now_s) {
  TrackerState next = st;
  if (telemetry) next.last_telemetry_t = telemetry->t_received;

  if (det) {
    next.mode = TrackerMode::Visual;
    next.last_detection_t = now_s;
    return {misalignment_from_offset(det->w, intrinsics), next};
  }

  const bool telemetry_fresh =
      telemetry && (now_s - telemetry->t_received) <= cfg.telemetry_staleness_s;
  if (telemetry_fresh) {
    next.mode = TrackerMode::GnssFallback;
    return {misalignment_from_positions(station.position, station.mount_heading_rad,
                                        pose, telemetry->position),
            next};
  }

  next.mode = TrackerMode::Search;
  return {std::nullopt, next};
}

PtuPose ptu_step(const PtuPose& pose, const VelocityCommand& cmd,
                 const PtuLimits& lim, double dt) {
  if (!(dt > 0.0)) throw DomainError("ptu_step: dt must be positive");
  const double pan_rate = std::clamp(cmd.pan_rate_rad_s, -lim.max_pan_speed_rad_s,
                                     lim.max_pan_speed_rad_s);
  const double tilt_rate = std::clamp(cmd.tilt_rate_rad_s, -lim.max_tilt_speed_rad_s,
                                      lim.max_tilt_speed_rad_s);
  PtuPose next;
  next.pan_rad = wrap_angle(
      quantize(wrap_angle(pose.pan_rad + pan_rate * dt), lim.pan_resolution_rad));
  next.tilt_rad = std::clamp(quantize(pose.tilt_rad + tilt_rate * dt,
                                      lim.tilt_resolution_rad),
                             lim.tilt_min_rad, lim.tilt_max_rad);
  return next;
}

const char* tracker_mode_name(TrackerMode mode) {
  switch (mode) {
    case TrackerMode::Visual:
      return "VISUAL";
    case TrackerMode::GnssFallback:
      return "GNSS_FALLBACK";
    case TrackerMode::Search:
      return "SEARCH";
  }
  return "UNKNOWN";
}

}  // namespace opgt
