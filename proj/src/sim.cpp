#include "opgt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "opgt/error.hpp"

namespace opgt {
namespace {

constexpr double kPi = std::numbers::pi;

void requireField(bool ok, std::vector<std::string>& problems, const char* what) {
  if (!ok) problems.emplace_back(what);
}

// blob of exactly `count` pixels growing outward from a center
void drawBlob(Frame& f, int cx, int cy, int count,
              const std::array<std::uint8_t, 3>& color) {
  int placed = 0;
  for (int radius = 0; placed < count && radius < 64; ++radius) {
    for (int dy = -radius; dy <= radius && placed < count; ++dy) {
      for (int dx = -radius; dx <= radius && placed < count; ++dx) {
        if (std::max(std::abs(dx), std::abs(dy)) != radius) continue;  // new shell only
        const int x = cx + dx, y = cy + dy;
        if (x < 0 || y < 0 || x >= f.width || y >= f.height) continue;
        auto* px = f.at(x, y);
        px[0] = color[0];
        px[1] = color[1];
        px[2] = color[2];
        ++placed;
      }
    }
  }
}

}  // namespace

std::shared_ptr<const GasField> GasFieldSpec::build() const {
  auto uniform = std::make_shared<UniformField>(background_ppm);
  if (!plume) return uniform;
  auto plume_field = std::make_shared<GaussianPlumeField>(*plume);
  if (background_ppm == 0.0) return plume_field;
  auto sum = std::make_shared<SumField>();
  sum->parts = {uniform, plume_field};
  return sum;
}

void validate(const ScenarioConfig& cfg) {
  std::vector<std::string> problems;
  requireField(cfg.duration_s > 0.0, problems, "duration_s must be positive");
  requireField(cfg.timestep_s > 0.0, problems, "timestep_s must be positive");
  requireField(!cfg.route.waypoints_enu.empty(), problems,
               "route.waypoints_enu must contain at least one waypoint");
  requireField(cfg.route.cruise_speed_mps > 0.0, problems,
               "route.cruise_speed_mps must be positive");
  requireField(cfg.route.arrival_tolerance_m > 0.0, problems,
               "route.arrival_tolerance_m must be positive");
  requireField(cfg.telemetry_every_ticks >= 1, problems,
               "telemetry_every_ticks must be >= 1");
  requireField(cfg.sensor_every_ticks >= 1, problems,
               "sensor_every_ticks must be >= 1");
  requireField(cfg.camera_every_ticks >= 1, problems,
               "camera_every_ticks must be >= 1");
  requireField(cfg.control_every_ticks == cfg.camera_every_ticks, problems,
               "control_every_ticks must equal camera_every_ticks");
  requireField(cfg.gnss_noise_sd_m >= 0.0, problems,
               "gnss_noise_sd_m must be nonnegative");
  requireField(std::abs(cfg.station_geodetic.latitude_deg) <= 84.0, problems,
               "station_geodetic.latitude_deg must lie within the UTM band");
  requireField(cfg.vision.frame.res_x1 > 0 && cfg.vision.frame.res_x2 > 0,
               problems, "vision.frame resolution must be positive");
  requireField(cfg.vision.zoom.lower_px < cfg.vision.zoom.upper_px, problems,
               "vision.zoom.lower_px must be below upper_px");
  requireField(cfg.vision.zoom.dwell_s >= 0.0, problems,
               "vision.zoom.dwell_s must be nonnegative");
  requireField(cfg.vision.dbscan.eps_px > 0.0, problems,
               "vision.dbscan.eps_px must be positive");
  requireField(cfg.vision.dbscan.min_pts >= 1, problems,
               "vision.dbscan.min_pts must be >= 1");
  requireField(!cfg.vision.thresholds.hue_windows_deg.empty(), problems,
               "vision.hue_windows_deg must contain at least one window");
  for (const HueWindow& w : cfg.vision.thresholds.hue_windows_deg) {
    requireField(w.lo_deg >= 0.0 && w.lo_deg < 360.0 && w.hi_deg >= 0.0 &&
                     w.hi_deg <= 360.0,
                 problems, "vision.hue_windows_deg entries must lie in [0, 360]");
  }
  requireField(cfg.vision.thresholds.saturation_min >= 0.0 &&
                   cfg.vision.thresholds.saturation_min <= 1.0,
               problems, "vision.saturation_min must be in [0, 1]");
  requireField(cfg.vision.thresholds.value_min >= 0.0 &&
                   cfg.vision.thresholds.value_min <= 1.0,
               problems, "vision.value_min must be in [0, 1]");
  requireField(cfg.vision.base_intrinsics.hfov_rad > 0.0 &&
                   cfg.vision.base_intrinsics.hfov_rad < kPi,
               problems, "vision.base_hfov_deg must be in (0, 180)");
  requireField(cfg.vision.base_intrinsics.vfov_rad > 0.0 &&
                   cfg.vision.base_intrinsics.vfov_rad < kPi,
               problems, "vision.base_vfov_deg must be in (0, 180)");
  requireField(cfg.sensor.max_range_m > 0.0, problems,
               "sensor.max_range_m must be positive");
  requireField(cfg.sensor.reflector_radius_m > 0.0, problems,
               "sensor.reflector_radius_m must be positive");
  requireField(cfg.sensor.beam_divergence_rad > 0.0, problems,
               "sensor.beam_divergence_rad must be positive");
  requireField(cfg.sensor.warn_fraction > 0.0 && cfg.sensor.warn_fraction < 1.0,
               problems, "sensor.warn_fraction must be in (0, 1)");
  requireField(cfg.sensor.noise_sd_ppm_m >= 0.0, problems,
               "sensor.noise_sd_ppm_m must be nonnegative");
  requireField(cfg.gains.kp > 0.0, problems, "control.kp must be positive");
  requireField(cfg.gains.ki >= 0.0, problems, "control.ki must be nonnegative");
  requireField(cfg.gains.integral_limit > 0.0, problems,
               "control.integral_limit must be positive");
  requireField(cfg.ptu.pan_resolution_rad > 0.0 && cfg.ptu.tilt_resolution_rad > 0.0,
               problems, "ptu resolutions must be positive");
  requireField(cfg.ptu.max_pan_speed_rad_s > 0.0 && cfg.ptu.max_tilt_speed_rad_s > 0.0,
               problems, "ptu speed limits must be positive");
  requireField(cfg.ptu.tilt_min_rad < cfg.ptu.tilt_max_rad, problems,
               "ptu.tilt_min_deg must be below tilt_max_deg");
  requireField(cfg.supervisor.telemetry_staleness_s > 0.0, problems,
               "control.telemetry_staleness_s must be positive");
  requireField(cfg.link.drop_probability >= 0.0 && cfg.link.drop_probability <= 1.0,
               problems, "link.drop_probability must be in [0, 1]");
  requireField(cfg.link.latency_s >= 0.0, problems,
               "link.latency_s must be nonnegative");
  requireField(cfg.link.jitter_sd_s >= 0.0, problems,
               "link.jitter_sd_s must be nonnegative");
  requireField(cfg.render.led_ring_radius_m > 0.0, problems,
               "render.led_ring_radius_m must be positive");
  requireField(cfg.render.brightness_min >= 0 &&
                   cfg.render.brightness_min <= cfg.render.brightness_max &&
                   cfg.render.brightness_max <= 255,
               problems, "render.brightness_min/max must satisfy 0 <= min <= max <= 255");
  requireField(cfg.render.distractor_count >= 0 && cfg.render.distractor_pixels >= 0,
               problems, "render.distractor settings must be nonnegative");
  requireField(cfg.render.pixel_noise_probability >= 0.0 &&
                   cfg.render.pixel_noise_probability <= 1.0,
               problems, "render.pixel_noise_probability must be in [0, 1]");
  if (cfg.field.plume) {
    requireField(std::hypot(cfg.field.plume->wind_mps.x(),
                            cfg.field.plume->wind_mps.y()) > 0.0,
                 problems, "field.plume.wind_mps must have nonzero horizontal speed");
    requireField(cfg.field.plume->emission_l_min > 0.0, problems,
                 "field.plume.emission_l_min must be positive");
  }
  for (const auto& [t0, t1] : cfg.sun_glare_intervals_s) {
    requireField(t0 <= t1, problems, "sun_glare_intervals_s entries must be ordered");
  }
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "invalid scenario config:";
    for (const auto& p : problems) msg << "\n  - " << p;
    throw ConfigError(msg.str());
  }
}

DroneState drone_step(const DroneState& d, const Route& r, double dt) {
  if (!(dt > 0.0)) throw DomainError("drone_step: dt must be positive");
  DroneState next = d;
  next.t_s = d.t_s + dt;
  double budget = r.cruise_speed_mps * dt;
  // waypoint advances consume no travel budget, so corners are not pauses
  while (budget > 0.0 && next.waypoint_index < r.waypoints_enu.size()) {
    const Position3& wp = r.waypoints_enu[next.waypoint_index];
    const Position3 to_wp = wp - next.position;
    const double remaining = to_wp.norm();
    if (remaining <= r.arrival_tolerance_m) {
      ++next.waypoint_index;
      continue;
    }
    const double step = std::min(budget, remaining);
    next.position += (step / remaining) * to_wp;
    budget -= step;
  }
  next.velocity = (next.position - d.position) / dt;
  return next;
}

Frame render_frame(const Position3& true_drone, const Position3& station,
                   double mount_heading_rad, const PtuPose& pose,
                   const CameraIntrinsics& intrinsics, const FrameGeometry& fg,
                   const RenderConfig& rc, std::mt19937_64& rng) {
  Frame f = Frame::filled(fg.res_x1, fg.res_x2, 70, 70, 70);

  std::uniform_int_distribution<int> column(0, fg.res_x1 - 1);
  std::uniform_int_distribution<int> row(0, fg.res_x2 - 1);
  for (int i = 0; i < rc.distractor_count; ++i) {
    drawBlob(f, column(rng), row(rng), rc.distractor_pixels, rc.distractor_color);
  }

  const Position3 rel = true_drone - station;
  const double d = rel.norm();
  bool in_view = d > 0.0;
  MisalignmentAngles offset;
  if (in_view) {
    offset = misalignment_from_positions(station, mount_heading_rad, pose, true_drone);
    in_view = std::abs(offset.d_phi_rad) < std::min(kPi / 2 - 1e-6, intrinsics.hfov_rad) &&
              std::abs(offset.d_theta_rad) <
                  std::min(kPi / 2 - 1e-6, intrinsics.vfov_rad);
  }

  if (in_view) {
    const NormalizedOffset w = offset_from_misalignment(offset, intrinsics);
    const double cx = fg.center.x1 + w.w1 * fg.res_x1;
    const double cy = fg.center.x2 + w.w2 * fg.res_x2;
    const double ring_px =
        rc.led_ring_radius_m / (2.0 * d * std::tan(0.5 * intrinsics.hfov_rad)) *
        fg.res_x1;
    const double reach = ring_px + rc.ring_thickness_px;
    const int x_lo = std::max(0, static_cast<int>(std::floor(cx - reach)));
    const int x_hi = std::min(fg.res_x1 - 1, static_cast<int>(std::ceil(cx + reach)));
    const int y_lo = std::max(0, static_cast<int>(std::floor(cy - reach)));
    const int y_hi = std::min(fg.res_x2 - 1, static_cast<int>(std::ceil(cy + reach)));
    std::uniform_int_distribution<int> brightness(rc.brightness_min, rc.brightness_max);
    for (int y = y_lo; y <= y_hi; ++y) {
      for (int x = x_lo; x <= x_hi; ++x) {
        const double rho = std::hypot(x - cx, y - cy);
        if (std::abs(rho - ring_px) <= 0.5 * rc.ring_thickness_px) {
          const int b = brightness(rng);
          auto* px = f.at(x, y);
          px[0] = static_cast<std::uint8_t>(b);
          px[1] = static_cast<std::uint8_t>(b / 10);
          px[2] = static_cast<std::uint8_t>(b / 10);
        }
      }
    }
  }

  if (rc.pixel_noise_probability > 0.0) {
    const auto n_pixels = static_cast<long>(fg.res_x1) * fg.res_x2;
    std::binomial_distribution<long> count(n_pixels, rc.pixel_noise_probability);
    std::uniform_int_distribution<int> channel(0, 255);
    const long k = count(rng);
    for (long i = 0; i < k; ++i) {
      auto* px = f.at(column(rng), row(rng));
      px[0] = static_cast<std::uint8_t>(channel(rng));
      px[1] = static_cast<std::uint8_t>(channel(rng));
      px[2] = static_cast<std::uint8_t>(channel(rng));
    }
  }
  return f;
}

RunLogs run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);

  const UtmPosition anchor = geodetic_to_utm(cfg.station_geodetic);
  const Position3 aperture = cfg.laser_offset_enu;
  const StationGeometry station{aperture, cfg.mount_heading_rad};
  const auto field = cfg.field.build();

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gnss_noise(0.0, 1.0);

  DroneState drone;
  drone.position = cfg.route.waypoints_enu.front();
  drone.waypoint_index = 1;

  PtuPose pose = cfg.initial_pose;
  PiState pi;
  TrackerState tracker;
  ZoomState zoom;
  Channel channel;
  std::optional<TelemetryEstimate> latest_telemetry;
  std::optional<Detection> detection;
  CameraIntrinsics frame_intrinsics =
      fov_for_zoom(zoom, cfg.vision.base_intrinsics);
  std::uint32_t telemetry_seq = 0;

  RunLogs logs;
  const auto n_ticks = static_cast<long>(std::llround(cfg.duration_s / cfg.timestep_s));
  const double control_dt = cfg.timestep_s * cfg.control_every_ticks;

  for (long k = 0; k < n_ticks; ++k) {
    const double now = (k + 1) * cfg.timestep_s;

    const std::size_t prev_wp = drone.waypoint_index;
    drone = drone_step(drone, cfg.route, cfg.timestep_s);
    if (drone.waypoint_index != prev_wp) logs.waypoint_times_s.push_back(now);

    if (k % cfg.telemetry_every_ticks == 0) {
      Position3 antenna = drone.position + cfg.antenna_offset_enu;
      if (cfg.gnss_noise_sd_m > 0.0) {
        antenna += cfg.gnss_noise_sd_m * Position3(gnss_noise(rng), gnss_noise(rng),
                                                   gnss_noise(rng));
      }
      const GeodeticPosition geo = utm_to_geodetic(enu_to_utm(antenna, anchor));
      logs.telemetry.push_back({now, geo, telemetry_seq});
      TelemetryMessage msg;
      msg.sequence = telemetry_seq++;
      msg.t_s = now;
      msg.position = geo;
      channel.send(msg, now, cfg.link, rng);
    }

    for (const Message& msg : channel.deliver(now)) {
      const auto& tel = std::get<TelemetryMessage>(msg);
      const UtmPosition utm = geodetic_to_utm(tel.position, anchor.zone);
      latest_telemetry = TelemetryEstimate{now, utm_to_enu(utm, anchor)};
    }

    if (k % cfg.camera_every_ticks == 0) {
      frame_intrinsics = fov_for_zoom(zoom, cfg.vision.base_intrinsics);
      const Frame frame =
          render_frame(drone.position, aperture, cfg.mount_heading_rad, pose,
                       frame_intrinsics, cfg.vision.frame, cfg.render, rng);
      detection = detect(frame, cfg.vision);

      const ZoomCommand zoom_cmd = zoom_step(detection, zoom, cfg.vision.zoom, now);
      zoom = apply_zoom(zoom, zoom_cmd, now);
    }

    if (k % cfg.control_every_ticks == 0) {
      const auto [err, next_tracker] =
          supervisor_step(detection, frame_intrinsics, latest_telemetry, station,
                          pose, tracker, cfg.supervisor, now);
      if (next_tracker.mode == TrackerMode::Search &&
          tracker.mode != TrackerMode::Search) {
        pi = PiState{};  // integrals reset on the transition into SEARCH
      }
      tracker = next_tracker;

      VelocityCommand cmd;
      if (err) {
        std::tie(cmd, pi) = pi_step(*err, pi, cfg.gains, cfg.ptu, control_dt);
      }
      pose = ptu_step(pose, cmd, cfg.ptu, control_dt);

      TrackerRow row;
      row.t_s = now;
      row.mode = tracker.mode;
      row.pan_deg = pose.pan_rad * 180.0 / kPi;
      row.tilt_deg = pose.tilt_rad * 180.0 / kPi;
      row.d_phi_deg = err ? err->d_phi_rad * 180.0 / kPi
                          : std::numeric_limits<double>::quiet_NaN();
      row.d_theta_deg = err ? err->d_theta_rad * 180.0 / kPi
                            : std::numeric_limits<double>::quiet_NaN();
      row.zoom = static_cast<int>(zoom_factor(zoom));
      logs.tracker.push_back(row);
    }

    if (k % cfg.sensor_every_ticks == 0) {
      const Position3 beam =
          direction_from(cfg.mount_heading_rad + pose.pan_rad, pose.tilt_rad);
      bool sun = false;
      for (const auto& [t0, t1] : cfg.sun_glare_intervals_s) {
        if (now >= t0 && now <= t1) sun = true;
      }
      MeasurementRecord rec = tdlas_measure(cfg.sensor, *field, aperture,
                                            drone.position, beam, now, rng, sun);
      rec.tdlas_position = cfg.station_geodetic;
      logs.measurements.push_back(rec);
    }

    logs.truth.push_back({now, drone.position});
  }
  return logs;
}

namespace {

// waypoints with altitude ramped linearly along cumulative path length
std::vector<Position3> rampAltitude(std::vector<Eigen::Vector2d> horizontal,
                                    double alt_start, double alt_end) {
  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < horizontal.size(); ++i) {
    cumulative.push_back(cumulative.back() +
                         (horizontal[i] - horizontal[i - 1]).norm());
  }
  const double total = cumulative.back();
  std::vector<Position3> out;
  out.reserve(horizontal.size());
  for (std::size_t i = 0; i < horizontal.size(); ++i) {
    const double frac = total > 0.0 ? cumulative[i] / total : 0.0;
    out.emplace_back(horizontal[i].x(), horizontal[i].y(),
                     alt_start + frac * (alt_end - alt_start));
  }
  return out;
}

// points the mount and initial tilt straight at the first waypoint
void aimAtFirstWaypoint(ScenarioConfig& cfg) {
  const Position3 rel = cfg.route.waypoints_enu.front() - cfg.laser_offset_enu;
  cfg.mount_heading_rad = azimuth_of(rel);
  cfg.initial_pose = {0.0, elevation_of(rel)};
}

ScenarioConfig zigzagRange() {
  ScenarioConfig cfg;
  cfg.name = "zigzag-range";
  // first diagonal passes close by the station; east-west ladder climbs to
  // beyond the sensor range cutoff
  std::vector<Eigen::Vector2d> legs{
      {-6.0, -0.5}, {15.0, 2.5}, {20.0, 15.0}, {-20.0, 15.0}, {-20.0, 25.0},
      {20.0, 25.0}, {20.0, 35.0}, {-20.0, 35.0}, {-20.0, 45.0}, {20.0, 45.0},
      {20.0, 55.0}, {-20.0, 55.0}, {-20.0, 65.0}, {20.0, 65.0}};
  cfg.route.waypoints_enu = rampAltitude(std::move(legs), 0.8, 7.9);
  cfg.route.cruise_speed_mps = 1.0;
  cfg.duration_s = 340.0;
  aimAtFirstWaypoint(cfg);
  return cfg;
}

ScenarioConfig plumeScan() {
  ScenarioConfig cfg;
  cfg.name = "plume-scan";
  std::vector<Position3> wps;
  double altitude = 6.0;
  bool left_to_right = true;
  for (int pass = 0; pass < 7; ++pass) {
    const double x0 = left_to_right ? -12.0 : 12.0;
    const double x1 = -x0;
    wps.emplace_back(x0, -46.0, altitude);
    wps.emplace_back(x1, -46.0, altitude);
    left_to_right = !left_to_right;
    altitude -= 0.7;
  }
  cfg.route.waypoints_enu = std::move(wps);
  cfg.route.cruise_speed_mps = 1.0;
  cfg.duration_s = 185.0;

  GaussianPlumeField plume;
  plume.source = {0.0, -16.0, 0.0};  // release 1.5 m above ground
  plume.emission_l_min = 25.0;
  plume.wind_mps = {0.6, -1.2, 0.0};
  plume.ground_z_m = -1.5;
  cfg.field.plume = plume;
  aimAtFirstWaypoint(cfg);
  return cfg;
}

ScenarioConfig flyawayRange() {
  ScenarioConfig cfg;
  cfg.name = "flyaway-range";
  cfg.route.waypoints_enu = {{0.0, 5.0, 2.0}, {0.0, 80.0, 2.0}};
  cfg.route.cruise_speed_mps = 1.0;
  cfg.duration_s = 80.0;
  aimAtFirstWaypoint(cfg);
  return cfg;
}

ScenarioConfig closeFlyby() {
  ScenarioConfig cfg;
  cfg.name = "close-flyby";
  cfg.route.waypoints_enu = {{0.5, -20.0, 0.5}, {0.5, 20.0, 0.5}};
  cfg.route.cruise_speed_mps = 4.0;  // sweeps past faster than the PTU can pan
  cfg.duration_s = 14.0;
  aimAtFirstWaypoint(cfg);
  return cfg;
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  return {"zigzag-range", "plume-scan", "flyaway-range", "close-flyby"};
}

ScenarioConfig builtin_scenario(const std::string& name) {
  if (name == "zigzag-range") return zigzagRange();
  if (name == "plume-scan") return plumeScan();
  if (name == "flyaway-range") return flyawayRange();
  if (name == "close-flyby") return closeFlyby();
  throw ConfigError("unknown builtin scenario: " + name);
}

}  // namespace opgt
