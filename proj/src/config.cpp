#include "opgt/config.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include <json.hpp>

#include "opgt/error.hpp"

namespace opgt {
namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config key '" + path + "': " + what);
}

void rejectUnknownKeys(const json& obj, const std::set<std::string>& allowed,
                       const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown config key '" + path + key + "'");
    }
  }
}

double getNumber(const json& obj, const char* key, const std::string& path,
                 double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + key, "expected a number");
  return v.get<double>();
}

int getInt(const json& obj, const char* key, const std::string& path, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + key, "expected an integer");
  return v.get<int>();
}

Eigen::Vector3d getVec3(const json& obj, const char* key, const std::string& path,
                        const Eigen::Vector3d& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number()) {
    fail(path + key, "expected an array of three numbers");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

void parseStation(const json& obj, const std::string& path, ScenarioConfig& cfg) {
  rejectUnknownKeys(obj,
                    {"latitude_deg", "longitude_deg", "altitude_m",
                     "mount_heading_deg", "laser_offset_enu_m", "initial_pan_deg",
                     "initial_tilt_deg"},
                    path);
  cfg.station_geodetic.latitude_deg =
      getNumber(obj, "latitude_deg", path, cfg.station_geodetic.latitude_deg);
  cfg.station_geodetic.longitude_deg =
      getNumber(obj, "longitude_deg", path, cfg.station_geodetic.longitude_deg);
  cfg.station_geodetic.altitude_m =
      getNumber(obj, "altitude_m", path, cfg.station_geodetic.altitude_m);
  cfg.mount_heading_rad = getNumber(obj, "mount_heading_deg", path,
                                    cfg.mount_heading_rad / kDegToRad) *
                          kDegToRad;
  cfg.laser_offset_enu = getVec3(obj, "laser_offset_enu_m", path, cfg.laser_offset_enu);
  cfg.initial_pose.pan_rad =
      getNumber(obj, "initial_pan_deg", path, cfg.initial_pose.pan_rad / kDegToRad) *
      kDegToRad;
  cfg.initial_pose.tilt_rad =
      getNumber(obj, "initial_tilt_deg", path, cfg.initial_pose.tilt_rad / kDegToRad) *
      kDegToRad;
}

void parseRoute(const json& obj, const std::string& path, ScenarioConfig& cfg) {
  rejectUnknownKeys(obj, {"cruise_speed_mps", "arrival_tolerance_m", "waypoints_enu_m"},
                    path);
  cfg.route.cruise_speed_mps =
      getNumber(obj, "cruise_speed_mps", path, cfg.route.cruise_speed_mps);
  cfg.route.arrival_tolerance_m =
      getNumber(obj, "arrival_tolerance_m", path, cfg.route.arrival_tolerance_m);
  if (obj.contains("waypoints_enu_m")) {
    const json& wps = obj.at("waypoints_enu_m");
    if (!wps.is_array()) fail(path + "waypoints_enu_m", "expected an array");
    cfg.route.waypoints_enu.clear();
    for (std::size_t i = 0; i < wps.size(); ++i) {
      const json& wp = wps[i];
      if (!wp.is_array() || wp.size() != 3) {
        fail(path + "waypoints_enu_m[" + std::to_string(i) + "]",
             "expected [east, north, up] meters");
      }
      cfg.route.waypoints_enu.emplace_back(wp[0].get<double>(), wp[1].get<double>(),
                                           wp[2].get<double>());
    }
  }
}

void parseDrone(const json& obj, const std::string& path, ScenarioConfig& cfg) {
  rejectUnknownKeys(
      obj, {"antenna_offset_enu_m", "gnss_noise_sd_m", "telemetry_every_ticks"}, path);
  cfg.antenna_offset_enu =
      getVec3(obj, "antenna_offset_enu_m", path, cfg.antenna_offset_enu);
  cfg.gnss_noise_sd_m = getNumber(obj, "gnss_noise_sd_m", path, cfg.gnss_noise_sd_m);
  cfg.telemetry_every_ticks =
      getInt(obj, "telemetry_every_ticks", path, cfg.telemetry_every_ticks);
}

void parsePlume(const json& obj, const std::string& path, ScenarioConfig& cfg) {
  rejectUnknownKeys(obj,
                    {"source_enu_m", "emission_l_min", "wind_enu_mps", "sigma_y_coeff",
                     "sigma_y_exponent", "sigma_z_coeff", "sigma_z_exponent",
                     "ground_z_m"},
                    path);
  GaussianPlumeField plume = cfg.field.plume.value_or(GaussianPlumeField{});
  plume.source = getVec3(obj, "source_enu_m", path, plume.source);
  plume.emission_l_min = getNumber(obj, "emission_l_min", path, plume.emission_l_min);
  plume.wind_mps = getVec3(obj, "wind_enu_mps", path, plume.wind_mps);
  plume.sigma_y.coeff = getNumber(obj, "sigma_y_coeff", path, plume.sigma_y.coeff);
  plume.sigma_y.exponent =
      getNumber(obj, "sigma_y_exponent", path, plume.sigma_y.exponent);
  plume.sigma_z.coeff = getNumber(obj, "sigma_z_coeff", path, plume.sigma_z.coeff);
  plume.sigma_z.exponent =
      getNumber(obj, "sigma_z_exponent", path, plume.sigma_z.exponent);
  plume.ground_z_m = getNumber(obj, "ground_z_m", path, plume.ground_z_m);
  cfg.field.plume = plume;
}

void parseField(const json& obj, const std::string& path, ScenarioConfig& cfg) {
  rejectUnknownKeys(obj, {"background_ppm", "plume"}, path);
  cfg.field.background_ppm =
      getNumber(obj, "background_ppm", path, cfg.field.background_ppm);
  if (obj.contains("plume")) {
    const json& plume = obj.at("plume");
    if (plume.is_null()) {
      cfg.field.plume.reset();
    } else if (plume.is_object()) {
      parsePlume(plume, path + "plume.", cfg);
    } else {
      fail(path + "plume", "expected an object or null");
    }
  }
}

void parseSensor(const json& obj, const std::string& path, ScenarioConfig& cfg) {
  rejectUnknownKeys(obj,
                    {"max_range_m", "reflector_radius_m", "beam_divergence_rad",
                     "warn_fraction", "overexposure_distance_m", "noise_sd_ppm_m",
                     "every_ticks"},
                    path);
  cfg.sensor.max_range_m = getNumber(obj, "max_range_m", path, cfg.sensor.max_range_m);
  cfg.sensor.reflector_radius_m =
      getNumber(obj, "reflector_radius_m", path, cfg.sensor.reflector_radius_m);
  cfg.sensor.beam_divergence_rad =
      getNumber(obj, "beam_divergence_rad", path, cfg.sensor.beam_divergence_rad);
  cfg.sensor.warn_fraction =
      getNumber(obj, "warn_fraction", path, cfg.sensor.warn_fraction);
  cfg.sensor.overexposure_distance_m =
      getNumber(obj, "overexposure_distance_m", path, cfg.sensor.overexposure_distance_m);
  cfg.sensor.noise_sd_ppm_m =
      getNumber(obj, "noise_sd_ppm_m", path, cfg.sensor.noise_sd_ppm_m);
  cfg.sensor_every_ticks = getInt(obj, "every_ticks", path, cfg.sensor_every_ticks);
}

void parseVision(const json& obj, const std::string& path, ScenarioConfig& cfg) {
  rejectUnknownKeys(obj,
                    {"frame_width_px", "frame_height_px", "base_hfov_deg",
                     "base_vfov_deg", "hue_windows_deg", "saturation_min", "value_min",
                     "dbscan_eps_px", "dbscan_min_pts", "zoom_lower_px",
                     "zoom_upper_px", "zoom_dwell_s", "camera_every_ticks"},
                    path);
  const int width =
      getInt(obj, "frame_width_px", path, cfg.vision.frame.res_x1);
  const int height =
      getInt(obj, "frame_height_px", path, cfg.vision.frame.res_x2);
  if (width > 0 && height > 0) cfg.vision.frame = FrameGeometry::of(width, height);
  cfg.vision.base_intrinsics.hfov_rad =
      getNumber(obj, "base_hfov_deg", path,
                cfg.vision.base_intrinsics.hfov_rad / kDegToRad) *
      kDegToRad;
  cfg.vision.base_intrinsics.vfov_rad =
      getNumber(obj, "base_vfov_deg", path,
                cfg.vision.base_intrinsics.vfov_rad / kDegToRad) *
      kDegToRad;
  if (obj.contains("hue_windows_deg")) {
    const json& windows = obj.at("hue_windows_deg");
    if (!windows.is_array()) fail(path + "hue_windows_deg", "expected an array");
    cfg.vision.thresholds.hue_windows_deg.clear();
    for (std::size_t i = 0; i < windows.size(); ++i) {
      const json& w = windows[i];
      if (!w.is_array() || w.size() != 2) {
        fail(path + "hue_windows_deg[" + std::to_string(i) + "]",
             "expected [lo, hi] degrees");
      }
      cfg.vision.thresholds.hue_windows_deg.push_back(
          {w[0].get<double>(), w[1].get<double>()});
    }
  }
  cfg.vision.thresholds.saturation_min =
      getNumber(obj, "saturation_min", path, cfg.vision.thresholds.saturation_min);
  cfg.vision.thresholds.value_min =
      getNumber(obj, "value_min", path, cfg.vision.thresholds.value_min);
  cfg.vision.dbscan.eps_px = getNumber(obj, "dbscan_eps_px", path, cfg.vision.dbscan.eps_px);
  cfg.vision.dbscan.min_pts = getInt(obj, "dbscan_min_pts", path, cfg.vision.dbscan.min_pts);
  cfg.vision.zoom.lower_px = getNumber(obj, "zoom_lower_px", path, cfg.vision.zoom.lower_px);
  cfg.vision.zoom.upper_px = getNumber(obj, "zoom_upper_px", path, cfg.vision.zoom.upper_px);
  cfg.vision.zoom.dwell_s = getNumber(obj, "zoom_dwell_s", path, cfg.vision.zoom.dwell_s);
  cfg.camera_every_ticks = getInt(obj, "camera_every_ticks", path, cfg.camera_every_ticks);
}

void parseRender(const json& obj, const std::string& path, ScenarioConfig& cfg) {
  rejectUnknownKeys(obj,
                    {"led_ring_radius_m", "ring_thickness_px", "brightness_min",
                     "brightness_max", "distractor_count", "distractor_pixels",
                     "distractor_color_rgb", "pixel_noise_probability"},
                    path);
  cfg.render.led_ring_radius_m =
      getNumber(obj, "led_ring_radius_m", path, cfg.render.led_ring_radius_m);
  cfg.render.ring_thickness_px =
      getNumber(obj, "ring_thickness_px", path, cfg.render.ring_thickness_px);
  cfg.render.brightness_min = getInt(obj, "brightness_min", path, cfg.render.brightness_min);
  cfg.render.brightness_max = getInt(obj, "brightness_max", path, cfg.render.brightness_max);
  cfg.render.distractor_count =
      getInt(obj, "distractor_count", path, cfg.render.distractor_count);
  cfg.render.distractor_pixels =
      getInt(obj, "distractor_pixels", path, cfg.render.distractor_pixels);
  const Eigen::Vector3d color = getVec3(
      obj, "distractor_color_rgb", path,
      Eigen::Vector3d(cfg.render.distractor_color[0], cfg.render.distractor_color[1],
                      cfg.render.distractor_color[2]));
  for (int i = 0; i < 3; ++i) {
    cfg.render.distractor_color[i] = static_cast<std::uint8_t>(color[i]);
  }
  cfg.render.pixel_noise_probability =
      getNumber(obj, "pixel_noise_probability", path, cfg.render.pixel_noise_probability);
}

void parseControl(const json& obj, const std::string& path, ScenarioConfig& cfg) {
  rejectUnknownKeys(obj,
                    {"kp", "ki", "integral_limit_deg", "telemetry_staleness_s",
                     "every_ticks", "pan_resolution_deg", "tilt_resolution_deg",
                     "max_pan_speed_dps", "max_tilt_speed_dps", "tilt_min_deg",
                     "tilt_max_deg"},
                    path);
  cfg.gains.kp = getNumber(obj, "kp", path, cfg.gains.kp);
  cfg.gains.ki = getNumber(obj, "ki", path, cfg.gains.ki);
  cfg.gains.integral_limit =
      getNumber(obj, "integral_limit_deg", path, cfg.gains.integral_limit / kDegToRad) *
      kDegToRad;
  cfg.supervisor.telemetry_staleness_s = getNumber(
      obj, "telemetry_staleness_s", path, cfg.supervisor.telemetry_staleness_s);
  cfg.control_every_ticks = getInt(obj, "every_ticks", path, cfg.control_every_ticks);
  cfg.ptu.pan_resolution_rad =
      getNumber(obj, "pan_resolution_deg", path, cfg.ptu.pan_resolution_rad / kDegToRad) *
      kDegToRad;
  cfg.ptu.tilt_resolution_rad =
      getNumber(obj, "tilt_resolution_deg", path,
                cfg.ptu.tilt_resolution_rad / kDegToRad) *
      kDegToRad;
  cfg.ptu.max_pan_speed_rad_s =
      getNumber(obj, "max_pan_speed_dps", path,
                cfg.ptu.max_pan_speed_rad_s / kDegToRad) *
      kDegToRad;
  cfg.ptu.max_tilt_speed_rad_s =
      getNumber(obj, "max_tilt_speed_dps", path,
                cfg.ptu.max_tilt_speed_rad_s / kDegToRad) *
      kDegToRad;
  cfg.ptu.tilt_min_rad =
      getNumber(obj, "tilt_min_deg", path, cfg.ptu.tilt_min_rad / kDegToRad) * kDegToRad;
  cfg.ptu.tilt_max_rad =
      getNumber(obj, "tilt_max_deg", path, cfg.ptu.tilt_max_rad / kDegToRad) * kDegToRad;
}

void parseLink(const json& obj, const std::string& path, ScenarioConfig& cfg) {
  rejectUnknownKeys(obj, {"latency_s", "jitter_sd_s", "drop_probability"}, path);
  cfg.link.latency_s = getNumber(obj, "latency_s", path, cfg.link.latency_s);
  cfg.link.jitter_sd_s = getNumber(obj, "jitter_sd_s", path, cfg.link.jitter_sd_s);
  cfg.link.drop_probability =
      getNumber(obj, "drop_probability", path, cfg.link.drop_probability);
}

void parseScenario(const json& obj, const std::string& path, ScenarioConfig& cfg) {
  rejectUnknownKeys(obj,
                    {"name", "duration_s", "timestep_s", "seed", "station", "route",
                     "drone", "field", "sensor", "vision", "render", "control", "link",
                     "sun_glare_intervals_s"},
                    path);
  if (obj.contains("name")) {
    if (!obj.at("name").is_string()) fail(path + "name", "expected a string");
    cfg.name = obj.at("name").get<std::string>();
  }
  cfg.duration_s = getNumber(obj, "duration_s", path, cfg.duration_s);
  cfg.timestep_s = getNumber(obj, "timestep_s", path, cfg.timestep_s);
  if (obj.contains("seed")) {
    const json& v = obj.at("seed");
    if (!v.is_number_unsigned() && !v.is_number_integer()) {
      fail(path + "seed", "expected an integer");
    }
    cfg.seed = v.get<std::uint64_t>();
  }
  if (obj.contains("station")) parseStation(obj.at("station"), path + "station.", cfg);
  if (obj.contains("route")) parseRoute(obj.at("route"), path + "route.", cfg);
  if (obj.contains("drone")) parseDrone(obj.at("drone"), path + "drone.", cfg);
  if (obj.contains("field")) parseField(obj.at("field"), path + "field.", cfg);
  if (obj.contains("sensor")) parseSensor(obj.at("sensor"), path + "sensor.", cfg);
  if (obj.contains("vision")) parseVision(obj.at("vision"), path + "vision.", cfg);
  if (obj.contains("render")) parseRender(obj.at("render"), path + "render.", cfg);
  if (obj.contains("control")) parseControl(obj.at("control"), path + "control.", cfg);
  if (obj.contains("link")) parseLink(obj.at("link"), path + "link.", cfg);
  if (obj.contains("sun_glare_intervals_s")) {
    const json& intervals = obj.at("sun_glare_intervals_s");
    if (!intervals.is_array()) fail(path + "sun_glare_intervals_s", "expected an array");
    cfg.sun_glare_intervals_s.clear();
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      const json& iv = intervals[i];
      if (!iv.is_array() || iv.size() != 2) {
        fail(path + "sun_glare_intervals_s[" + std::to_string(i) + "]",
             "expected [start_s, end_s]");
      }
      cfg.sun_glare_intervals_s.emplace_back(iv[0].get<double>(), iv[1].get<double>());
    }
  }
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
  rejectUnknownKeys(doc, {"version", "base", "scenario"}, "");
  if (!doc.contains("version")) throw ConfigError("config key 'version' is required");
  if (!doc.at("version").is_number_integer() ||
      doc.at("version").get<int>() != kConfigVersion) {
    throw ConfigError("config key 'version': expected " +
                      std::to_string(kConfigVersion));
  }

  ScenarioConfig cfg;
  if (doc.contains("base")) {
    if (!doc.at("base").is_string()) {
      throw ConfigError("config key 'base': expected a builtin scenario name");
    }
    cfg = builtin_scenario(doc.at("base").get<std::string>());
  }
  if (doc.contains("scenario")) {
    if (!doc.at("scenario").is_object()) {
      throw ConfigError("config key 'scenario': expected an object");
    }
    parseScenario(doc.at("scenario"), "scenario.", cfg);
  }
  validate(cfg);
  return cfg;
}

std::string scenario_config_to_json(const ScenarioConfig& cfg) {
  const auto vec3 = [](const Eigen::Vector3d& v) {
    return json::array({v.x(), v.y(), v.z()});
  };
  json scenario{
      {"name", cfg.name},
      {"duration_s", cfg.duration_s},
      {"timestep_s", cfg.timestep_s},
      {"seed", cfg.seed},
      {"station",
       {{"latitude_deg", cfg.station_geodetic.latitude_deg},
        {"longitude_deg", cfg.station_geodetic.longitude_deg},
        {"altitude_m", cfg.station_geodetic.altitude_m},
        {"mount_heading_deg", cfg.mount_heading_rad / kDegToRad},
        {"laser_offset_enu_m", vec3(cfg.laser_offset_enu)},
        {"initial_pan_deg", cfg.initial_pose.pan_rad / kDegToRad},
        {"initial_tilt_deg", cfg.initial_pose.tilt_rad / kDegToRad}}},
      {"route",
       {{"cruise_speed_mps", cfg.route.cruise_speed_mps},
        {"arrival_tolerance_m", cfg.route.arrival_tolerance_m}}},
      {"drone",
       {{"antenna_offset_enu_m", vec3(cfg.antenna_offset_enu)},
        {"gnss_noise_sd_m", cfg.gnss_noise_sd_m},
        {"telemetry_every_ticks", cfg.telemetry_every_ticks}}},
      {"field", {{"background_ppm", cfg.field.background_ppm}, {"plume", nullptr}}},
      {"sensor",
       {{"max_range_m", cfg.sensor.max_range_m},
        {"reflector_radius_m", cfg.sensor.reflector_radius_m},
        {"beam_divergence_rad", cfg.sensor.beam_divergence_rad},
        {"warn_fraction", cfg.sensor.warn_fraction},
        {"overexposure_distance_m", cfg.sensor.overexposure_distance_m},
        {"noise_sd_ppm_m", cfg.sensor.noise_sd_ppm_m},
        {"every_ticks", cfg.sensor_every_ticks}}},
      {"vision",
       {{"frame_width_px", cfg.vision.frame.res_x1},
        {"frame_height_px", cfg.vision.frame.res_x2},
        {"base_hfov_deg", cfg.vision.base_intrinsics.hfov_rad / kDegToRad},
        {"base_vfov_deg", cfg.vision.base_intrinsics.vfov_rad / kDegToRad},
        {"saturation_min", cfg.vision.thresholds.saturation_min},
        {"value_min", cfg.vision.thresholds.value_min},
        {"dbscan_eps_px", cfg.vision.dbscan.eps_px},
        {"dbscan_min_pts", cfg.vision.dbscan.min_pts},
        {"zoom_lower_px", cfg.vision.zoom.lower_px},
        {"zoom_upper_px", cfg.vision.zoom.upper_px},
        {"zoom_dwell_s", cfg.vision.zoom.dwell_s},
        {"camera_every_ticks", cfg.camera_every_ticks}}},
      {"render",
       {{"led_ring_radius_m", cfg.render.led_ring_radius_m},
        {"ring_thickness_px", cfg.render.ring_thickness_px},
        {"brightness_min", cfg.render.brightness_min},
        {"brightness_max", cfg.render.brightness_max},
        {"distractor_count", cfg.render.distractor_count},
        {"distractor_pixels", cfg.render.distractor_pixels},
        {"distractor_color_rgb",
         json::array({cfg.render.distractor_color[0], cfg.render.distractor_color[1],
                      cfg.render.distractor_color[2]})},
        {"pixel_noise_probability", cfg.render.pixel_noise_probability}}},
      {"control",
       {{"kp", cfg.gains.kp},
        {"ki", cfg.gains.ki},
        {"integral_limit_deg", cfg.gains.integral_limit / kDegToRad},
        {"telemetry_staleness_s", cfg.supervisor.telemetry_staleness_s},
        {"every_ticks", cfg.control_every_ticks},
        {"pan_resolution_deg", cfg.ptu.pan_resolution_rad / kDegToRad},
        {"tilt_resolution_deg", cfg.ptu.tilt_resolution_rad / kDegToRad},
        {"max_pan_speed_dps", cfg.ptu.max_pan_speed_rad_s / kDegToRad},
        {"max_tilt_speed_dps", cfg.ptu.max_tilt_speed_rad_s / kDegToRad},
        {"tilt_min_deg", cfg.ptu.tilt_min_rad / kDegToRad},
        {"tilt_max_deg", cfg.ptu.tilt_max_rad / kDegToRad}}},
      {"link",
       {{"latency_s", cfg.link.latency_s},
        {"jitter_sd_s", cfg.link.jitter_sd_s},
        {"drop_probability", cfg.link.drop_probability}}},
  };

  json waypoints = json::array();
  for (const auto& wp : cfg.route.waypoints_enu) waypoints.push_back(vec3(wp));
  scenario["route"]["waypoints_enu_m"] = waypoints;

  json windows = json::array();
  for (const auto& w : cfg.vision.thresholds.hue_windows_deg) {
    windows.push_back(json::array({w.lo_deg, w.hi_deg}));
  }
  scenario["vision"]["hue_windows_deg"] = windows;

  if (cfg.field.plume) {
    const auto& p = *cfg.field.plume;
    scenario["field"]["plume"] = {{"source_enu_m", vec3(p.source)},
                                  {"emission_l_min", p.emission_l_min},
                                  {"wind_enu_mps", vec3(p.wind_mps)},
                                  {"sigma_y_coeff", p.sigma_y.coeff},
                                  {"sigma_y_exponent", p.sigma_y.exponent},
                                  {"sigma_z_coeff", p.sigma_z.coeff},
                                  {"sigma_z_exponent", p.sigma_z.exponent},
                                  {"ground_z_m", p.ground_z_m}};
  }

  json intervals = json::array();
  for (const auto& [t0, t1] : cfg.sun_glare_intervals_s) {
    intervals.push_back(json::array({t0, t1}));
  }
  scenario["sun_glare_intervals_s"] = intervals;

  const json doc{{"version", kConfigVersion}, {"scenario", scenario}};
  return doc.dump(2) + "\n";
}

std::string config_fingerprint(const ScenarioConfig& cfg) {
  const std::string canonical = scenario_config_to_json(cfg);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace opgt
