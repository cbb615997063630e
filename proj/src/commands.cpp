#include "opgt/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "opgt/config.hpp"
#include "opgt/csv.hpp"
#include "opgt/error.hpp"

namespace opgt {
namespace {

namespace fs = std::filesystem;

constexpr char kArtifactVersion[] = "0.1.0";

std::string readFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void writeFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

int reportError(std::ostream& err, const std::exception& e, int code) {
  err << "error: " << e.what() << "\n";
  return code;
}

std::vector<RejectRow> postprocessRecords(const std::vector<MeasurementRecord>& records,
                                          const TelemetryInterpolator& interp,
                                          const Position3& tdlas_enu,
                                          const std::optional<PlaneSpec>& plane,
                                          double min_distance_m,
                                          std::vector<ResultRow>& results) {
  std::vector<RejectRow> rejects;
  for (const MeasurementRecord& rec : records) {
    if (!interp.covers(rec.t_s)) {
      rejects.push_back({rec, "outside telemetry time range"});
      continue;
    }
    if (!status_is_valid(rec.status)) continue;  // ERROR records are filtered
    const Position3 drone = interp.at(rec.t_s);
    ConcentrationSample sample;
    try {
      sample = average_concentration(rec, tdlas_enu, drone, min_distance_m);
    } catch (const DomainError&) {
      rejects.push_back({rec, "distance below the minimum floor"});
      continue;
    }
    ResultRow row;
    row.t_s = sample.t_s;
    row.d_m = sample.d_m;
    row.u_bar_ppm = sample.u_bar_ppm;
    row.plane_y_m = std::numeric_limits<double>::quiet_NaN();
    row.plane_z_m = std::numeric_limits<double>::quiet_NaN();
    row.status = sample.status;
    if (plane) {
      if (const auto point = project_to_plane(sample, *plane)) {
        row.plane_y_m = point->y_m;
        row.plane_z_m = point->z_m;
      }
    }
    results.push_back(row);
  }
  return rejects;
}

}  // namespace

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.config_path.empty() == opt.builtin.empty()) {
      throw ConfigError("exactly one of --config and --builtin is required");
    }
    ScenarioConfig cfg = opt.config_path.empty()
                             ? builtin_scenario(opt.builtin)
                             : parse_scenario_config(readFile(opt.config_path));
    if (opt.seed) cfg.seed = *opt.seed;
    validate(cfg);

    const fs::path dir(opt.out_dir);
    fs::create_directories(dir);
    const char* files[] = {kTelemetryFile, kMeasurementsFile, kTrackerFile,
                           kTruthFile, kManifestFile};
    if (!opt.force) {
      for (const char* name : files) {
        if (fs::exists(dir / name)) {
          throw IoError("output file exists (use --force to overwrite): " +
                        (dir / name).string());
        }
      }
    }

    const RunLogs logs = run_scenario(cfg);

    std::ostringstream telemetry, measurements, tracker, truth;
    write_telemetry_csv(telemetry, logs.telemetry);
    write_measurements_csv(measurements, logs.measurements);
    write_tracker_csv(tracker, logs.tracker);
    write_truth_csv(truth, logs.truth);
    writeFile(dir / kTelemetryFile, telemetry.str());
    writeFile(dir / kMeasurementsFile, measurements.str());
    writeFile(dir / kTrackerFile, tracker.str());
    writeFile(dir / kTruthFile, truth.str());

    nlohmann::json manifest{
        {"artifact_version", kArtifactVersion},
        {"scenario_name", cfg.name},
        {"seed", cfg.seed},
        {"config_fingerprint", config_fingerprint(cfg)},
        {"config", nlohmann::json::parse(scenario_config_to_json(cfg))},
    };
    writeFile(dir / kManifestFile, manifest.dump(2) + "\n");

    int valid = 0;
    for (const auto& m : logs.measurements) valid += status_is_valid(m.status);
    out << "scenario '" << cfg.name << "' seed " << cfg.seed << ": "
        << logs.measurements.size() << " measurements (" << valid << " valid), "
        << logs.tracker.size() << " control steps -> " << dir.string() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    return reportError(err, e, kExitConfigError);
  } catch (const SchemaError& e) {
    return reportError(err, e, kExitConfigError);
  } catch (const std::exception& e) {
    return reportError(err, e, kExitRuntimeError);
  }
}

int cmd_postprocess(const PostprocessOptions& opt, std::ostream& out,
                    std::ostream& err) {
  try {
    std::ifstream telemetry_in(opt.telemetry_csv);
    if (!telemetry_in) throw IoError("cannot open " + opt.telemetry_csv);
    std::ifstream measurements_in(opt.measurements_csv);
    if (!measurements_in) throw IoError("cannot open " + opt.measurements_csv);

    const std::vector<TelemetryRow> telemetry = read_telemetry_csv(telemetry_in);
    const std::vector<MeasurementRecord> records =
        read_measurements_csv(measurements_in);

    std::vector<ResultRow> results;
    std::vector<RejectRow> rejects;
    if (!records.empty()) {
      const UtmPosition anchor = geodetic_to_utm(records.front().tdlas_position);
      const Position3 tdlas_enu =
          utm_to_enu(geodetic_to_utm(records.front().tdlas_position, anchor.zone),
                     anchor);
      if (telemetry.empty()) {
        for (const auto& rec : records) {
          rejects.push_back({rec, "outside telemetry time range"});
        }
      } else {
        const TelemetryInterpolator interp(telemetry_log_from_rows(telemetry), anchor);
        rejects = postprocessRecords(records, interp, tdlas_enu, opt.plane,
                                     opt.min_distance_m, results);
      }
    }

    std::ostringstream results_text, rejects_text;
    write_results_csv(results_text, results);
    write_rejects_csv(rejects_text, rejects);

    const fs::path out_path(opt.output_csv);
    writeFile(out_path, results_text.str());
    fs::path rejects_path = out_path;
    rejects_path.replace_extension();
    rejects_path += ".rejects.csv";
    writeFile(rejects_path, rejects_text.str());

    out << results.size() << " results, " << rejects.size() << " rejects -> "
        << out_path.string() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    return reportError(err, e, kExitConfigError);
  } catch (const SchemaError& e) {
    return reportError(err, e, kExitConfigError);
  } catch (const std::exception& e) {
    return reportError(err, e, kExitRuntimeError);
  }
}

int cmd_metrics(const MetricsOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const fs::path dir(opt.run_dir);
    for (const char* name : {kTelemetryFile, kMeasurementsFile, kTrackerFile,
                             kTruthFile, kManifestFile}) {
      if (!fs::exists(dir / name)) {
        throw IoError("run directory is missing " + std::string(name));
      }
    }
    std::ifstream telemetry_in(dir / kTelemetryFile);
    std::ifstream measurements_in(dir / kMeasurementsFile);
    std::ifstream tracker_in(dir / kTrackerFile);
    const std::vector<TelemetryRow> telemetry = read_telemetry_csv(telemetry_in);
    const std::vector<MeasurementRecord> records =
        read_measurements_csv(measurements_in);
    const std::vector<TrackerRow> tracker = read_tracker_csv(tracker_in);

    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(readFile(dir / kManifestFile));
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError(std::string("manifest.json is not valid JSON: ") + e.what());
    }

    // distances via telemetry interpolation, exactly what a real run has
    std::vector<std::pair<double, StatusCode>> with_distance;
    if (!records.empty() && !telemetry.empty()) {
      const UtmPosition anchor = geodetic_to_utm(records.front().tdlas_position);
      const Position3 tdlas_enu = Position3::Zero();
      const TelemetryInterpolator interp(telemetry_log_from_rows(telemetry), anchor);
      for (const auto& rec : records) {
        if (!interp.covers(rec.t_s)) continue;
        with_distance.emplace_back(euclidean_distance(tdlas_enu, interp.at(rec.t_s)),
                                   rec.status);
      }
    }
    const std::vector<DistanceBin> table =
        distance_status_table(with_distance, opt.bin_width_m);

    long valid = 0;
    for (const auto& rec : records) valid += status_is_valid(rec.status) ? 1 : 0;

    std::map<TrackerMode, long> occupancy;
    for (const auto& row : tracker) occupancy[row.mode] += 1;

    // reacquisition: time from each VISUAL dropout until VISUAL returns
    std::vector<double> reacquisitions;
    bool unrecovered_loss = false;
    for (std::size_t i = 1; i < tracker.size(); ++i) {
      if (tracker[i].mode != TrackerMode::Visual &&
          tracker[i - 1].mode == TrackerMode::Visual) {
        bool recovered = false;
        for (std::size_t j = i + 1; j < tracker.size(); ++j) {
          if (tracker[j].mode == TrackerMode::Visual) {
            reacquisitions.push_back(tracker[j].t_s - tracker[i].t_s);
            recovered = true;
            break;
          }
        }
        if (!recovered) unrecovered_loss = true;
      }
    }

    out << "run: " << manifest.value("scenario_name", std::string("?")) << " (seed "
        << manifest.value("seed", 0ull) << ")\n";
    out << "measurements: " << records.size() << ", valid " << valid << " ("
        << format_double(records.empty() ? 0.0
                                         : 100.0 * valid / static_cast<double>(
                                                               records.size()))
        << "%)\n";
    const long control_steps = static_cast<long>(tracker.size());
    out << "mode occupancy:";
    for (const auto mode :
         {TrackerMode::Visual, TrackerMode::GnssFallback, TrackerMode::Search}) {
      const double f = control_steps > 0
                           ? static_cast<double>(occupancy[mode]) / control_steps
                           : 0.0;
      out << " " << tracker_mode_name(mode) << "=" << format_double(100.0 * f) << "%";
    }
    out << "\n";
    out << "vision losses: " << reacquisitions.size() + (unrecovered_loss ? 1 : 0);
    if (!reacquisitions.empty()) {
      double worst = 0.0, sum = 0.0;
      for (double r : reacquisitions) {
        worst = std::max(worst, r);
        sum += r;
      }
      out << ", reacquired in mean " << format_double(sum / reacquisitions.size())
          << " s, max " << format_double(worst) << " s";
    }
    if (unrecovered_loss) out << ", one loss never reacquired";
    out << "\n";

    const auto& config = manifest.at("config").at("scenario");
    const auto vec_norm = [](const nlohmann::json& v) {
      return std::sqrt(std::pow(v[0].get<double>(), 2) +
                       std::pow(v[1].get<double>(), 2) +
                       std::pow(v[2].get<double>(), 2));
    };
    const double offset_reflector =
        vec_norm(config.at("drone").at("antenna_offset_enu_m"));
    const double offset_laser = vec_norm(config.at("station").at("laser_offset_enu_m"));
    const double background = config.at("field").at("background_ppm").get<double>();
    const ErrorBudget budget =
        error_budget(offset_reflector, offset_laser, 50.0, background);
    out << "offset error budget at 50 m, " << format_double(background)
        << " ppm background: worst case " << format_double(budget.worst_case_ppm)
        << " ppm (linear approx " << format_double(budget.linear_approx_ppm)
        << " ppm)\n";

    out << "distance bins (" << format_double(opt.bin_width_m) << " m):\n";
    std::ostringstream csv;
    csv << "bin_lo_m,bin_hi_m,count,valid,valid_fraction\n";
    for (const auto& b : table) {
      const double lo = b.bin_index * opt.bin_width_m;
      const double hi = (b.bin_index + 1) * opt.bin_width_m;
      out << "  [" << format_double(lo) << ", " << format_double(hi) << "): "
          << b.count << " records, valid fraction " << format_double(b.valid_fraction)
          << "\n";
      csv << format_double(lo) << ',' << format_double(hi) << ',' << b.count << ','
          << b.valid << ',' << format_double(b.valid_fraction) << '\n';
    }
    writeFile(dir / kMetricsFile, csv.str());
    return kExitOk;
  } catch (const ConfigError& e) {
    return reportError(err, e, kExitConfigError);
  } catch (const SchemaError& e) {
    return reportError(err, e, kExitConfigError);
  } catch (const std::exception& e) {
    return reportError(err, e, kExitRuntimeError);
  }
}

}  // namespace opgt
