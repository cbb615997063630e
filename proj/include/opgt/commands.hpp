#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "opgt/post.hpp"
#include "opgt/sim.hpp"

namespace opgt {

// Stable exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;  // config/schema problems
inline constexpr int kExitRuntimeError = 3;

struct SimulateOptions {
  std::string config_path;            // exactly one of config_path/builtin
  std::string builtin;
  std::string out_dir;
  std::optional<std::uint64_t> seed;  // overrides the config seed
  bool force = false;                 // allow overwriting existing logs
};

struct PostprocessOptions {
  std::string telemetry_csv;
  std::string measurements_csv;
  std::string output_csv;
  std::optional<PlaneSpec> plane;
  double min_distance_m = 1.0;
};

struct MetricsOptions {
  std::string run_dir;
  double bin_width_m = 1.0;
};

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_postprocess(const PostprocessOptions& opt, std::ostream& out,
                    std::ostream& err);
int cmd_metrics(const MetricsOptions& opt, std::ostream& out, std::ostream& err);

// Log file names inside a run directory.
inline constexpr char kTelemetryFile[] = "telemetry.csv";
inline constexpr char kMeasurementsFile[] = "measurements.csv";
inline constexpr char kTrackerFile[] = "tracker.csv";
inline constexpr char kTruthFile[] = "truth.csv";
inline constexpr char kManifestFile[] = "manifest.json";
inline constexpr char kMetricsFile[] = "metrics.csv";

}  // namespace opgt
