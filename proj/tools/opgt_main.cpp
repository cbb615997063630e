// Command-line frontend: scenario simulation, measurement postprocessing,
// and run metrics. See README.md for the file formats.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <numbers>
#include <sstream>

#include "opgt/commands.hpp"
#include "opgt/config.hpp"
#include "opgt/error.hpp"

namespace {

// --plane "east,north,up,normal_azimuth_deg"
opgt::PlaneSpec parsePlaneFlag(const std::string& text) {
  std::array<double, 4> v{};
  std::stringstream ss(text);
  std::string field;
  for (double& out : v) {
    if (!std::getline(ss, field, ',')) {
      throw CLI::ValidationError("--plane expects 'east,north,up,normal_azimuth_deg'");
    }
    try {
      out = std::stod(field);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--plane: invalid number '" + field + "'");
    }
  }
  const double az = v[3] * std::numbers::pi / 180.0;
  opgt::PlaneSpec plane;
  plane.point = {v[0], v[1], v[2]};
  plane.normal = {std::sin(az), std::cos(az), 0.0};
  return plane;
}

std::string defaultOutDir(const std::string& name) {
  if (const char* root = std::getenv("OPGT_OUT_ROOT")) {
    return (std::filesystem::path(root) / name).string();
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative drone tracking and open-path gas measurement simulator"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write its logs");
  std::string config_path, out_dir;
  std::vector<std::string> builtins;
  std::uint64_t seed = 0;
  bool have_seed = false, force = false, batch = false;
  simulate->add_option("--config", config_path, "Scenario config JSON");
  simulate->add_option("--builtin", builtins, "Builtin scenario name (repeatable)");
  simulate->add_option("--out", out_dir,
                       "Output directory (defaults to $OPGT_OUT_ROOT/<name>)");
  simulate->add_option("--seed", seed, "Seed override")->each([&](const std::string&) {
    have_seed = true;
  });
  simulate->add_flag("--force", force, "Overwrite existing log files");
  simulate->add_flag("--batch", batch,
                     "Run multiple --builtin scenarios in parallel subdirectories");

  // postprocess
  auto* postprocess =
      app.add_subcommand("postprocess", "Interpolate, average, filter, and project");
  std::string telemetry_csv, measurements_csv, results_csv, plane_text;
  double min_distance = 1.0;
  postprocess->add_option("--telemetry", telemetry_csv, "telemetry.csv path")
      ->required();
  postprocess->add_option("--measurements", measurements_csv, "measurements.csv path")
      ->required();
  postprocess->add_option("--out", results_csv, "results.csv output path")->required();
  postprocess->add_option("--plane", plane_text,
                          "Projection plane 'east,north,up,normal_azimuth_deg'");
  postprocess->add_option("--min-distance", min_distance,
                          "Minimum usable beam length in meters");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Report validity and tracking metrics");
  std::string run_dir;
  double bin_width = 1.0;
  metrics->add_option("--run", run_dir, "Run directory written by simulate")->required();
  metrics->add_option("--bin-width", bin_width, "Distance bin width in meters");

  // print-config / scenarios
  auto* print_config =
      app.add_subcommand("print-config", "Print a full scenario config document");
  std::string print_builtin = "flyaway-range";
  print_config->add_option("--builtin", print_builtin, "Builtin to print");

  auto* scenarios = app.add_subcommand("scenarios", "List builtin scenarios");

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) {
    opgt::SimulateOptions opt;
    opt.config_path = config_path;
    opt.force = force;
    if (have_seed) opt.seed = seed;

    if (builtins.size() > 1 || batch) {
      if (!config_path.empty() || builtins.empty()) {
        std::cerr << "error: batch mode runs builtins only\n";
        return opgt::kExitConfigError;
      }
      const std::string root = !out_dir.empty() ? out_dir : defaultOutDir("batch");
      if (root.empty()) {
        std::cerr << "error: --out or OPGT_OUT_ROOT is required\n";
        return opgt::kExitConfigError;
      }
      std::vector<std::future<int>> jobs;
      std::vector<std::ostringstream> outs(builtins.size()), errs(builtins.size());
      for (std::size_t i = 0; i < builtins.size(); ++i) {
        opgt::SimulateOptions job = opt;
        job.builtin = builtins[i];
        job.out_dir = (std::filesystem::path(root) / builtins[i]).string();
        jobs.push_back(std::async(batch ? std::launch::async : std::launch::deferred,
                                  [job, &outs, &errs, i] {
                                    return opgt::cmd_simulate(job, outs[i], errs[i]);
                                  }));
      }
      int status = opgt::kExitOk;
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        const int code = jobs[i].get();
        std::cout << outs[i].str();
        std::cerr << errs[i].str();
        if (code != opgt::kExitOk) status = code;
      }
      return status;
    }

    opt.builtin = builtins.empty() ? "" : builtins.front();
    opt.out_dir = out_dir;
    if (opt.out_dir.empty()) {
      const std::string name = !opt.builtin.empty() ? opt.builtin : "run";
      opt.out_dir = defaultOutDir(name);
      if (opt.out_dir.empty()) {
        std::cerr << "error: --out or OPGT_OUT_ROOT is required\n";
        return opgt::kExitConfigError;
      }
    }
    return opgt::cmd_simulate(opt, std::cout, std::cerr);
  }

  if (postprocess->parsed()) {
    opgt::PostprocessOptions opt;
    opt.telemetry_csv = telemetry_csv;
    opt.measurements_csv = measurements_csv;
    opt.output_csv = results_csv;
    opt.min_distance_m = min_distance;
    if (!plane_text.empty()) {
      try {
        opt.plane = parsePlaneFlag(plane_text);
      } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return opgt::kExitConfigError;
      }
    }
    return opgt::cmd_postprocess(opt, std::cout, std::cerr);
  }

  if (metrics->parsed()) {
    opgt::MetricsOptions opt;
    opt.run_dir = run_dir;
    opt.bin_width_m = bin_width;
    return opgt::cmd_metrics(opt, std::cout, std::cerr);
  }

  if (print_config->parsed()) {
    try {
      std::cout << opgt::scenario_config_to_json(opgt::builtin_scenario(print_builtin));
    } catch (const opgt::ConfigError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return opgt::kExitConfigError;
    }
    return opgt::kExitOk;
  }

  if (scenarios->parsed()) {
    for (const auto& name : opgt::builtin_scenario_names()) {
      std::cout << name << "\n";
    }
    return opgt::kExitOk;
  }
  return opgt::kExitOk;
}
