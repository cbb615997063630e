#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "opgt/post.hpp"
#include "opgt/sim.hpp"

namespace opgt {

// Log file schemas. Headers are bit-exact; values use '.' decimals and the
// shortest round-trip representation. Time columns hold float seconds; a
// reader also accepts an ISO-8601 variant signalled by an `_iso` suffix on
// the time column name.

struct ResultRow {
  double t_s = 0.0;
  double d_m = 0.0;
  double u_bar_ppm = 0.0;
  double plane_y_m = 0.0;  // NaN when the beam does not cross the plane
  double plane_z_m = 0.0;
  StatusCode status = StatusCode::Ok;
};

struct RejectRow {
  MeasurementRecord record;
  std::string reason;
};

std::string format_double(double v);
double parse_double(const std::string& field, const std::string& context);

void write_telemetry_csv(std::ostream& out, const std::vector<TelemetryRow>& rows);
void write_measurements_csv(std::ostream& out,
                            const std::vector<MeasurementRecord>& rows);
void write_tracker_csv(std::ostream& out, const std::vector<TrackerRow>& rows);
void write_truth_csv(std::ostream& out, const std::vector<TruthRow>& rows);
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_rejects_csv(std::ostream& out, const std::vector<RejectRow>& rows);

// Readers validate the header exactly and name the first offending
// row/column in SchemaError messages.
std::vector<TelemetryRow> read_telemetry_csv(std::istream& in);
std::vector<MeasurementRecord> read_measurements_csv(std::istream& in);
std::vector<TrackerRow> read_tracker_csv(std::istream& in);
std::vector<TruthRow> read_truth_csv(std::istream& in);
std::vector<ResultRow> read_results_csv(std::istream& in);

TelemetryLog telemetry_log_from_rows(const std::vector<TelemetryRow>& rows);

}  // namespace opgt
