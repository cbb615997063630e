#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "opgt/gas.hpp"
#include "opgt/geo.hpp"

namespace opgt {

struct TelemetrySample {
  double t_s = 0.0;
  GeodeticPosition position;
};

// Time-ordered drone position log as recorded on board.
struct TelemetryLog {
  std::vector<TelemetrySample> samples;
};

// One postprocessed measurement: path-average concentration over the beam.
struct ConcentrationSample {
  double t_s = 0.0;
  double u_bar_ppm = 0.0;
  double d_m = 0.0;
  Position3 beam_start = Position3::Zero();  // TDLAS, local ENU
  Position3 beam_end = Position3::Zero();    // drone, local ENU
  StatusCode status = StatusCode::Ok;
};

// Vertical plane through a reference point; the normal must be horizontal.
// In-plane coordinates: y along up x normal (right-handed as seen from the
// normal side), z straight up.
struct PlaneSpec {
  Position3 point = Position3::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d(0.0, 1.0, 0.0);
};

struct PlanePoint {
  double y_m = 0.0;
  double z_m = 0.0;
};

// Converts the log once, then answers position queries by component-wise
// linear interpolation between the bracketing samples. No extrapolation.
class TelemetryInterpolator {
 public:
  TelemetryInterpolator(const TelemetryLog& log, const UtmPosition& anchor);

  Position3 at(double t_s) const;  // throws DomainError outside the time range
  double first_t() const { return t_.front(); }
  double last_t() const { return t_.back(); }
  bool covers(double t_s) const { return t_s >= t_.front() && t_s <= t_.back(); }

 private:
  std::vector<double> t_;
  std::vector<Position3> enu_;
};

// u_bar = m / d with d the Euclidean distance between the beam endpoints.
// Rejects ERROR records and distances below the floor.
ConcentrationSample average_concentration(const MeasurementRecord& rec,
                                          const Position3& tdlas_enu,
                                          const Position3& drone_enu,
                                          double min_distance_m = 1.0);

// Keeps OK and WARN records, drops ERROR records.
std::vector<MeasurementRecord> filter_valid(const std::vector<MeasurementRecord>& records);

// Intersection of the beam segment with the plane, or nothing when the
// segment does not cross it. A beam lying in the plane is degenerate.
std::optional<PlanePoint> project_to_plane(const ConcentrationSample& sample,
                                           const PlaneSpec& plane);

struct DistanceBin {
  long bin_index = 0;  // covers [bin_index*w, (bin_index+1)*w)
  long count = 0;
  long valid = 0;
  double valid_fraction = 0.0;
};

std::vector<DistanceBin> distance_status_table(
    const std::vector<std::pair<double, StatusCode>>& records, double bin_width_m);

struct ErrorBudget {
  double worst_case_ppm = 0.0;
  double linear_approx_ppm = 0.0;
};

// Worst-case path-average error from attributing the measured column to a
// distance off by the combined antenna offsets.
ErrorBudget error_budget(double offset_antenna_reflector_m,
                         double offset_antenna_laser_m, double d_m,
                         double background_ppm);

}  // namespace opgt
