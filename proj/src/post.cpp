#include "opgt/post.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <map>

#include "opgt/error.hpp"

namespace opgt {

TelemetryInterpolator::TelemetryInterpolator(const TelemetryLog& log,
                                             const UtmPosition& anchor) {
  if (log.samples.empty()) {
    throw SchemaError("telemetry log is empty");
  }
  t_.reserve(log.samples.size());
  enu_.reserve(log.samples.size());
  for (const auto& s : log.samples) {
    if (!t_.empty() && s.t_s <= t_.back()) {
      throw SchemaError("telemetry timestamps must be strictly increasing");
    }
    t_.push_back(s.t_s);
    enu_.push_back(utm_to_enu(geodetic_to_utm(s.position, anchor.zone), anchor));
  }
}

Position3 TelemetryInterpolator::at(double t_s) const {
  if (t_s < t_.front() || t_s > t_.back()) {
    throw DomainError("interpolate_position: time outside the telemetry range");
  }
  const auto it = std::lower_bound(t_.begin(), t_.end(), t_s);
  const std::size_t hi = static_cast<std::size_t>(it - t_.begin());
  if (*it == t_s) return enu_[hi];
  const std::size_t lo = hi - 1;
  const double f = (t_s - t_[lo]) / (t_[hi] - t_[lo]);
  return enu_[lo] + f * (enu_[hi] - enu_[lo]);
}

ConcentrationSample average_concentration(const MeasurementRecord& rec,
                                          const Position3& tdlas_enu,
                                          const Position3& drone_enu,
                                          double min_distance_m) {
  if (!status_is_valid(rec.status)) {
    throw DomainError("average_concentration: ERROR records carry no usable value");
  }
  const double d = euclidean_distance(tdlas_enu, drone_enu);
  if (d < min_distance_m) {
    throw DomainError("average_concentration: distance below the minimum floor");
  }
  ConcentrationSample out;
  out.t_s = rec.t_s;
  out.d_m = d;
  out.u_bar_ppm = rec.m_ppm_m / d;
  out.beam_start = tdlas_enu;
  out.beam_end = drone_enu;
  out.status = rec.status;
  return out;
}

std::vector<MeasurementRecord> filter_valid(const std::vector<MeasurementRecord>& records) {
  std::vector<MeasurementRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (status_is_valid(r.status)) out.push_back(r);
  }
  return out;
}

std::optional<PlanePoint> project_to_plane(const ConcentrationSample& sample,
                                           const PlaneSpec& plane) {
  const double n_norm = plane.normal.norm();
  if (!(n_norm > 0.0) || std::abs(plane.normal.z()) > 1e-9 * n_norm) {
    throw DomainError("project_to_plane: plane normal must be horizontal and nonzero");
  }
  const Eigen::Vector3d n = plane.normal / n_norm;
  const Position3 span = sample.beam_end - sample.beam_start;
  const double denom = span.dot(n);
  const double num = (plane.point - sample.beam_start).dot(n);
  if (std::abs(denom) < 1e-15) {
    if (std::abs(num) < 1e-12) {
      throw DomainError("project_to_plane: beam lies in the plane");
    }
    return std::nullopt;  // parallel, never crosses
  }
  const double s = num / denom;
  if (s < 0.0 || s > 1.0) return std::nullopt;
  const Position3 q = sample.beam_start + s * span;
  const Eigen::Vector3d up(0.0, 0.0, 1.0);
  const Eigen::Vector3d horizontal = up.cross(n);
  const Position3 rel = q - plane.point;
  return PlanePoint{rel.dot(horizontal), rel.dot(up)};
}

std::vector<DistanceBin> distance_status_table(
    const std::vector<std::pair<double, StatusCode>>& records, double bin_width_m) {
  if (!(bin_width_m > 0.0)) {
    throw DomainError("distance_status_table: bin width must be positive");
  }
  std::map<long, DistanceBin> bins;
  for (const auto& [d, status] : records) {
    const long idx = static_cast<long>(std::floor(d / bin_width_m));
    DistanceBin& b = bins[idx];
    b.bin_index = idx;
    b.count += 1;
    b.valid += status_is_valid(status) ? 1 : 0;
  }
  std::vector<DistanceBin> out;
  out.reserve(bins.size());
  for (auto& [idx, b] : bins) {
    b.valid_fraction = static_cast<double>(b.valid) / static_cast<double>(b.count);
    out.push_back(b);
  }
  return out;
}

ErrorBudget error_budget(double offset_antenna_reflector_m,
                         double offset_antenna_laser_m, double d_m,
                         double background_ppm) {
  const double total = offset_antenna_reflector_m + offset_antenna_laser_m;
  if (!(d_m > total)) {
    throw DomainError("error_budget: distance must exceed the combined offsets");
  }
  ErrorBudget out;
  out.linear_approx_ppm = background_ppm * total / d_m;
  out.worst_case_ppm = background_ppm * total / (d_m - total);
  return out;
}

}  // namespace opgt
