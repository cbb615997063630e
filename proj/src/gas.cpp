#include "opgt/gas.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "opgt/error.hpp"

namespace opgt {
namespace {

constexpr double kPi = std::numbers::pi;

// area(footprint disc of radius big, reflector disc of radius small, centers
// `miss` apart) / area(footprint disc)
double discOverlapFraction(double footprint_r, double reflector_r, double miss) {
  if (footprint_r <= 0.0) return miss < reflector_r ? 1.0 : 0.0;
  if (miss >= footprint_r + reflector_r) return 0.0;
  const double full = kPi * footprint_r * footprint_r;
  if (miss <= std::abs(footprint_r - reflector_r)) {
    const double small = std::min(footprint_r, reflector_r);
    return (kPi * small * small) / full;
  }
  const double d1 =
      (miss * miss + footprint_r * footprint_r - reflector_r * reflector_r) /
      (2.0 * miss);
  const double d2 = miss - d1;
  const double lens =
      footprint_r * footprint_r * std::acos(std::clamp(d1 / footprint_r, -1.0, 1.0)) -
      d1 * std::sqrt(std::max(0.0, footprint_r * footprint_r - d1 * d1)) +
      reflector_r * reflector_r * std::acos(std::clamp(d2 / reflector_r, -1.0, 1.0)) -
      d2 * std::sqrt(std::max(0.0, reflector_r * reflector_r - d2 * d2));
  return std::clamp(lens / full, 0.0, 1.0);
}

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptiveSimpson(const std::function<double(double)>& g, double a, double b,
                       double fa, double fm, double fb, double whole, double tol,
                       int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = g(lm);
  const double frm = g(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptiveSimpson(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptiveSimpson(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double GaussianPlumeField::concentration_ppm(const Position3& x, double) const {
  const Eigen::Vector2d wind_h(wind_mps.x(), wind_mps.y());
  const double u = wind_h.norm();
  if (!(u > 0.0)) {
    throw DomainError("GaussianPlumeField: zero horizontal wind speed");
  }
  const Eigen::Vector2d downwind = wind_h / u;
  const Eigen::Vector2d rel_h(x.x() - source.x(), x.y() - source.y());
  const double xi = rel_h.dot(downwind);
  if (xi <= 0.0) return 0.0;

  const double cross = rel_h.dot(Eigen::Vector2d(-downwind.y(), downwind.x()));
  const double sy = sigma_y.coeff * std::pow(xi, sigma_y.exponent);
  const double sz = sigma_z.coeff * std::pow(xi, sigma_z.exponent);
  if (!(sy > 0.0) || !(sz > 0.0)) return 0.0;

  const double height = x.z() - ground_z_m;
  const double source_height = source.z() - ground_z_m;
  const double q_m3_s = emission_l_min / 60000.0;
  const double gauss_y = std::exp(-0.5 * cross * cross / (sy * sy));
  const double gauss_z =
      std::exp(-0.5 * std::pow(height - source_height, 2) / (sz * sz)) +
      std::exp(-0.5 * std::pow(height + source_height, 2) / (sz * sz));
  return 1e6 * q_m3_s / (2.0 * kPi * u * sy * sz) * gauss_y * gauss_z;
}

double beam_integral(const GasField& f, const Position3& x_tdlas,
                     const Position3& x_drone, double t_s,
                     const QuadratureParams& q) {
  const Position3 span = x_drone - x_tdlas;
  const double d = span.norm();
  if (!(d > 0.0)) {
    throw DomainError("beam_integral: coincident beam endpoints");
  }
  const auto g = [&](double s) {
    return f.concentration_ppm(x_tdlas + s * span, t_s);
  };

  const int n0 = std::max(1, q.initial_panels);
  std::vector<double> edges(n0 + 1), mids(n0), f_edges(n0 + 1), f_mids(n0);
  for (int i = 0; i <= n0; ++i) {
    edges[i] = static_cast<double>(i) / n0;
    f_edges[i] = g(edges[i]);
  }
  double coarse = 0.0;
  for (int i = 0; i < n0; ++i) {
    mids[i] = 0.5 * (edges[i] + edges[i + 1]);
    f_mids[i] = g(mids[i]);
    coarse += simpson(f_edges[i], f_mids[i], f_edges[i + 1], edges[i + 1] - edges[i]);
  }

  const double tol = q.rel_tol * std::abs(coarse);
  double total = 0.0;
  for (int i = 0; i < n0; ++i) {
    const double whole =
        simpson(f_edges[i], f_mids[i], f_edges[i + 1], edges[i + 1] - edges[i]);
    total += adaptiveSimpson(g, edges[i], edges[i + 1], f_edges[i], f_mids[i],
                             f_edges[i + 1], whole, tol / n0, q.max_depth);
  }
  return d * total;
}

double link_budget(double distance_m, double lateral_miss_m, const SensorModel& s) {
  if (!(distance_m > 0.0)) {
    throw DomainError("link_budget: distance must be positive");
  }
  const double footprint_r = distance_m * s.beam_divergence_rad;
  const double hit =
      discOverlapFraction(footprint_r, s.reflector_radius_m, lateral_miss_m);
  const double attenuation =
      std::min(1.0, std::pow(s.max_range_m / distance_m, 2));
  return hit * attenuation;
}

double warn_threshold(const SensorModel& s) {
  return link_budget(s.warn_fraction * s.max_range_m, 0.0, s);
}

MeasurementRecord tdlas_measure(const SensorModel& s, const GasField& f,
                                const Position3& x_tdlas,
                                const Position3& x_drone_true,
                                const Position3& beam_direction, double t_s,
                                std::mt19937_64& rng, bool sun_in_frame) {
  const Position3 rel = x_drone_true - x_tdlas;
  const double d = rel.norm();
  if (!(d > 0.0)) {
    throw DomainError("tdlas_measure: reflector coincides with the sensor");
  }
  if (!(beam_direction.norm() > 0.0)) {
    throw DomainError("tdlas_measure: beam direction must be nonzero");
  }
  const Position3 beam = beam_direction.normalized();
  const double along = rel.dot(beam);
  double lateral_miss = std::numeric_limits<double>::infinity();
  if (along > 0.0) lateral_miss = (rel - along * beam).norm();

  MeasurementRecord rec;
  rec.t_s = t_s;
  rec.signal_strength =
      along > 0.0 ? link_budget(d, lateral_miss, s) : 0.0;

  if (sun_in_frame) {
    rec.status = StatusCode::ErrorLightPollution;
  } else if (rec.signal_strength <= 0.0 || d > s.max_range_m) {
    rec.status = StatusCode::ErrorNoSignal;
  } else if (d < s.overexposure_distance_m) {
    rec.status = StatusCode::WarnHighTransmission;
  } else if (rec.signal_strength < warn_threshold(s)) {
    rec.status = StatusCode::WarnLowSignal;
  } else {
    rec.status = StatusCode::Ok;
  }

  if (rec.status == StatusCode::ErrorNoSignal ||
      rec.status == StatusCode::ErrorLightPollution) {
    rec.m_ppm_m = std::numeric_limits<double>::quiet_NaN();
  } else {
    double m = beam_integral(f, x_tdlas, x_drone_true, t_s);
    if (s.noise_sd_ppm_m > 0.0) {
      std::normal_distribution<double> noise(0.0, s.noise_sd_ppm_m);
      m += noise(rng);
    }
    rec.m_ppm_m = std::max(0.0, m);
  }
  return rec;
}

const char* status_name(StatusCode s) {
  switch (s) {
    case StatusCode::Ok:
      return "OK";
    case StatusCode::WarnLowSignal:
      return "WARN_LOW_SIGNAL";
    case StatusCode::WarnHighTransmission:
      return "WARN_HIGH_TRANSMISSION";
    case StatusCode::ErrorNoSignal:
      return "ERROR_NO_SIGNAL";
    case StatusCode::ErrorLightPollution:
      return "ERROR_LIGHT_POLLUTION";
  }
  return "UNKNOWN";
}

StatusCode status_from_name(const std::string& name) {
  if (name == "OK") return StatusCode::Ok;
  if (name == "WARN_LOW_SIGNAL") return StatusCode::WarnLowSignal;
  if (name == "WARN_HIGH_TRANSMISSION") return StatusCode::WarnHighTransmission;
  if (name == "ERROR_NO_SIGNAL") return StatusCode::ErrorNoSignal;
  if (name == "ERROR_LIGHT_POLLUTION") return StatusCode::ErrorLightPollution;
  throw SchemaError("unknown status code: " + name);
}

bool status_is_valid(StatusCode s) {
  return s == StatusCode::Ok || s == StatusCode::WarnLowSignal ||
         s == StatusCode::WarnHighTransmission;
}

}  // namespace opgt
