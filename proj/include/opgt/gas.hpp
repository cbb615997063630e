#pragma once

#include <memory>
#include <random>
#include <vector>

#include "opgt/geo.hpp"

namespace opgt {

// Evaluable concentration field u*(x, t) in ppm.
struct GasField {
  virtual ~GasField() = default;
  virtual double concentration_ppm(const Position3& x, double t_s) const = 0;
};

struct UniformField final : GasField {
  double background_ppm = 400.0;

  explicit UniformField(double ppm) : background_ppm(ppm) {}
  double concentration_ppm(const Position3&, double) const override {
    return background_ppm;
  }
};

// Power-law dispersion coefficient sigma(x) = coeff * x^exponent (meters).
struct PlumeSigma {
  double coeff = 0.0;
  double exponent = 0.0;
};

// Standard Gaussian plume with ground reflection. Wind transport uses the
// horizontal wind components; concentrations are zero upwind of the source.
// Evaluation throws DomainError when the horizontal wind speed is zero.
struct GaussianPlumeField final : GasField {
  Position3 source = Position3::Zero();
  double emission_l_min = 25.0;
  Eigen::Vector3d wind_mps = Eigen::Vector3d(0.0, -1.0, 0.0);
  PlumeSigma sigma_y{0.128, 0.905};  // Pasquill-Gifford class D power law
  PlumeSigma sigma_z{0.093, 0.85};
  double ground_z_m = 0.0;

  double concentration_ppm(const Position3& x, double t_s) const override;
};

struct SumField final : GasField {
  std::vector<std::shared_ptr<const GasField>> parts;

  double concentration_ppm(const Position3& x, double t_s) const override {
    double sum = 0.0;
    for (const auto& p : parts) sum += p->concentration_ppm(x, t_s);
    return sum;
  }
};

struct QuadratureParams {
  double rel_tol = 1e-9;
  int initial_panels = 32;  // keeps narrow plume crossings from being skipped
  int max_depth = 28;
};

struct SensorModel {
  double max_range_m = 60.0;
  double reflector_radius_m = 0.125;
  double beam_divergence_rad = 0.025;
  double warn_fraction = 0.75;          // of max range; beyond it: WARN_LOW_SIGNAL
  double overexposure_distance_m = 5.0; // below it: WARN_HIGH_TRANSMISSION
  double noise_sd_ppm_m = 40.0;
};

enum class StatusCode {
  Ok,
  WarnLowSignal,
  WarnHighTransmission,
  ErrorNoSignal,
  ErrorLightPollution,
};

const char* status_name(StatusCode s);
StatusCode status_from_name(const std::string& name);
bool status_is_valid(StatusCode s);  // OK and WARN count as valid

struct MeasurementRecord {
  double t_s = 0.0;
  double m_ppm_m = 0.0;  // NaN for ERROR records
  StatusCode status = StatusCode::ErrorNoSignal;
  double signal_strength = 0.0;  // [0, 1]
  GeodeticPosition tdlas_position;
};

// d * integral_0^1 u*((x_drone - x_tdlas) s + x_tdlas, t) ds, by adaptive
// composite Simpson quadrature to the requested relative tolerance. The
// path-length factor makes the result a ppm*m column amount.
double beam_integral(const GasField& f, const Position3& x_tdlas,
                     const Position3& x_drone, double t_s,
                     const QuadratureParams& q = {});

// Fraction of the beam footprint (radius d * divergence) overlapping the
// reflector disc at the given lateral miss, attenuated by (max_range/d)^2
// capped at one.
double link_budget(double distance_m, double lateral_miss_m, const SensorModel& s);

// Signal strength at the WARN_LOW_SIGNAL boundary (perfect alignment at
// warn_fraction * max_range).
double warn_threshold(const SensorModel& s);

MeasurementRecord tdlas_measure(const SensorModel& s, const GasField& f,
                                const Position3& x_tdlas,
                                const Position3& x_drone_true,
                                const Position3& beam_direction, double t_s,
                                std::mt19937_64& rng, bool sun_in_frame = false);

}  // namespace opgt
