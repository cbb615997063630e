#include "opgt/geo.hpp"

#include <cmath>
#include <numbers>

#include "opgt/error.hpp"

namespace opgt {
namespace {

constexpr double kPi = std::numbers::pi;

// WGS-84
constexpr double kSemiMajor = 6378137.0;
constexpr double kFlattening = 1.0 / 298.257223563;
constexpr double kE2 = kFlattening * (2.0 - kFlattening);
constexpr double kN = kFlattening / (2.0 - kFlattening);
constexpr double kScale = 0.9996;
constexpr double kFalseEasting = 500000.0;
constexpr double kFalseNorthing = 10000000.0;
constexpr double kUtmLatLimitDeg = 84.0;

constexpr double pow2(double x) { return x * x; }
constexpr double pow3(double x) { return x * x * x; }

// Rectifying radius: A = a/(1+n) (1 + n^2/4 + n^4/64 + n^6/256).
constexpr double kRectifyingRadius =
    kSemiMajor / (1.0 + kN) *
    (1.0 + pow2(kN) / 4.0 + pow2(pow2(kN)) / 64.0 + pow2(pow3(kN)) / 256.0);

// Krueger series coefficients to n^6 (conformal -> rectifying and back).
struct KruegerCoefficients {
  double alpha[6];
  double beta[6];
};

constexpr KruegerCoefficients kruegerCoefficients() {
  const double n1 = kN, n2 = n1 * n1, n3 = n2 * n1, n4 = n3 * n1, n5 = n4 * n1,
               n6 = n5 * n1;
  KruegerCoefficients c{};
  c.alpha[0] = n1 / 2 - 2 * n2 / 3 + 5 * n3 / 16 + 41 * n4 / 180 -
               127 * n5 / 288 + 7891 * n6 / 37800;
  c.alpha[1] = 13 * n2 / 48 - 3 * n3 / 5 + 557 * n4 / 1440 + 281 * n5 / 630 -
               1983433 * n6 / 1935360;
  c.alpha[2] = 61 * n3 / 240 - 103 * n4 / 140 + 15061 * n5 / 26880 +
               167603 * n6 / 181440;
  c.alpha[3] = 49561 * n4 / 161280 - 179 * n5 / 168 + 6601661 * n6 / 7257600;
  c.alpha[4] = 34729 * n5 / 80640 - 3418889 * n6 / 1995840;
  c.alpha[5] = 212378941 * n6 / 319334400;
  c.beta[0] = n1 / 2 - 2 * n2 / 3 + 37 * n3 / 96 - n4 / 360 - 81 * n5 / 512 +
              96199 * n6 / 604800;
  c.beta[1] = n2 / 48 + n3 / 15 - 437 * n4 / 1440 + 46 * n5 / 105 -
              1118711 * n6 / 3870720;
  c.beta[2] = 17 * n3 / 480 - 37 * n4 / 840 - 209 * n5 / 4480 + 5569 * n6 / 90720;
  c.beta[3] = 4397 * n4 / 161280 - 11 * n5 / 504 - 830251 * n6 / 7257600;
  c.beta[4] = 4583 * n5 / 161280 - 108847 * n6 / 3991680;
  c.beta[5] = 20648693 * n6 / 638668800;
  return c;
}

const KruegerCoefficients kCoef = kruegerCoefficients();

double normalizeLongitude(double lon_deg) {
  double x = std::fmod(lon_deg + 180.0, 360.0);
  if (x < 0) x += 360.0;
  return x - 180.0;
}

int zoneFromLongitude(double lon_deg) {
  int zone = static_cast<int>(std::floor((normalizeLongitude(lon_deg) + 180.0) / 6.0)) + 1;
  return std::min(zone, 60);
}

double centralMeridianDeg(int zone) { return zone * 6.0 - 183.0; }

// tau' = tan(conformal latitude) as a function of tau = tan(latitude).
double tauPrime(double tau) {
  const double e = std::sqrt(kE2);
  const double sigma = std::sinh(e * std::atanh(e * tau / std::hypot(1.0, tau)));
  return tau * std::hypot(1.0, sigma) - sigma * std::hypot(1.0, tau);
}

// Inverts tauPrime by Newton iteration.
double tauFromTauPrime(double taup) {
  const double e2m = 1.0 - kE2;
  double tau = taup / e2m;
  for (int i = 0; i < 8; ++i) {
    const double tp = tauPrime(tau);
    // d tau'/d tau = (1-e^2) sqrt(1+tau'^2) sqrt(1+tau^2) / (1 + (1-e^2) tau^2)
    const double dtp = e2m * std::hypot(1.0, tp) * std::hypot(1.0, tau) /
                       (1.0 + e2m * tau * tau);
    const double step = (taup - tp) / dtp;
    tau += step;
    if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(tau))) break;
  }
  return tau;
}

}  // namespace

double wrap_angle(double rad) {
  double x = std::fmod(rad, 2.0 * kPi);
  if (x <= -kPi) x += 2.0 * kPi;
  if (x > kPi) x -= 2.0 * kPi;
  return x;
}

UtmPosition geodetic_to_utm(const GeodeticPosition& g, int forced_zone) {
  if (!(std::abs(g.latitude_deg) <= kUtmLatLimitDeg)) {
    throw DomainError("geodetic_to_utm: latitude outside the UTM band (|lat| <= 84 deg)");
  }
  const int zone =
      (forced_zone >= 1 && forced_zone <= 60) ? forced_zone : zoneFromLongitude(g.longitude_deg);
  const double lam =
      (normalizeLongitude(g.longitude_deg) - centralMeridianDeg(zone)) * kPi / 180.0;
  const double phi = g.latitude_deg * kPi / 180.0;

  const double taup = tauPrime(std::tan(phi));
  const double xi_p = std::atan2(taup, std::cos(lam));
  const double eta_p = std::asinh(std::sin(lam) / std::hypot(taup, std::cos(lam)));

  double xi = xi_p;
  double eta = eta_p;
  for (int j = 1; j <= 6; ++j) {
    xi += kCoef.alpha[j - 1] * std::sin(2 * j * xi_p) * std::cosh(2 * j * eta_p);
    eta += kCoef.alpha[j - 1] * std::cos(2 * j * xi_p) * std::sinh(2 * j * eta_p);
  }

  UtmPosition u;
  u.zone = zone;
  u.north = g.latitude_deg >= 0.0;
  u.easting_m = kScale * kRectifyingRadius * eta + kFalseEasting;
  u.northing_m = kScale * kRectifyingRadius * xi + (u.north ? 0.0 : kFalseNorthing);
  u.altitude_m = g.altitude_m;
  return u;
}

GeodeticPosition utm_to_geodetic(const UtmPosition& u) {
  if (u.zone < 1 || u.zone > 60) {
    throw DomainError("utm_to_geodetic: zone must be in 1..60");
  }
  const double xi =
      (u.northing_m - (u.north ? 0.0 : kFalseNorthing)) / (kScale * kRectifyingRadius);
  const double eta = (u.easting_m - kFalseEasting) / (kScale * kRectifyingRadius);

  double xi_p = xi;
  double eta_p = eta;
  for (int j = 1; j <= 6; ++j) {
    xi_p -= kCoef.beta[j - 1] * std::sin(2 * j * xi) * std::cosh(2 * j * eta);
    eta_p -= kCoef.beta[j - 1] * std::cos(2 * j * xi) * std::sinh(2 * j * eta);
  }

  const double taup = std::sin(xi_p) / std::hypot(std::sinh(eta_p), std::cos(xi_p));
  const double lam = std::atan2(std::sinh(eta_p), std::cos(xi_p));
  const double tau = tauFromTauPrime(taup);

  GeodeticPosition g;
  g.latitude_deg = std::atan(tau) * 180.0 / kPi;
  g.longitude_deg = normalizeLongitude(centralMeridianDeg(u.zone) + lam * 180.0 / kPi);
  g.altitude_m = u.altitude_m;
  return g;
}

NormalizedOffset normalized_offset(const PixelPoint& p, const FrameGeometry& fg) {
  return {(p.x1 - fg.center.x1) / fg.res_x1, (p.x2 - fg.center.x2) / fg.res_x2};
}

MisalignmentAngles misalignment_from_offset(const NormalizedOffset& w,
                                            const CameraIntrinsics& c) {
  return {std::atan(2.0 * w.w1 * std::tan(0.5 * c.hfov_rad)),
          std::atan(2.0 * w.w2 * std::tan(0.5 * c.vfov_rad))};
}

NormalizedOffset offset_from_misalignment(const MisalignmentAngles& a,
                                          const CameraIntrinsics& c) {
  return {std::tan(a.d_phi_rad) / (2.0 * std::tan(0.5 * c.hfov_rad)),
          std::tan(a.d_theta_rad) / (2.0 * std::tan(0.5 * c.vfov_rad))};
}

double azimuth_of(const Position3& v) { return std::atan2(v.x(), v.y()); }

double elevation_of(const Position3& v) {
  return std::atan2(v.z(), std::hypot(v.x(), v.y()));
}

Position3 direction_from(double azimuth_rad, double elevation_rad) {
  const double c = std::cos(elevation_rad);
  return {c * std::sin(azimuth_rad), c * std::cos(azimuth_rad), std::sin(elevation_rad)};
}

MisalignmentAngles misalignment_from_positions(const Position3& station,
                                               double mount_heading_rad,
                                               const PtuPose& pose,
                                               const Position3& target) {
  const Position3 rel = target - station;
  if (rel.squaredNorm() == 0.0) {
    throw DomainError("misalignment_from_positions: target coincides with station");
  }
  const double d_phi = wrap_angle(azimuth_of(rel) - (mount_heading_rad + pose.pan_rad));
  const double d_theta = elevation_of(rel) - pose.tilt_rad;
  return {d_phi, d_theta};
}

double euclidean_distance(const Position3& a, const Position3& b) {
  return (a - b).norm();
}

Position3 utm_to_enu(const UtmPosition& p, const UtmPosition& anchor) {
  if (p.zone != anchor.zone || p.north != anchor.north) {
    throw DomainError("utm_to_enu: positions must share a UTM zone and hemisphere");
  }
  return {p.easting_m - anchor.easting_m, p.northing_m - anchor.northing_m,
          p.altitude_m - anchor.altitude_m};
}

UtmPosition enu_to_utm(const Position3& enu, const UtmPosition& anchor) {
  UtmPosition u = anchor;
  u.easting_m += enu.x();
  u.northing_m += enu.y();
  u.altitude_m += enu.z();
  return u;
}

}  // namespace opgt
