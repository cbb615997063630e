#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "opgt/error.hpp"
#include "opgt/gas.hpp"

using namespace opgt;

namespace {
constexpr double kPi = std::numbers::pi;

// Independent re-evaluation of the plume closed form, written from the
// textbook expression rather than the production code path.
double plume_oracle_ppm(const GaussianPlumeField& p, const Position3& x) {
  const double u = std::hypot(p.wind_mps.x(), p.wind_mps.y());
  const double wx = p.wind_mps.x() / u, wy = p.wind_mps.y() / u;
  const double dx = x.x() - p.source.x(), dy = x.y() - p.source.y();
  const double downwind = dx * wx + dy * wy;
  if (downwind <= 0.0) return 0.0;
  const double crosswind = -dx * wy + dy * wx;
  const double sy = p.sigma_y.coeff * std::pow(downwind, p.sigma_y.exponent);
  const double sz = p.sigma_z.coeff * std::pow(downwind, p.sigma_z.exponent);
  const double q = p.emission_l_min / 1000.0 / 60.0;  // m^3/s
  const double z = x.z() - p.ground_z_m;
  const double h = p.source.z() - p.ground_z_m;
  const double c = q / (2.0 * kPi * u * sy * sz) *
                   std::exp(-crosswind * crosswind / (2.0 * sy * sy)) *
                   (std::exp(-(z - h) * (z - h) / (2.0 * sz * sz)) +
                    std::exp(-(z + h) * (z + h) / (2.0 * sz * sz)));
  return c * 1e6;
}

// Brute-force composite midpoint rule along the beam.
double midpoint_beam_integral(const GasField& f, const Position3& a,
                              const Position3& b, double t, long n) {
  const Position3 span = b - a;
  double sum = 0.0;
  for (long i = 0; i < n; ++i) {
    const double s = (i + 0.5) / static_cast<double>(n);
    sum += f.concentration_ppm(a + s * span, t);
  }
  return span.norm() * sum / static_cast<double>(n);
}

GaussianPlumeField test_plume() {
  GaussianPlumeField p;
  p.source = {0.0, -16.0, 0.0};
  p.emission_l_min = 25.0;
  p.wind_mps = {0.6, -1.2, 0.0};
  p.ground_z_m = -1.5;
  return p;
}
}  // namespace

TEST_CASE("uniform field is constant") {
  const UniformField f(400.0);
  CHECK(f.concentration_ppm({0, 0, 0}, 0.0) == 400.0);
  CHECK(f.concentration_ppm({123.0, -55.0, 7.0}, 99.0) == 400.0);
}

TEST_CASE("plume closed form") {
  const GaussianPlumeField p = test_plume();

  SUBCASE("far crosswind is effectively zero") {
    // 500 m crosswind of the axis
    const Eigen::Vector2d w = Eigen::Vector2d(0.6, -1.2).normalized();
    const Eigen::Vector2d cross(-w.y(), w.x());
    const Position3 x(p.source.x() + 10.0 * w.x() + 500.0 * cross.x(),
                      p.source.y() + 10.0 * w.y() + 500.0 * cross.y(), 0.0);
    CHECK(p.concentration_ppm(x, 0.0) <= 1e-6);
  }

  SUBCASE("upwind is exactly zero") {
    const Position3 x = p.source + Position3(-0.6, 1.2, 0.0);
    CHECK(p.concentration_ppm(x, 0.0) == 0.0);
  }

  SUBCASE("matches an independent re-implementation on a grid") {
    for (double e = -20.0; e <= 20.0; e += 4.0) {
      for (double n = -45.0; n <= -5.0; n += 4.0) {
        for (double up : {-1.0, 0.0, 1.5, 4.0}) {
          const Position3 x(e, n, up);
          const double ours = p.concentration_ppm(x, 0.0);
          const double ref = plume_oracle_ppm(p, x);
          if (ref > 0.0) {
            CHECK(ours == doctest::Approx(ref).epsilon(1e-9));
          } else {
            CHECK(ours == 0.0);
          }
        }
      }
    }
  }

  SUBCASE("zero wind is out of domain") {
    GaussianPlumeField dead = p;
    dead.wind_mps = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(dead.concentration_ppm({1.0, -20.0, 0.0}, 0.0), DomainError);
  }

  SUBCASE("nonnegative everywhere") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> c(-60.0, 60.0);
    for (int i = 0; i < 2000; ++i) {
      const double v = p.concentration_ppm({c(rng), c(rng), std::abs(c(rng)) / 10}, 0.0);
      CHECK(v >= 0.0);
      CHECK(std::isfinite(v));
    }
  }
}

TEST_CASE("plume mass flux through a crosswind plane recovers the emission rate") {
  const GaussianPlumeField p = test_plume();
  const double u = std::hypot(p.wind_mps.x(), p.wind_mps.y());
  const Eigen::Vector2d w = Eigen::Vector2d(p.wind_mps.x(), p.wind_mps.y()) / u;
  const Eigen::Vector2d cross(-w.y(), w.x());

  const double xi = 20.0;  // downwind distance of the flux plane
  const double sy = p.sigma_y.coeff * std::pow(xi, p.sigma_y.exponent);
  const double sz = p.sigma_z.coeff * std::pow(xi, p.sigma_z.exponent);

  const int ny = 600, nz = 600;
  const double y_lo = -9.0 * sy, y_hi = 9.0 * sy;
  const double z_lo = p.ground_z_m;
  const double z_hi = p.source.z() + 9.0 * sz;
  const double dy = (y_hi - y_lo) / ny, dz = (z_hi - z_lo) / nz;
  double flux = 0.0;
  for (int iy = 0; iy < ny; ++iy) {
    const double y = y_lo + (iy + 0.5) * dy;
    for (int iz = 0; iz < nz; ++iz) {
      const double z = z_lo + (iz + 0.5) * dz;
      const Position3 x(p.source.x() + xi * w.x() + y * cross.x(),
                        p.source.y() + xi * w.y() + y * cross.y(), z);
      flux += p.concentration_ppm(x, 0.0) * 1e-6 * u * dy * dz;
    }
  }
  const double q = p.emission_l_min / 60000.0;
  CHECK(flux == doctest::Approx(q).epsilon(0.02));
}

TEST_CASE("beam_integral") {
  SUBCASE("uniform 400 ppm over 50 m is exactly 20000 ppm m") {
    const UniformField f(400.0);
    const double m = beam_integral(f, {0, 0, 0}, {30, 40, 0}, 0.0);
    CHECK(m == doctest::Approx(20000.0).epsilon(1e-9));
  }

  SUBCASE("zero field integrates to zero") {
    const UniformField f(0.0);
    CHECK(beam_integral(f, {0, 0, 0}, {10, 0, 0}, 0.0) == 0.0);
  }

  SUBCASE("coincident endpoints are degenerate") {
    const UniformField f(400.0);
    CHECK_THROWS_AS(beam_integral(f, {1, 2, 3}, {1, 2, 3}, 0.0), DomainError);
  }

  SUBCASE("plume crossing matches a 1e6-sample midpoint oracle") {
    const GaussianPlumeField p = test_plume();
    const Position3 tdlas(0.0, 0.0, -0.1);
    for (const Position3 drone :
         {Position3{6.0, -46.0, 0.5}, Position3{12.0, -46.0, 2.0},
          Position3{-4.0, -46.0, 1.0}}) {
      const double ours = beam_integral(p, tdlas, drone, 0.0);
      const double ref = midpoint_beam_integral(p, tdlas, drone, 0.0, 1000000);
      CHECK(ours == doctest::Approx(ref).epsilon(1e-6));
    }
  }

  SUBCASE("symmetric under endpoint swap and additive under splitting") {
    const GaussianPlumeField p = test_plume();
    const Position3 a(0.0, 0.0, -0.1), b(8.0, -46.0, 1.2);
    const double whole = beam_integral(p, a, b, 0.0);
    CHECK(beam_integral(p, b, a, 0.0) == doctest::Approx(whole).epsilon(1e-7));
    for (double split : {0.25, 0.5, 0.8}) {
      const Position3 mid = a + split * (b - a);
      const double parts = beam_integral(p, a, mid, 0.0) + beam_integral(p, mid, b, 0.0);
      CHECK(parts == doctest::Approx(whole).epsilon(1e-7));
    }
  }

  SUBCASE("bounded fields give bounded integrals") {
    const UniformField f(321.0);
    const double d = 37.5;
    const double m = beam_integral(f, {0, 0, 0}, {0, d, 0}, 0.0);
    CHECK(m >= 0.0);
    CHECK(m <= 321.0 * d * (1.0 + 1e-12));
  }
}

TEST_CASE("link_budget") {
  const SensorModel s;

  SUBCASE("perfect alignment at max range sits at the validity boundary") {
    const double at_max = link_budget(s.max_range_m, 0.0, s);
    CHECK(at_max > 0.0);
    const double beyond = link_budget(s.max_range_m + 0.1, 0.0, s);
    CHECK(beyond < at_max);
  }

  SUBCASE("complete geometric miss gives zero") {
    const double d = 20.0;
    const double miss = s.reflector_radius_m + d * s.beam_divergence_rad + 0.01;
    CHECK(link_budget(d, miss, s) == 0.0);
  }

  SUBCASE("strictly decreasing in distance at zero miss over 5..100 m") {
    double prev = 2.0;
    for (int d = 5; d <= 100; ++d) {
      const double v = link_budget(d, 0.0, s);
      CHECK(v < prev);
      CHECK(v > 0.0);
      prev = v;
    }
  }

  SUBCASE("nonpositive distance rejected") {
    CHECK_THROWS_AS(link_budget(0.0, 0.0, s), DomainError);
  }
}

TEST_CASE("tdlas_measure") {
  SensorModel s;
  s.noise_sd_ppm_m = 0.0;
  const UniformField f(400.0);
  const Position3 tdlas(0.0, 0.0, 0.0);
  std::mt19937_64 rng(1);

  SUBCASE("aligned at 30 m in a uniform field: OK, ~12000 ppm m") {
    const Position3 drone(0.0, 30.0, 0.0);
    const MeasurementRecord rec =
        tdlas_measure(s, f, tdlas, drone, {0.0, 1.0, 0.0}, 5.0, rng);
    CHECK(rec.status == StatusCode::Ok);
    CHECK(rec.m_ppm_m == doctest::Approx(12000.0).epsilon(1e-9));
    CHECK(rec.t_s == 5.0);
    CHECK(rec.signal_strength > 0.0);
  }

  SUBCASE("beyond max range: ERROR_NO_SIGNAL with no usable value") {
    const Position3 drone(0.0, 70.0, 0.0);
    const MeasurementRecord rec =
        tdlas_measure(s, f, tdlas, drone, {0.0, 1.0, 0.0}, 0.0, rng);
    CHECK(rec.status == StatusCode::ErrorNoSignal);
    CHECK(std::isnan(rec.m_ppm_m));
  }

  SUBCASE("footprint misses the reflector: ERROR_NO_SIGNAL") {
    const Position3 drone(0.0, 20.0, 0.0);
    // point the beam well off target
    const Position3 beam = direction_from(0.2, 0.0);
    const MeasurementRecord rec = tdlas_measure(s, f, tdlas, drone, beam, 0.0, rng);
    CHECK(rec.status == StatusCode::ErrorNoSignal);
    CHECK(rec.signal_strength == 0.0);
  }

  SUBCASE("close range: WARN_HIGH_TRANSMISSION") {
    const Position3 drone(0.0, 3.0, 0.0);
    const MeasurementRecord rec =
        tdlas_measure(s, f, tdlas, drone, {0.0, 1.0, 0.0}, 0.0, rng);
    CHECK(rec.status == StatusCode::WarnHighTransmission);
    CHECK(rec.m_ppm_m == doctest::Approx(1200.0).epsilon(1e-9));
  }

  SUBCASE("long range inside the cutoff: WARN_LOW_SIGNAL") {
    const Position3 drone(0.0, 55.0, 0.0);
    const MeasurementRecord rec =
        tdlas_measure(s, f, tdlas, drone, {0.0, 1.0, 0.0}, 0.0, rng);
    CHECK(rec.status == StatusCode::WarnLowSignal);
    CHECK(status_is_valid(rec.status));
  }

  SUBCASE("sun in frame: ERROR_LIGHT_POLLUTION") {
    const Position3 drone(0.0, 30.0, 0.0);
    const MeasurementRecord rec =
        tdlas_measure(s, f, tdlas, drone, {0.0, 1.0, 0.0}, 0.0, rng, true);
    CHECK(rec.status == StatusCode::ErrorLightPollution);
    CHECK(std::isnan(rec.m_ppm_m));
  }

  SUBCASE("deterministic for a fixed seed, with and without noise") {
    SensorModel noisy = s;
    noisy.noise_sd_ppm_m = 40.0;
    const Position3 drone(0.0, 30.0, 0.0);
    std::mt19937_64 rng_a(4242);
    std::mt19937_64 rng_b(4242);
    const MeasurementRecord a =
        tdlas_measure(noisy, f, tdlas, drone, {0.0, 1.0, 0.0}, 0.0, rng_a);
    const MeasurementRecord b =
        tdlas_measure(noisy, f, tdlas, drone, {0.0, 1.0, 0.0}, 0.0, rng_b);
    CHECK(a.m_ppm_m == b.m_ppm_m);
    CHECK(a.m_ppm_m >= 0.0);
  }

  SUBCASE("the OK region is connected in distance at perfect alignment") {
    int transitions = 0;
    bool prev_ok = false;
    for (double d = 1.0; d <= 80.0; d += 0.25) {
      const Position3 drone(0.0, d, 0.0);
      const MeasurementRecord rec =
          tdlas_measure(s, f, tdlas, drone, {0.0, 1.0, 0.0}, 0.0, rng);
      const bool ok = rec.status == StatusCode::Ok;
      if (ok != prev_ok) ++transitions;
      prev_ok = ok;
    }
    CHECK(transitions == 2);  // one rise into OK, one fall out of it
  }
}

TEST_CASE("status names round-trip") {
  for (StatusCode s : {StatusCode::Ok, StatusCode::WarnLowSignal,
                       StatusCode::WarnHighTransmission, StatusCode::ErrorNoSignal,
                       StatusCode::ErrorLightPollution}) {
    CHECK(status_from_name(status_name(s)) == s);
  }
  CHECK_THROWS_AS(status_from_name("BOGUS"), SchemaError);
}
