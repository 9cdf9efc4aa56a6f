#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "toa/distributions.hpp"
#include "toa/oscillatory.hpp"

using namespace toa;

// Frozen oracles (tests/oracles/oracles.py, adaptive quadrature), m = 1.
constexpr double kArgmaxG5 = 1.9610578980318423;   // argmax |A_+|^2, g(5, 0.5, 0), x0 = 10
constexpr double kDensityG5At2 = 1.4069541652754045;  // P(t = 2), same state
constexpr double kDensityG3At1 = 0.5854674850957092;  // P(t = 1), g(3, 0.3, 2), x0 = 4
constexpr double kDensityG0At03 = 0.3028332786330114;  // P(t = 0.3), g(0, 1, 0), x0 = 0

TEST_CASE("chirp transform matches the naive sum") {
  std::vector<Complex> a(37);
  for (std::size_t n = 0; n < a.size(); ++n) a[n] = Complex(std::cos(0.3 * n), std::sin(1.1 * n) - 0.2);
  const double alpha = 0.0123;
  const auto fast = chirp_z(a, alpha, 53);
  for (std::size_t k = 0; k < 53; ++k) {
    Complex ref;
    for (std::size_t n = 0; n < a.size(); ++n) ref += a[n] * std::polar(1.0, -alpha * double(n) * double(k));
    CHECK(std::abs(fast[k] - ref) < 1e-12);
  }
}

TEST_CASE("phase sweep matches the naive sum") {
  const std::size_t J = 50, K = 300;
  std::vector<Complex> c(J);
  std::vector<double> phi(J), theta(J);
  for (std::size_t j = 0; j < J; ++j) {
    c[j] = Complex(1.0 / (1.0 + j), 0.1 * j);
    phi[j] = 0.7 * j;
    theta[j] = 0.013 * j * j;
  }
  const auto s = phase_sweep(c, phi, theta, K);
  double worst = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    Complex ref;
    for (std::size_t j = 0; j < J; ++j) ref += c[j] * std::polar(1.0, phi[j] + double(k) * theta[j]);
    worst = std::max(worst, std::abs(s[k] - ref));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("symmetric state at the origin") {
  const PhysicalState s = lift(gaussian(0.0, 1.0, 0.0), 1.0, MomentumGrid(-8.0, 8.0, 2049));
  const TimeGrid tg(-2.0, 2.0, 401);
  const auto plus = toa_amplitude_batch(s, Sector::plus, 0.0, tg, QuadratureMethod::direct_trapezoid);
  const auto minus = toa_amplitude_batch(s, Sector::minus, 0.0, tg, QuadratureMethod::direct_trapezoid);
  double sym = 0.0, conj = 0.0;
  for (std::size_t k = 0; k < tg.size(); ++k) {
    sym = std::max(sym, std::abs(plus[k] - minus[k]));
    conj = std::max(conj, std::abs(plus[tg.size() - 1 - k] - std::conj(plus[k])));
  }
  CHECK(sym < 1e-12);
  CHECK(conj < 1e-10);
}

TEST_CASE("amplitude peak and values against the oracle") {
  const PhysicalState s = lift(gaussian(5.0, 0.5, 0.0), 1.0, MomentumGrid(-5.0, 15.0, 4096));
  const TimeGrid tg(0.0, 4.0, 2049);
  for (auto method : {QuadratureMethod::direct_trapezoid, QuadratureMethod::energy_transform}) {
    const TimeDensity d = relational_toa(s, 10.0, tg, method);
    CHECK(peak_time(tg, d.plus) == doctest::Approx(kArgmaxG5).epsilon(tg.spacing()));
    CHECK(d.total[1024] == doctest::Approx(kDensityG5At2).epsilon(1e-9));
  }
  const PhysicalState b = lift(gaussian(3.0, 0.3, 2.0), 1.0, MomentumGrid(-3.0, 9.0, 4096));
  const TimeGrid tb(0.0, 2.0, 257);
  CHECK(relational_toa(b, 4.0, tb).total[128] == doctest::Approx(kDensityG3At1).epsilon(1e-9));
}

TEST_CASE("mass at the origin: energy transform is the accurate path") {
  const PhysicalState s = lift(gaussian(0.0, 1.0, 0.0), 1.0, MomentumGrid(-8.0, 8.0, 4096));
  const TimeGrid tg(0.0, 0.6, 3);
  const double direct = relational_toa(s, 0.0, tg).total[1];
  const double energy = relational_toa(s, 0.0, tg, QuadratureMethod::energy_transform).total[1];
  CHECK(direct == doctest::Approx(kDensityG0At03).epsilon(1e-4));
  CHECK(energy == doctest::Approx(kDensityG0At03).epsilon(1e-6));
}

TEST_CASE("method crosscheck on the suite") {
  const TimeGrid tg(-6.0, 6.0, 1024);
  const PhysicalState states[] = {
      lift(gaussian(5.0, 0.5, 0.0), 1.0, MomentumGrid(1.0, 9.0, 2048)),
      lift(gaussian(3.0, 0.3, 2.0), 1.0, MomentumGrid(0.6, 5.4, 2048)),
      lift(gaussian(-4.0, 0.45, 1.0), 1.0, MomentumGrid(-7.6, -0.4, 2048))};
  for (const auto& s : states) {
    for (double x0 : {-3.0, 4.0, 10.0}) {
      for (Sector sg : kSectors) CHECK(method_crosscheck(s, sg, x0, tg) < 1e-6);
    }
  }
  CHECK(method_crosscheck(states[0], Sector::minus, 4.0, tg) == 0.0);
}

TEST_CASE("under-resolved grids are rejected") {
  const PhysicalState s = lift(gaussian(5.0, 0.5, 0.0), 1.0, MomentumGrid(-5.0, 15.0, 64));
  const TimeGrid tg(0.0, 4.0, 64);
  CHECK_FALSE(phase_resolution(s, Sector::plus, 10.0, tg).ok());
  CHECK_THROWS_AS(relational_toa(s, 10.0, tg), ResolutionError);
  try {
    method_crosscheck(s, Sector::plus, 10.0, tg);
    FAIL("expected a resolution error");
  } catch (const ResolutionError& e) {
    CHECK(e.guard() == "phase_resolution");
  }
}

TEST_CASE("results do not depend on the thread count") {
  const PhysicalState s = lift(gaussian(1.0, 0.8, 0.0), 1.0, MomentumGrid(-8.0, 8.0, 2048));
  const TimeGrid tg(-3.0, 3.0, 1500);
  ::setenv("TOA_THREADS", "1", 1);
  const auto a = relational_toa(s, 1.0, tg).total;
  const auto ea = relational_toa(s, 1.0, tg, QuadratureMethod::energy_transform).total;
  ::setenv("TOA_THREADS", "3", 1);
  const auto b = relational_toa(s, 1.0, tg).total;
  const auto eb = relational_toa(s, 1.0, tg, QuadratureMethod::energy_transform).total;
  ::unsetenv("TOA_THREADS");
  CHECK(a == b);
  CHECK(ea == eb);
}

TEST_CASE("quadrature names") {
  CHECK(std::string(to_string(QuadratureMethod::energy_transform)) == "energy-transform");
  CHECK(parse_quadrature("direct-trapezoid") == QuadratureMethod::direct_trapezoid);
  CHECK_FALSE(parse_quadrature("simpson").has_value());
  CHECK_THROWS_AS(TimeGrid(1.0, 0.0, 10), InvalidParameter);
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 1), InvalidParameter);
}
