#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "toa/errors.hpp"
#include "toa/physical_state.hpp"

using namespace toa;

// Frozen oracle (tests/oracles/oracles.py): Gaussian tail probabilities.
constexpr double kMinusWeightG1 = 3.167124183311998e-05;  // g(1, 0.25): P(p < 0)

TEST_CASE("sector weights follow the momentum sign") {
  const PhysicalState s = lift(gaussian(1.0, 0.25, 0.0), 1.0, MomentumGrid(-1.0, 3.0, 4097));
  CHECK(s.weight(Sector::minus) == doctest::Approx(kMinusWeightG1).epsilon(1e-6));
  CHECK(s.sector_weights().total() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sector rules partition the full-line trapezoid for either parity") {
  for (std::size_t n : {1024u, 1025u}) {
    const MomentumGrid grid(-8.0, 8.0, n);
    const auto psi = gaussian(0.3, 1.0, 0.7);
    const PhysicalState s = PhysicalState::unnormalized(psi, 1.0, grid);
    CHECK(s.sector_weights().total() == doctest::Approx(norm_squared(psi, grid)).epsilon(1e-14));
    CHECK(s.samples(Sector::plus).has_origin == (n % 2 == 1));
    CHECK(s.samples(Sector::plus).reaches_origin);
  }
}

TEST_CASE("one-sided grids leave the other sector empty") {
  const PhysicalState s = lift(gaussian(5.0, 0.5, 0.0), 1.0, MomentumGrid(1.0, 9.0, 256));
  CHECK(s.samples(Sector::minus).empty());
  CHECK_FALSE(s.samples(Sector::plus).reaches_origin);
  CHECK(s.weight(Sector::minus) == 0.0);
}

TEST_CASE("lift normalizes and records the factor") {
  const auto psi = gaussian(0.0, 1.0, 0.0).scaled(3.0);
  const PhysicalState s = lift(psi, 2.0, MomentumGrid(-8.0, 8.0, 1024));
  CHECK(s.sector_weights().total() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.normalization_factor() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(s.renormalized());
  CHECK_FALSE(lift(gaussian(0.0, 1.0, 0.0), 1.0, MomentumGrid(-8.0, 8.0, 1024)).renormalized());
}

TEST_CASE("lift rejects zero norm and bad mass") {
  const MomentumGrid grid(-1.0, 1.0, 64);
  CHECK_THROWS_AS(lift(gaussian(0.0, 1.0, 0.0).scaled(0.0), 1.0, grid), InvalidState);
  CHECK_THROWS_AS(lift(gaussian(0.0, 1.0, 0.0), -1.0, grid), InvalidParameter);
}

TEST_CASE("inner product is sector-wise and checks compatibility") {
  const MomentumGrid grid(-8.0, 8.0, 2048);
  const PhysicalState a = lift(gaussian(2.0, 0.6, 0.0), 1.0, grid);
  const PhysicalState b = lift(gaussian(-2.0, 0.6, 1.0), 1.0, grid);
  CHECK(physical_inner_product(a, a).real() == doctest::Approx(1.0).epsilon(1e-14));
  const Complex ab = physical_inner_product(a, b), ba = physical_inner_product(b, a);
  CHECK(std::abs(ab - std::conj(ba)) < 1e-15);
  CHECK_THROWS_AS(physical_inner_product(a, lift(gaussian(2.0, 0.6, 0.0), 2.0, grid)), IncompatibleStates);
  CHECK_THROWS_AS(physical_inner_product(a, lift(gaussian(2.0, 0.6, 0.0), 1.0, MomentumGrid(-8.0, 8.0, 1024))),
                  IncompatibleStates);
}

TEST_CASE("sector projection and phases") {
  const MomentumGrid grid(-8.0, 8.0, 2048);
  const PhysicalState s = lift(superpose({{std::sqrt(0.5), gaussian(3.0, 0.5, 0.0)},
                                          {std::sqrt(0.5), gaussian(-3.0, 0.5, 0.0)}}),
                               1.0, grid);
  const PhysicalState p = sector_project(s, Sector::plus);
  CHECK(p.weight(Sector::minus) == 0.0);
  CHECK(p.weight(Sector::plus) == doctest::Approx(s.weight(Sector::plus)).epsilon(1e-14));
  const PhysicalState r = apply_sector_phase(s, Sector::minus, std::numbers::pi);
  CHECK(r.weight(Sector::minus) == doctest::Approx(s.weight(Sector::minus)).epsilon(1e-14));
  CHECK(r.weight(Sector::plus) == s.weight(Sector::plus));
  CHECK(std::abs(physical_inner_product(s, r) - Complex(s.weight(Sector::plus) - s.weight(Sector::minus))) < 1e-12);
}
