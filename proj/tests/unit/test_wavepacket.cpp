#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "toa/errors.hpp"
#include "toa/wavepacket.hpp"

using namespace toa;

TEST_CASE("gaussian convention and norm") {
  const auto psi = gaussian(5.0, 0.5, 2.0);
  const double amp = std::pow(2.0 * std::numbers::pi * 0.25, -0.25);
  CHECK(std::abs(evaluate(psi, 5.0) - Complex(amp) * std::polar(1.0, -10.0)) < 1e-15);
  CHECK(std::abs(evaluate(psi, 6.0)) == doctest::Approx(amp * std::exp(-1.0)).epsilon(1e-14));
  CHECK(norm_squared(psi, MomentumGrid::covering(5.0, 0.5, 1024)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(gaussian(0.0, 0.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(gaussian(0.0, -1.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(MomentumGrid(0.0, 1.0, 8), InvalidParameter);
  CHECK_THROWS_AS(MomentumGrid(1.0, 1.0, 64), InvalidParameter);
  CHECK_THROWS_AS(time_evolve(gaussian(0.0, 1.0, 0.0), 1.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(superpose({}), InvalidParameter);
}

TEST_CASE("mirrored grids are bitwise negations") {
  const MomentumGrid a(-5.0, 15.0, 4096), b(-15.0, 5.0, 4096);
  for (std::size_t k = 0; k < a.size(); ++k) REQUIRE(b.node(a.size() - 1 - k) == -a.node(k));
  const MomentumGrid odd(-8.0, 8.0, 1025);
  CHECK(odd.node(512) == 0.0);
  CHECK(odd.node(0) == -8.0);
  CHECK(odd.node(1024) == 8.0);
}

TEST_CASE("translation and evolution are unitary phases") {
  const auto psi = gaussian(1.0, 0.7, 0.0);
  const MomentumGrid grid = MomentumGrid::covering(1.0, 0.7, 2048);
  const double n0 = norm_squared(psi, grid);
  CHECK(norm_squared(translate(psi, 3.7), grid) == doctest::Approx(n0).epsilon(1e-14));
  CHECK(norm_squared(time_evolve(psi, 2.5, 1.3), grid) == doctest::Approx(n0).epsilon(1e-14));
  const double p = 1.3;
  CHECK(std::abs(evaluate(translate(psi, 2.0), p) - std::polar(1.0, -2.0 * p) * evaluate(psi, p)) < 1e-15);
  CHECK(std::abs(evaluate(time_evolve(psi, 2.0, 1.0), p) - std::polar(1.0, -p * p) * evaluate(psi, p)) < 1e-15);
}

TEST_CASE("translated gaussian stays analytic") {
  const auto psi = translate(gaussian(2.0, 0.4, 1.0), 0.5);
  const auto ref = gaussian(2.0, 0.4, 1.5);
  for (double p : {0.3, 2.0, 3.1}) CHECK(std::abs(evaluate(psi, p) - evaluate(ref, p)) < 1e-14);
}

TEST_CASE("tabulated interpolation and domain") {
  const MomentumGrid grid(-1.0, 1.0, 17);
  std::vector<Complex> v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = Complex(grid.node(k), 1.0);
  const auto tab = tabulated(grid, v);
  CHECK(std::abs(evaluate(tab, 0.0625) - Complex(0.0625, 1.0)) < 1e-15);
  CHECK_THROWS_AS(evaluate(tab, 1.5), DomainError);
  CHECK_THROWS_AS(tabulated(grid, std::vector<Complex>(3)), InvalidParameter);
}

TEST_CASE("superposition is linear") {
  const auto a = gaussian(3.0, 0.5, 0.0), b = gaussian(-3.0, 0.5, 1.0);
  const auto s = superpose({{Complex(0.6, 0.0), a}, {Complex(0.0, 0.8), b}});
  for (double p : {-3.0, -0.1, 0.7, 3.2}) {
    CHECK(std::abs(evaluate(s, p) - (0.6 * evaluate(a, p) + Complex(0.0, 0.8) * evaluate(b, p))) < 1e-15);
  }
  CHECK(norm_squared(s, MomentumGrid(-8.0, 8.0, 2048)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("p = 0 returns the branch mean") {
  const auto psi = gaussian(0.0, 1.0, 0.0).with_branch_factor(Sector::minus, Complex(-1.0));
  CHECK(std::abs(evaluate(psi, 0.0)) < 1e-16);
  CHECK(std::abs(psi.branch_value(Sector::plus, 0.0) - evaluate(gaussian(0.0, 1.0, 0.0), 0.0)) < 1e-16);
}

TEST_CASE("trapezoid weights") {
  const auto w = trapezoid_weights({0.0, 1.0, 3.0});
  CHECK(w[0] == 0.5);
  CHECK(w[1] == 1.5);
  CHECK(w[2] == 1.0);
}

TEST_CASE("recommended grid covers eight widths") {
  const auto g = recommended_grid(gaussian(5.0, 0.5, 0.0), 256);
  REQUIRE(g.has_value());
  CHECK(g->p_min() == doctest::Approx(1.0));
  CHECK(g->p_max() == doctest::Approx(9.0));
}
