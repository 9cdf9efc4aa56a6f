#include "toa/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <optional>
#include <sstream>

#include <unistd.h>

#include "json.hpp"
#include "toa/config.hpp"
#include "toa/distributions.hpp"
#include "toa/reduction.hpp"
#include "toa/runner.hpp"

namespace toa {

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed;
  std::string detail;
};

struct Context {
  std::size_t n;
  bool sign_fault;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

struct Case {
  const char* name;
  MomentumWavefunction psi;
  double lo, hi;
};

// Suite states. The one-sided grids keep the opposite sector empty.
std::vector<Case> suite() {
  const auto counter = superpose({{std::sqrt(0.5), gaussian(5.0, 0.5, -10.0)},
                                  {std::sqrt(0.5), gaussian(-5.0, 0.5, 10.0)}});
  return {{"g(5,0.5,0)", gaussian(5.0, 0.5, 0.0), 1.0, 9.0},
          {"g(3,0.3,2)", gaussian(3.0, 0.3, 2.0), 0.6, 5.4},
          {"g(-4,0.45,1)", gaussian(-4.0, 0.45, 1.0), -7.6, -0.4},
          {"g(0,1,0)", gaussian(0.0, 1.0, 0.0), -8.0, 8.0},
          {"counter", counter, -9.0, 9.0}};
}

PhysicalState make(const Case& c, const Context& ctx) {
  return lift(c.psi, 1.0, MomentumGrid(c.lo, c.hi, ctx.n));
}

std::vector<PhysicalState> random_states(const Context& ctx, std::size_t count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> p0(-5.0, 5.0), width(0.4, 1.0), xc(-4.0, 4.0);
  std::uniform_int_distribution<int> parts(1, 3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const MomentumGrid grid(-14.0, 14.0, ctx.n);
  std::vector<PhysicalState> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::pair<Complex, MomentumWavefunction>> terms;
    const int k = parts(rng);
    for (int j = 0; j < k; ++j) {
      const Complex w(gauss(rng), gauss(rng));
      const double a = p0(rng), b = width(rng), c = xc(rng);
      terms.push_back({w, gaussian(a, b, c)});
    }
    out.push_back(lift(superpose(terms), 1.0, grid));
  }
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

double max_of(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// Total density as observed by the superselection checks. The injected fault
// adds the sectors coherently with a relative sign.
std::vector<double> observed_total(const PhysicalState& s, double x0, const TimeGrid& tg,
                                   const Context& ctx) {
  const auto ap = toa_amplitude_batch(s, Sector::plus, x0, tg, QuadratureMethod::direct_trapezoid);
  const auto am = toa_amplitude_batch(s, Sector::minus, x0, tg, QuadratureMethod::direct_trapezoid);
  std::vector<double> out(tg.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = ctx.sign_fault ? std::norm(ap[k] - am[k]) * kClockNormalization
                            : (std::norm(ap[k]) + std::norm(am[k])) * kClockNormalization;
  }
  return out;
}

// ---- wavepacket ----------------------------------------------------------

Outcome unit_norm(const Context& ctx) {
  double worst = 0.0;
  for (const Case& c : suite()) {
    worst = std::max(worst, std::abs(norm_squared(c.psi, MomentumGrid(c.lo, c.hi, ctx.n)) - 1.0));
  }
  return {worst < 1e-8, fmt("max |norm - 1| = %.3e", worst)};
}

Outcome unitarity(const Context& ctx) {
  double worst = 0.0;
  for (const Case& c : suite()) {
    const MomentumGrid grid(c.lo, c.hi, ctx.n);
    const double base = norm_squared(c.psi, grid);
    std::vector<Complex> values(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) values[k] = evaluate(c.psi, grid.node(k));
    const MomentumWavefunction tab = tabulated(grid, values);
    for (double x : {-2.0, 0.5, 10.0}) {
      worst = std::max(worst, std::abs(norm_squared(translate(c.psi, x), grid) - base));
      worst = std::max(worst, std::abs(norm_squared(translate(tab, x), grid) - base));
    }
    for (double dt : {0.5, 3.0}) {
      worst = std::max(worst, std::abs(norm_squared(time_evolve(c.psi, dt, 1.0), grid) - base));
      worst = std::max(worst, std::abs(norm_squared(time_evolve(tab, dt, 2.0), grid) - base));
    }
  }
  return {worst < 1e-10, fmt("max norm drift = %.3e", worst)};
}

Outcome linearity(const Context&) {
  const auto a = gaussian(5.0, 0.5, -10.0);
  const auto b = gaussian(-2.0, 0.8, 3.0);
  const Complex ca(0.6, -0.3), cb(-0.2, 0.9);
  const auto sum = superpose({{ca, a}, {cb, b}});
  double worst = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double p = -10.0 + 0.1 * k + 0.013;
    worst = std::max(worst, std::abs(evaluate(sum, p) - (ca * evaluate(a, p) + cb * evaluate(b, p))));
  }
  return {worst < 1e-14, fmt("max deviation = %.3e", worst)};
}

Outcome grid_convergence(const Context& ctx) {
  double worst = 0.0;
  for (const Case& c : suite()) {
    const double coarse = norm_squared(c.psi, MomentumGrid(c.lo, c.hi, ctx.n));
    const double fine = norm_squared(c.psi, MomentumGrid(c.lo, c.hi, 2 * ctx.n - 1));
    worst = std::max(worst, std::abs(coarse - fine));
  }
  return {worst < 1e-10, fmt("max |N(dp) - N(dp/2)| = %.3e", worst)};
}

// ---- physical_state ------------------------------------------------------

Outcome norm_identity(const Context& ctx) {
  double worst = 0.0;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> p0(-5.0, 5.0), width(0.4, 1.0), xc(-4.0, 4.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const MomentumGrid grid(-14.0, 14.0, ctx.n);
  for (int i = 0; i < 20; ++i) {
    const double a = p0(rng), b = width(rng), c = xc(rng);
    const Complex w(gauss(rng), gauss(rng));
    const auto psi = gaussian(a, b, c).scaled(w);
    const PhysicalState s = PhysicalState::unnormalized(psi, 1.0, grid);
    const double lhs = physical_inner_product(s, s).real();
    const double rhs = norm_squared(psi, grid);
    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
  }
  return {worst < 1e-12, fmt("max relative deviation over 20 states = %.3e", worst)};
}

Outcome completeness(const Context& ctx) {
  double worst = 0.0;
  bool nonneg = true;
  for (const PhysicalState& s : random_states(ctx, 20, 20240917u)) {
    const SectorWeights& w = s.sector_weights();
    nonneg = nonneg && w.plus >= 0.0 && w.minus >= 0.0;
    worst = std::max(worst, std::abs(w.total() - 1.0));
  }
  return {nonneg && worst < 1e-12, fmt("max |w+ + w- - 1| = %.3e", worst)};
}

Outcome state_superselection(const Context& ctx) {
  std::vector<std::pair<PhysicalState, double>> states;
  const auto cases = suite();
  states.push_back({make(cases[3], ctx), 0.0});
  states.push_back({make(cases[4], ctx), 0.0});
  for (const PhysicalState& s : random_states(ctx, 3, 99u)) states.push_back({s, 1.0});
  const TimeGrid tg(-1.0, 1.0, 257);
  double worst = 0.0;
  for (const auto& [s, x0] : states) {
    const auto base_total = observed_total(s, x0, tg, ctx);
    const double scale = std::max(1.0, max_of(base_total));
    for (Sector sg : kSectors) {
      for (double phi : {kPi / 2.0, kPi, 2.5}) {
        const PhysicalState r = apply_sector_phase(s, sg, phi);
        for (Sector t : kSectors) {
          worst = std::max(worst, std::abs(r.weight(t) - s.weight(t)));
          worst = std::max(worst, std::abs(position_reduce(r, x0, t).norm_squared() -
                                           position_reduce(s, x0, t).norm_squared()));
        }
        worst = std::max(worst, max_abs_diff(observed_total(r, x0, tg, ctx), base_total) / scale);
      }
    }
  }
  return {worst < 1e-10, fmt("max change under sector phases = %.3e", worst)};
}

// ---- reduction -----------------------------------------------------------

Outcome partial_isometry(const Context& ctx) {
  std::vector<PhysicalState> states;
  for (const Case& c : suite()) states.push_back(make(c, ctx));
  for (const PhysicalState& s : random_states(ctx, 5, 11u)) states.push_back(s);
  double worst = 0.0;
  for (const PhysicalState& s : states) {
    for (double x0 : {-3.0, 0.0, 7.0}) {
      const double sum = position_reduce(s, x0, Sector::plus).norm_squared() +
                         position_reduce(s, x0, Sector::minus).norm_squared();
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  return {worst < 1e-8, fmt("max |sum_sigma ||phi_sigma||^2 - 1| = %.3e", worst)};
}

Outcome translation_covariance(const Context& ctx) {
  const auto cases = suite();
  double worst = 0.0;
  for (std::size_t i : {0u, 3u, 4u}) {
    const Case& c = cases[i];
    const MomentumGrid grid(c.lo, c.hi, ctx.n);
    const PhysicalState s = lift(c.psi, 1.0, grid);
    for (double xs : {-2.0, 0.5, 10.0}) {
      const PhysicalState moved = lift(translate(c.psi, xs), 1.0, grid);
      for (Sector sg : kSectors) {
        worst = std::max(worst, max_abs_diff(position_reduce(moved, 3.0, sg).wave,
                                             position_reduce(s, 3.0 - xs, sg).wave));
      }
    }
  }
  return {worst < 1e-10, fmt("max |phi_{x0}[T psi] - phi_{x0-x'}[psi]| = %.3e", worst)};
}

Outcome inverse_identity(const Context& ctx) {
  double worst = 0.0;
  const auto cases = suite();
  for (std::size_t i : {0u, 3u, 4u}) {
    const PhysicalState s = make(cases[i], ctx);
    for (double x0 : {-3.0, 4.0}) {
      const PhysicalState back = inverse_position_reduce(position_reduce(s, x0, Sector::plus),
                                                         position_reduce(s, x0, Sector::minus));
      const MomentumGrid& g = s.grid();
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double p = g.node(k);
        if (p == 0.0) continue;
        worst = std::max(worst, std::abs(back.psi0().evaluate(p) - s.psi0().evaluate(p)));
      }
    }
  }
  const auto rs = random_states(ctx, 4, 5u);
  for (std::size_t i = 0; i + 1 < rs.size(); i += 2) {
    const PhysicalState back = inverse_position_reduce(position_reduce(rs[i], 2.0, Sector::plus),
                                                       position_reduce(rs[i], 2.0, Sector::minus));
    worst = std::max(worst, std::abs(physical_inner_product(back, rs[i + 1]) -
                                     physical_inner_product(rs[i], rs[i + 1])));
  }
  return {worst < 1e-10, fmt("max reconstruction deviation = %.3e", worst)};
}

Outcome isometry_iff(const Context& ctx) {
  const auto cases = suite();
  std::vector<PhysicalState> states{make(cases[0], ctx), make(cases[1], ctx), make(cases[3], ctx)};
  for (const PhysicalState& s : random_states(ctx, 3, 3u)) states.push_back(s);
  const ReductionKernel iso = ReductionKernel::isometric(1.0);
  double iso_dev = 0.0, bad_dev = 0.0;
  for (const PhysicalState& s : states) {
    double worst_here = 0.0;
    for (Sector sg : kSectors) {
      const double w = s.weight(sg);
      iso_dev = std::max(iso_dev, std::abs(general_reduce(s, iso.with_position_phase(), 2.5, sg).norm_squared() - w));
      iso_dev = std::max(iso_dev, std::abs(general_reduce(s, iso.with_time_phase(1.0), 1.5, sg).norm_squared() - w));
      const double pert = general_reduce(s, ReductionKernel::perturbed(1.0, 0.1).with_position_phase(), 2.5, sg).norm_squared();
      worst_here = std::max(worst_here, std::abs(pert - w));
    }
    bad_dev = std::max(bad_dev, worst_here);
  }
  const PhysicalState wide = lift(gaussian(5.0, 1.0, 0.0), 1.0, MomentumGrid(-3.0, 13.0, ctx.n));
  const double flat = general_reduce(wide, ReductionKernel::flat().with_position_phase(), 0.0, Sector::plus).norm_squared();
  const double flat_dev = std::abs(flat - wide.weight(Sector::plus));
  const bool ok = iso_dev < 1e-8 && bad_dev > 1e-3 && flat_dev > 0.05;
  return {ok, fmt("isometric dev = %.3e, perturbed dev = %.3e", iso_dev, bad_dev) +
                  fmt(", flat dev = %.3e", flat_dev)};
}

Outcome phase_freedom(const Context& ctx) {
  const auto cases = suite();
  const ReductionKernel iso = ReductionKernel::isometric(1.0).with_position_phase();
  const ReductionKernel extra = iso.with_extra_phase(
      [](Sector s, double p) { return 0.7 * p * p + sign(s) * std::sin(3.0 * p); });
  double worst = 0.0;
  for (const Case& c : cases) {
    const PhysicalState s = make(c, ctx);
    for (Sector sg : kSectors) {
      worst = std::max(worst, std::abs(general_reduce(s, extra, 1.0, sg).norm_squared() -
                                       general_reduce(s, iso, 1.0, sg).norm_squared()));
    }
  }
  return {worst < 1e-12, fmt("max norm change = %.3e", worst)};
}

// ---- oscillatory ---------------------------------------------------------

Outcome method_agreement(const Context& ctx) {
  const auto cases = suite();
  const TimeGrid tg(-6.0, 6.0, 1024);
  double worst = 0.0;
  for (std::size_t i : {0u, 1u, 2u}) {
    const PhysicalState s = make(cases[i], ctx);
    for (double x0 : {-3.0, 4.0, 10.0}) {
      for (Sector sg : kSectors) worst = std::max(worst, method_crosscheck(s, sg, x0, tg));
    }
  }
  return {worst < 1e-6, fmt("max relative |A|^2 deviation = %.3e", worst)};
}

Outcome convergence(const Context& ctx) {
  const std::size_t n = ctx.n >= 4096 ? 769 : 385;
  const auto psi = gaussian(5.0, 0.5, 0.0);
  const TimeGrid tg(1.0, 3.0, 257);
  auto density = [&](std::size_t points) {
    return relational_toa(PhysicalState::unnormalized(psi, 1.0, MomentumGrid(2.0, 8.0, points)),
                          10.0, tg).total;
  };
  const auto coarse = density(n);
  const auto half = density(2 * n - 1);
  const auto ref = density(8 * (n - 1) + 1);
  const double e1 = max_abs_diff(coarse, ref), e2 = max_abs_diff(half, ref);
  const double ratio = e1 / e2;
  return {ratio >= 4.0, fmt("error %.3e -> %.3e", e1, e2) + fmt(", ratio %.3f", ratio)};
}

Outcome plancherel(const Context& ctx) {
  const auto cases = suite();
  struct Setup {
    std::size_t i;
    double x0, t0, t1;
  };
  double worst = 0.0;
  for (const Setup& st : {Setup{0, 10.0, -2.0, 10.0}, Setup{1, 3.0, -3.0, 12.0},
                          Setup{2, -6.0, -3.0, 12.0}}) {
    const PhysicalState s = make(cases[st.i], ctx);
    const TimeGrid tg(st.t0, st.t1, 4096);
    worst = std::max(worst, std::abs(relational_toa(s, st.x0, tg).mass_captured - 1.0));
  }
  return {worst < 1e-4, fmt("max |int P dt - 1| = %.3e", worst)};
}

Outcome x0_phase_shift(const Context& ctx) {
  const auto cases = suite();
  const TimeGrid tg(-1.0, 1.0, 257);
  double worst = 0.0;
  for (std::size_t i : {0u, 3u}) {
    const Case& c = cases[i];
    const MomentumGrid grid(c.lo, c.hi, ctx.n);
    const PhysicalState s = lift(c.psi, 1.0, grid);
    for (double x0 : {-4.0, 2.5}) {
      const PhysicalState moved = lift(translate(c.psi, -x0), 1.0, grid);
      for (Sector sg : kSectors) {
        worst = std::max(worst, max_abs_diff(
            toa_amplitude_batch(s, sg, x0, tg, QuadratureMethod::direct_trapezoid),
            toa_amplitude_batch(moved, sg, 0.0, tg, QuadratureMethod::direct_trapezoid)));
      }
    }
  }
  return {worst < 1e-12, fmt("max |A(x0) - A[T(-x0) psi](0)| = %.3e", worst)};
}

// ---- distributions -------------------------------------------------------

Outcome positivity(const Context& ctx) {
  const TimeGrid tg(-2.0, 2.0, 513);
  bool ok = true;
  double max_mass = 0.0;
  for (const Case& c : suite()) {
    const PhysicalState s = make(c, ctx);
    for (double x0 : {-3.0, 0.0, 5.0}) {
      for (auto method : {QuadratureMethod::direct_trapezoid, QuadratureMethod::energy_transform}) {
        const TimeDensity d = relational_toa(s, x0, tg, method);
        for (std::size_t k = 0; k < tg.size(); ++k) {
          ok = ok && d.plus[k] >= 0.0 && d.minus[k] >= 0.0 && d.total[k] == d.plus[k] + d.minus[k];
        }
        max_mass = std::max(max_mass, d.mass_captured);
      }
    }
  }
  ok = ok && max_mass <= 1.0 + 1e-6;
  return {ok, fmt("largest captured mass = %.9f", max_mass)};
}

Outcome normalization(const Context& ctx) {
  const auto cases = suite();
  const PhysicalState s = make(cases[0], ctx);
  const TimeGrid tg(0.0, 4.0, 2048);
  const double mass = relational_toa(s, 10.0, tg).mass_captured;
  return {std::abs(mass - 1.0) < 1e-3, fmt("captured mass = %.9f", mass)};
}

Outcome time_covariance(const Context& ctx) {
  const Case c = suite()[0];
  const MomentumGrid grid(c.lo, c.hi, ctx.n);
  const TimeGrid tg(0.0, 4.0, ctx.n >= 4096 ? 4097 : 1025);
  const double dt = 0.5;
  const auto base = relational_toa(lift(c.psi, 1.0, grid), 10.0, tg).total;
  const auto evolved = relational_toa(lift(time_evolve(c.psi, dt, 1.0), 1.0, grid), 10.0, tg).total;
  const auto shifted = resample_shifted(tg, base, dt);
  double worst = 0.0;
  for (std::size_t k = 0; k < tg.size(); ++k) {
    if (!std::isnan(shifted[k])) worst = std::max(worst, std::abs(evolved[k] - shifted[k]));
  }
  return {worst < 1e-6, fmt("max |P[U psi](t) - P[psi](t + dt)| = %.3e", worst)};
}

Outcome spatial_covariance(const Context& ctx) {
  const auto cases = suite();
  const TimeGrid tg(-2.0, 2.0, 257);
  double worst = 0.0;
  for (std::size_t i : {0u, 3u, 4u}) {
    const Case& c = cases[i];
    const MomentumGrid grid(c.lo, c.hi, ctx.n);
    const PhysicalState s = lift(c.psi, 1.0, grid);
    for (double xs : {-2.0, 0.5, 10.0}) {
      const PhysicalState moved = lift(translate(c.psi, xs), 1.0, grid);
      worst = std::max(worst, max_abs_diff(relational_toa(moved, 3.0, tg).total,
                                           relational_toa(s, 3.0 - xs, tg).total));
    }
  }
  return {worst < 1e-10, fmt("max |P_{x0}[T psi] - P_{x0-x'}[psi]| = %.3e", worst)};
}

Outcome distribution_superselection(const Context& ctx) {
  const PhysicalState s = make(suite()[4], ctx);
  const TimeGrid tg(0.0, 4.0, 513);
  const auto reference = relational_toa(s, 0.0, tg).total;
  const double scale = max_of(reference);
  double worst = max_abs_diff(observed_total(s, 0.0, tg, ctx), reference) / scale;
  for (double phi : {kPi / 2.0, kPi}) {
    const PhysicalState r = apply_sector_phase(s, Sector::minus, phi);
    worst = std::max(worst, max_abs_diff(observed_total(r, 0.0, tg, ctx), reference) / scale);
  }
  return {worst < 1e-10, fmt("max relative change of P_total = %.3e", worst)};
}

// Plain double loop over the sector nodes with the full-line trapezoid weights.
std::vector<double> kijowski_reference(const PhysicalState& s, double x0, const TimeGrid& tg) {
  const MomentumGrid& g = s.grid();
  const double m = s.mass();
  std::vector<double> out(tg.size(), 0.0);
  for (Sector sg : kSectors) {
    std::vector<Complex> amp(tg.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double p = g.node(j);
      if (sign(sg) * p < 0.0) continue;
      double w = (j == 0 || j + 1 == g.size()) ? 0.5 * g.spacing() : g.spacing();
      if (p == 0.0) w *= 0.5;
      const double q = std::abs(p);
      const Complex f = p == 0.0 ? s.psi0().branch_value(sg, 0.0) : s.psi0().evaluate(p);
      const Complex c = w * std::sqrt(q / m) * f;
      for (std::size_t k = 0; k < tg.size(); ++k) {
        const double t = tg.at(k);
        amp[k] += c * std::exp(Complex(0.0, sign(sg) * q * x0 - q * q * t / (2.0 * m)));
      }
    }
    for (std::size_t k = 0; k < tg.size(); ++k) out[k] += std::norm(amp[k]) / (2.0 * kPi);
  }
  return out;
}

Outcome kijowski_equivalence(const Context& ctx) {
  const auto cases = suite();
  const TimeGrid tg(-1.0, 3.0, 256);
  double worst = 0.0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const PhysicalState s = make(cases[i], ctx);
    const double x0 = i == 4 ? 0.0 : 2.0;
    const auto ref = kijowski_reference(s, x0, tg);
    const double scale = max_of(ref);
    worst = std::max(worst, max_abs_diff(relational_toa(s, x0, tg).total, ref) / scale);
    if (i < 3) {
      worst = std::max(worst, max_abs_diff(relational_toa(s, x0, tg, QuadratureMethod::energy_transform).total,
                                           ref) / scale);
    }
  }
  return {worst < 1e-6, fmt("max relative deviation from the double loop = %.3e", worst)};
}

Outcome position_spreading(const Context& ctx) {
  const double width = 0.5;
  const auto psi = gaussian(0.0, width, 2.0);
  const PhysicalState s = lift(psi, 1.0, MomentumGrid(-4.0, 4.0, ctx.n));
  double norm_dev = 0.0, width_dev = 0.0, peak_dev = 0.0;
  for (double t : {0.0, 1.0, 5.0}) {
    const PositionGrid xg(-23.0, 27.0, 1024);
    const auto rho = position_density(s, xg, t);
    double n0 = 0.0, n1 = 0.0, n2 = 0.0;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < xg.size(); ++k) {
      const double w = (k == 0 || k + 1 == xg.size()) ? 0.5 * xg.spacing() : xg.spacing();
      const double x = xg.at(k);
      n0 += w * rho[k];
      n1 += w * rho[k] * x;
      n2 += w * rho[k] * x * x;
      if (rho[k] > rho[arg]) arg = k;
    }
    const double mean = n1 / n0;
    const double sd = std::sqrt(n2 / n0 - mean * mean);
    const double expect = std::sqrt(1.0 + std::pow(2.0 * width * width * t, 2)) / (2.0 * width);
    norm_dev = std::max(norm_dev, std::abs(n0 - 1.0));
    width_dev = std::max(width_dev, std::abs(sd / expect - 1.0));
    peak_dev = std::max(peak_dev, std::abs(xg.at(arg) - 2.0));
  }
  const bool ok = norm_dev < 1e-6 && width_dev < 1e-3 && peak_dev <= 0.05;
  return {ok, fmt("|norm - 1| = %.3e, relative width error = %.3e", norm_dev, width_dev)};
}

// ---- cli -----------------------------------------------------------------

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("toa_verify_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Sets TOA_THREADS for the lifetime of the object.
class ThreadsOverride {
 public:
  explicit ThreadsOverride(const char* value) {
    if (const char* old = std::getenv("TOA_THREADS")) saved_ = old;
    ::setenv("TOA_THREADS", value, 1);
  }
  ~ThreadsOverride() {
    if (saved_) ::setenv("TOA_THREADS", saved_->c_str(), 1);
    else ::unsetenv("TOA_THREADS");
  }

 private:
  std::optional<std::string> saved_;
};

std::vector<double> column(const std::string& csv, std::size_t col) {
  std::vector<double> out;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::size_t start = 0;
    for (std::size_t c = 0; c < col; ++c) start = line.find(',', start) + 1;
    out.push_back(std::strtod(line.c_str() + start, nullptr));
  }
  return out;
}

Outcome determinism(const Context& ctx) {
  TempDir dir;
  nlohmann::json cfg = nlohmann::json::parse(demo_config_json());
  cfg["momentum_grid"]["n_points"] = std::max<std::size_t>(ctx.n, 4096);
  cfg["time_grid"]["n_t"] = 1024;
  auto run = [&](const nlohmann::json& doc, const std::string& out, const char* threads) {
    nlohmann::json d = doc;
    d["output_dir"] = out;
    ThreadsOverride env(threads);
    run_toa(parse_config(d.dump(), dir.path()));
    return read_file(dir.path() / out / "toa_x0_0.csv");
  };
  const std::string a = run(cfg, "a", "1");
  const std::string b = run(cfg, "b", "4");
  nlohmann::json mirrored = cfg;
  mirrored["wavepacket"]["p0"] = -5.0;
  mirrored["momentum_grid"]["p_min"] = -15.0;
  mirrored["momentum_grid"]["p_max"] = 5.0;
  mirrored["arrival_positions"] = {-10.0};
  const std::string c = run(mirrored, "c", "2");
  const bool same_threads = a == b;
  const bool same_mirror = column(a, 1) == column(c, 1);
  std::string detail = same_threads ? "byte-identical across 1 and 4 threads"
                                    : "output differs between 1 and 4 threads";
  detail += same_mirror ? "; mirrored P_total identical" : "; mirrored P_total differs";
  return {same_threads && same_mirror && !a.empty(), detail};
}

Outcome tabulated_round_trip(const Context& ctx) {
  TempDir dir;
  const Case c = suite()[0];
  const MomentumGrid grid(c.lo, c.hi, ctx.n);
  write_tabulated_csv(dir.path() / "psi.csv", c.psi, grid);
  const MomentumWavefunction back = read_tabulated_csv(dir.path() / "psi.csv");
  const TimeGrid tg(0.0, 4.0, 512);
  const auto a = relational_toa(lift(c.psi, 1.0, grid), 10.0, tg).total;
  const auto b = relational_toa(lift(back, 1.0, grid), 10.0, tg).total;
  const double dev = max_abs_diff(a, b) / max_of(a);
  return {dev < 1e-9, fmt("max relative density change = %.3e", dev)};
}

struct Invariant {
  const char* id;
  Outcome (*run)(const Context&);
};

const std::vector<Invariant>& registry() {
  static const std::vector<Invariant> r{
      {"wavepacket.unit_norm", unit_norm},
      {"wavepacket.unitarity", unitarity},
      {"wavepacket.linearity", linearity},
      {"wavepacket.grid_convergence", grid_convergence},
      {"physical_state.norm_identity", norm_identity},
      {"physical_state.completeness", completeness},
      {"physical_state.superselection", state_superselection},
      {"reduction.partial_isometry", partial_isometry},
      {"reduction.translation_covariance", translation_covariance},
      {"reduction.inverse_identity", inverse_identity},
      {"reduction.isometry_iff", isometry_iff},
      {"reduction.phase_freedom", phase_freedom},
      {"oscillatory.method_agreement", method_agreement},
      {"oscillatory.convergence", convergence},
      {"oscillatory.plancherel", plancherel},
      {"oscillatory.x0_phase_shift", x0_phase_shift},
      {"distributions.positivity", positivity},
      {"distributions.normalization", normalization},
      {"distributions.time_covariance", time_covariance},
      {"distributions.spatial_covariance", spatial_covariance},
      {"distributions.superselection", distribution_superselection},
      {"distributions.kijowski_equivalence", kijowski_equivalence},
      {"distributions.position_spreading", position_spreading},
      {"cli.determinism", determinism},
      {"cli.tabulated_round_trip", tabulated_round_trip},
  };
  return r;
}

}  // namespace

bool VerifyReport::all_passed() const noexcept {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

std::string VerifyReport::to_json() const {
  nlohmann::json doc;
  doc["level"] = level == VerifyLevel::quick ? "quick" : "full";
  doc["passed"] = all_passed();
  doc["seconds"] = seconds;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : results) {
    list.push_back({{"id", r.id}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
  }
  doc["invariants"] = list;
  return doc.dump(2);
}

std::size_t verify_grid_points(VerifyLevel level) noexcept {
  return level == VerifyLevel::quick ? 1024 : 8192;
}

std::vector<std::string> invariant_ids() {
  std::vector<std::string> ids;
  for (const auto& inv : registry()) ids.emplace_back(inv.id);
  return ids;
}

VerifyReport run_verify(const VerifyOptions& options, std::ostream* log) {
  if (!options.inject_fault.empty() && options.inject_fault != "sector-weight-sign") {
    throw InvalidParameter("unknown fault '" + options.inject_fault + "'");
  }
  const Context ctx{verify_grid_points(options.level), !options.inject_fault.empty()};
  using Clock = std::chrono::steady_clock;
  VerifyReport report;
  report.level = options.level;
  const auto start = Clock::now();
  for (const auto& inv : registry()) {
    const auto t0 = Clock::now();
    InvariantResult r;
    r.id = inv.id;
    try {
      const Outcome o = inv.run(ctx);
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (log) *log << (r.passed ? "PASS " : "FAIL ") << r.id << ": " << r.detail << "\n";
    report.results.push_back(std::move(r));
  }
  report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

}  // namespace toa
