#include "toa/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "toa/errors.hpp"
#include "toa/reduction.hpp"

namespace toa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct FullLine {
  std::vector<double> p;
  std::vector<Complex> c;  // trapezoid weight * psi0(p) / sqrt(2 pi)
};

FullLine full_line(const PhysicalState& s) {
  const MomentumGrid& grid = s.grid();
  FullLine out;
  out.p = grid.nodes();
  out.c.resize(out.p.size());
  const double scale = grid.spacing() / std::sqrt(kTwoPi);
  for (std::size_t j = 0; j < out.p.size(); ++j) {
    const double w = (j == 0 || j + 1 == out.p.size()) ? 0.5 : 1.0;
    out.c[j] = w * scale * s.psi0().evaluate(out.p[j]);
  }
  return out;
}

double max_abs_p(const MomentumGrid& g) { return std::max(std::abs(g.p_min()), std::abs(g.p_max())); }

void require_full_line(const PhysicalState& s, double x_extent, double t_extent) {
  const double value = s.grid().spacing() * (max_abs_p(s.grid()) * t_extent / s.mass() + x_extent);
  if (value < std::numbers::pi / 4.0) return;
  char msg[256];
  std::snprintf(msg, sizeof msg,
                "phase_resolution: dp * (p_max * t_max / m + |x|_max) = %.4g exceeds pi/4 "
                "(|x|_max = %g, t_max = %g); refine the momentum grid",
                value, x_extent, t_extent);
  throw ResolutionError("phase_resolution", msg);
}

// psi(x0, t) and, optionally, d_x psi(x0, t) over tg.
std::vector<Complex> sweep_time(const PhysicalState& s, double x0, const TimeGrid& tg,
                                bool derivative) {
  require_full_line(s, std::abs(x0), tg.max_abs());
  FullLine fl = full_line(s);
  const double m = s.mass();
  std::vector<double> phi(fl.p.size()), theta(fl.p.size());
  for (std::size_t j = 0; j < fl.p.size(); ++j) {
    const double p = fl.p[j];
    const double e = p * p / (2.0 * m);
    phi[j] = p * x0 - e * tg.min();
    theta[j] = -e * tg.spacing();
    if (derivative) fl.c[j] *= Complex(0.0, p);
  }
  return phase_sweep(fl.c, phi, theta, tg.size());
}

}  // namespace

double trapezoid(const TimeGrid& tg, const std::vector<double>& f) {
  if (f.size() < 2) return 0.0;
  double sum = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
  return sum * tg.spacing();
}

TimeDensity relational_toa(const PhysicalState& s, double x0, const TimeGrid& tg,
                           QuadratureMethod method, const EngineOptions& options) {
  TimeDensity d{tg, {}, {}, {}, 0.0};
  const auto a_plus = toa_amplitude_batch(s, Sector::plus, x0, tg, method, options);
  const auto a_minus = toa_amplitude_batch(s, Sector::minus, x0, tg, method, options);
  const std::size_t n = tg.size();
  d.plus.resize(n);
  d.minus.resize(n);
  d.total.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    d.plus[k] = kClockNormalization * std::norm(a_plus[k]);
    d.minus[k] = kClockNormalization * std::norm(a_minus[k]);
    d.total[k] = d.plus[k] + d.minus[k];
  }
  d.mass_captured = trapezoid(tg, d.total);
  return d;
}

std::vector<Complex> wavefunction_at(const PhysicalState& s, double x0, const TimeGrid& tg) {
  return sweep_time(s, x0, tg, false);
}

std::vector<double> position_density(const PhysicalState& s, const PositionGrid& xg, double t) {
  const MomentumGrid& grid = s.grid();
  require_full_line(s, xg.max_abs(), std::abs(t));
  const double bandwidth = xg.spacing() * (grid.p_max() - grid.p_min());
  if (bandwidth >= kTwoPi) {
    char msg[256];
    std::snprintf(msg, sizeof msg,
                  "position_bandwidth: dx * (p_max - p_min) = %.4g exceeds 2 pi; refine the x grid",
                  bandwidth);
    throw ResolutionError("position_bandwidth", msg);
  }
  const FullLine fl = full_line(s);
  const double m = s.mass();
  std::vector<double> phi(fl.p.size()), theta(fl.p.size());
  for (std::size_t j = 0; j < fl.p.size(); ++j) {
    const double p = fl.p[j];
    phi[j] = p * xg.min() - p * p * t / (2.0 * m);
    theta[j] = p * xg.spacing();
  }
  const auto psi = phase_sweep(fl.c, phi, theta, xg.size());
  std::vector<double> out(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) out[i] = std::norm(psi[i]);
  return out;
}

std::vector<double> flux_toa(const PhysicalState& s, double x0, const TimeGrid& tg) {
  const auto psi = sweep_time(s, x0, tg, false);
  const auto dpsi = sweep_time(s, x0, tg, true);
  std::vector<double> j(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) j[k] = std::imag(std::conj(psi[k]) * dpsi[k]) / s.mass();
  return j;
}

std::vector<double> semiclassical_toa(const PhysicalState& s, double x0, const TimeGrid& tg) {
  if (x0 == 0.0) throw UndefinedMap("semiclassical arrival time is undefined at x0 = 0");
  const double m = s.mass();
  std::vector<double> out(tg.size(), 0.0);
  for (std::size_t k = 0; k < tg.size(); ++k) {
    const double t = tg.at(k);
    if (!(t > 0.0)) continue;
    const double p = m * x0 / t;
    if (!s.grid().contains(p)) continue;
    out[k] = m * std::abs(x0) / (t * t) * std::norm(s.psi0().evaluate(p));
  }
  return out;
}

Moments moments(const TimeGrid& tg, const std::vector<double>& density) {
  Moments r;
  r.mass_captured = trapezoid(tg, density);
  if (!(r.mass_captured > 0.0)) throw UndefinedMoments("density captures no mass on the time grid");
  std::vector<double> f(density.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = tg.at(k) * density[k];
  r.mean = trapezoid(tg, f) / r.mass_captured;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double d = tg.at(k) - r.mean;
    f[k] = d * d * density[k];
  }
  r.variance = trapezoid(tg, f) / r.mass_captured;
  r.reliable = r.mass_captured >= 0.99;
  return r;
}

Moments moments(const TimeDensity& d) { return moments(d.grid, d.total); }

NaiveCrosscheck naive_norm_crosscheck(const PhysicalState& s, double x0, const TimeGrid& tg) {
  NaiveCrosscheck r;
  const auto psi = wavefunction_at(s, x0, tg);
  std::vector<double> dens(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) dens[k] = std::norm(psi[k]);
  r.lhs = trapezoid(tg, dens) / kTwoPi;
  r.rhs = naive_reduce(s, x0).norm_squared;
  r.rel_dev = r.rhs > 0.0 ? std::abs(r.lhs - r.rhs) / r.rhs : std::numeric_limits<double>::infinity();
  r.edge_density_low = dens.front();
  r.edge_density_high = dens.back();

  // Beyond the window |psi(x0,t)|^2 ~ (m / (2 pi |t|)) |psi0(m x0 / t)|^2; with
  // p = m x0 / t the tail becomes (m / 4 pi^2) int |psi0(p)|^2 / |p| dp over p
  // between 0 and the edge momentum, integrated here in s = -log(p / p_edge).
  const double m = s.mass();
  auto tail = [&](double t_edge) {
    if (x0 == 0.0 || t_edge == 0.0) return 0.0;
    const double p_edge = m * x0 / t_edge;
    const int n = 600;
    const double ds = 30.0 / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double p = p_edge * std::exp(-ds * i);
      const double v = s.grid().contains(p) ? std::norm(s.psi0().evaluate(p)) : 0.0;
      sum += (i == 0 || i == n ? 0.5 : 1.0) * v;
    }
    return m / (kTwoPi * kTwoPi) * sum * ds;
  };
  r.tail_estimate = tail(tg.max()) + tail(tg.min());
  return r;
}

double total_variation(const TimeGrid& tg, const std::vector<double>& a,
                       const std::vector<double>& b) {
  if (a.size() != b.size()) throw InvalidParameter("total_variation: length mismatch");
  std::vector<double> d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = std::abs(a[k] - b[k]);
  return 0.5 * trapezoid(tg, d);
}

double peak_time(const TimeGrid& tg, const std::vector<double>& f) {
  if (f.empty()) throw InvalidParameter("peak_time: empty density");
  const auto it = std::max_element(f.begin(), f.end());
  return tg.at(static_cast<std::size_t>(it - f.begin()));
}

std::vector<double> resample_shifted(const TimeGrid& tg, const std::vector<double>& f,
                                     double shift) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto n = static_cast<long>(f.size());
  const double offset = shift / tg.spacing();
  const double whole = std::round(offset);
  std::vector<double> out(f.size(), nan);
  if (std::abs(offset - whole) < 1e-9) {
    const auto s = static_cast<long>(whole);
    for (long k = 0; k < n; ++k) {
      if (k + s >= 0 && k + s < n) out[static_cast<std::size_t>(k)] = f[static_cast<std::size_t>(k + s)];
    }
    return out;
  }
  for (long k = 0; k < n; ++k) {
    const double pos = static_cast<double>(k) + offset;
    const auto i = static_cast<long>(std::floor(pos));
    if (i - 1 < 0 || i + 2 >= n) continue;
    const double x = pos - static_cast<double>(i);
    const double w0 = -x * (x - 1.0) * (x - 2.0) / 6.0;
    const double w1 = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
    const double w2 = -(x + 1.0) * x * (x - 2.0) / 2.0;
    const double w3 = (x + 1.0) * x * (x - 1.0) / 6.0;
    const auto u = static_cast<std::size_t>(i);
    out[static_cast<std::size_t>(k)] = w0 * f[u - 1] + w1 * f[u] + w2 * f[u + 1] + w3 * f[u + 2];
  }
  return out;
}

PhysicalState two_packet_state(double mass, const MomentumGrid& grid, double p1, double p2,
                               double width, double amplitude, double phase) {
  return lift(superpose({{1.0, gaussian(p1, width, 0.0)},
                         {std::polar(amplitude, phase), gaussian(p2, width, 0.0)}}),
              mass, grid);
}

std::optional<BackflowWitness> scan_backflow(double mass, const MomentumGrid& grid, double p1,
                                             double p2, double width, double x0,
                                             const TimeGrid& tg, std::size_t n_amplitude,
                                             std::size_t n_phase) {
  std::optional<BackflowWitness> best;
  for (std::size_t i = 0; i < n_amplitude; ++i) {
    const double a = static_cast<double>(i + 1) / static_cast<double>(n_amplitude + 1);
    for (std::size_t j = 0; j < n_phase; ++j) {
      const double phi = kTwoPi * static_cast<double>(j) / static_cast<double>(n_phase);
      const auto flux = flux_toa(two_packet_state(mass, grid, p1, p2, width, a, phi), x0, tg);
      const auto it = std::min_element(flux.begin(), flux.end());
      if (*it < 0.0 && (!best || *it < best->min_flux)) {
        best = BackflowWitness{a, phi, *it, tg.at(static_cast<std::size_t>(it - flux.begin()))};
      }
    }
  }
  return best;
}

}  // namespace toa
