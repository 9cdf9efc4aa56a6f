#include "toa/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "toa/parallel.hpp"

namespace toa {

namespace {

constexpr double kZetaQuarter = -0.813278405261892;        // zeta(1/4)
constexpr double kZetaMinusQuarter = -0.320451264228577;   // zeta(-1/4)
constexpr double kZetaMinusThreeQ = -0.133642774436585;    // zeta(-3/4)
constexpr std::size_t kSweepBlock = 64;
// sqrt(du), the q-width of the first u panel, is kept below this fraction of
// the length over which the integrand changes at q = 0.
constexpr double kOriginResolution = 1.0 / 8.0;
constexpr std::size_t kSweepTask = 8 * kSweepBlock;
constexpr double kNegligibleWeight = 1e-16;

}  // namespace

const char* to_string(QuadratureMethod m) noexcept {
  return m == QuadratureMethod::direct_trapezoid ? "direct-trapezoid" : "energy-transform";
}

std::optional<QuadratureMethod> parse_quadrature(std::string_view name) {
  if (name == "direct-trapezoid") return QuadratureMethod::direct_trapezoid;
  if (name == "energy-transform") return QuadratureMethod::energy_transform;
  return std::nullopt;
}

ResolutionMargin phase_resolution(const PhysicalState& s, Sector sigma, double x0,
                                  const TimeGrid& tg) {
  const SectorSamples& smp = s.samples(sigma);
  ResolutionMargin r;
  r.guard = "phase_resolution";
  r.limit = std::numbers::pi / 4.0;
  r.value = smp.max_spacing * (smp.q_max() * tg.max_abs() / s.mass() + std::abs(x0));
  return r;
}

void require_phase_resolution(const PhysicalState& s, Sector sigma, double x0,
                              const TimeGrid& tg) {
  const ResolutionMargin r = phase_resolution(s, sigma, x0, tg);
  if (r.ok()) return;
  char msg[256];
  std::snprintf(msg, sizeof msg,
                "phase_resolution: dq * (q_max * t_max / m + |x0|) = %.4g exceeds pi/4 "
                "(sector %s, x0 = %g, t_max = %g); refine the momentum grid",
                r.value, to_string(sigma), x0, tg.max_abs());
  throw ResolutionError(r.guard, msg);
}

std::vector<Complex> phase_sweep(const std::vector<Complex>& c, const std::vector<double>& phi,
                                 const std::vector<double>& theta, std::size_t n) {
  const std::size_t m = c.size();
  std::vector<Complex> out(n);
  const std::size_t tasks = (n + kSweepTask - 1) / kSweepTask;
  parallel_for(tasks, [&](std::size_t task) {
    const std::size_t k_begin = task * kSweepTask;
    const std::size_t k_end = std::min(n, k_begin + kSweepTask);
    for (std::size_t k0 = k_begin; k0 < k_end; k0 += kSweepBlock) {
      const std::size_t len = std::min(kSweepBlock, k_end - k0);
      double acc_re[kSweepBlock] = {};
      double acc_im[kSweepBlock] = {};
      for (std::size_t j = 0; j < m; ++j) {
        const Complex z0 = c[j] * std::polar(1.0, phi[j] + static_cast<double>(k0) * theta[j]);
        const double rr = std::cos(theta[j]);
        const double ri = std::sin(theta[j]);
        double zr = z0.real();
        double zi = z0.imag();
        for (std::size_t k = 0; k < len; ++k) {
          acc_re[k] += zr;
          acc_im[k] += zi;
          const double t = zr * rr - zi * ri;
          zi = zr * ri + zi * rr;
          zr = t;
        }
      }
      for (std::size_t k = 0; k < len; ++k) out[k0 + k] = Complex(acc_re[k], acc_im[k]);
    }
  });
  return out;
}

double default_energy_spacing(double q_max, double x0, const TimeGrid& tg, double mass) {
  const double a = tg.max_abs() / (2.0 * mass);
  const double b = 0.5 * std::abs(x0);
  const double c = std::numbers::pi / 8.0;
  double s;
  if (a > 0.0) {
    s = (-b + std::sqrt(b * b + 4.0 * a * c)) / (2.0 * a);
  } else if (b > 0.0) {
    s = c / b;
  } else {
    s = q_max;
  }
  return std::min(s * s, q_max * q_max / 64.0);
}

namespace {

std::vector<Complex> direct_batch(const PhysicalState& s, Sector sigma, double x0,
                                  const TimeGrid& tg) {
  const SectorSamples& smp = s.samples(sigma);
  const double m = s.mass();
  const double k = sign(sigma) * x0;
  const double t0 = tg.min();
  const double dt = tg.spacing();
  std::vector<Complex> c(smp.size());
  std::vector<double> phi(smp.size()), theta(smp.size());
  for (std::size_t j = 0; j < smp.size(); ++j) {
    const double q = smp.q[j];
    const double e = q * q / (2.0 * m);
    c[j] = smp.weight[j] * std::sqrt(q / m) * smp.value[j];
    phi[j] = q * k - e * t0;
    theta[j] = -e * dt;
  }
  return phase_sweep(c, phi, theta, tg.size());
}

std::vector<Complex> energy_batch(const PhysicalState& s, Sector sigma, double x0,
                                  const TimeGrid& tg, const EngineOptions& options) {
  const SectorSamples& smp = s.samples(sigma);
  const MomentumWavefunction& psi = s.psi0();
  const double m = s.mass();
  const double sg = sign(sigma);
  const double k = sg * x0;
  const double q_max = smp.q_max();
  const double u_lo = smp.reaches_origin ? 0.0 : smp.q.front() * smp.q.front();
  const double u_hi = q_max * q_max;
  const double span = u_hi - u_lo;
  if (!(span > 0.0)) return std::vector<Complex>(tg.size());

  const double norm = 0.5 / std::sqrt(m);
  auto h = [&](double q) { return psi.branch_value(sigma, sg * q) * std::polar(norm, q * k); };

  // Taylor data of h at q = 0 for the endpoint terms and the origin scale.
  const double d = 1e-3 / (1.0 + std::abs(x0));
  const Complex f0 = h(0.0);
  const Complex h1 = h(d);
  const Complex h2 = h(2.0 * d);
  const Complex f1 = (-3.0 * f0 + 4.0 * h1 - h2) / (2.0 * d);
  const Complex f2 = (f0 - 2.0 * h1 + h2) / (2.0 * d * d);

  double du = options.du;
  if (!(du > 0.0)) {
    du = std::min(default_energy_spacing(q_max, x0, tg, m), 2.0 * q_max * smp.max_spacing);
    double h_max = 0.0;
    for (const Complex& v : smp.value) h_max = std::max(h_max, std::abs(v) * norm);
    if (smp.reaches_origin && std::abs(f0) >= 1e-6 * h_max) {
      double scale = std::abs(f0) / std::max(std::abs(f1), 1e-300);
      scale = std::min(scale, std::sqrt(std::abs(f0) / std::max(2.0 * std::abs(f2), 1e-300)));
      const double s_max = kOriginResolution * scale;
      du = std::min(du, s_max * s_max);
    }
  }
  du = std::min(du, span / 64.0);
  const auto panels = static_cast<std::size_t>(std::ceil(span / du));
  du = span / static_cast<double>(panels);

  const double t0 = tg.min();
  std::vector<Complex> a(panels + 1);
  for (std::size_t n = 0; n <= panels; ++n) {
    if (n == 0 && smp.reaches_origin) continue;
    const double u = n == panels ? u_hi : u_lo + static_cast<double>(n) * du;
    const double q = n == panels ? q_max : std::sqrt(u);
    const double w = (n == 0 || n == panels) ? 0.5 * du : du;
    a[n] = w * h(q) / std::sqrt(q) * std::polar(1.0, -u * t0 / (2.0 * m));
  }
  const double dt = tg.spacing();
  std::vector<Complex> out = chirp_z(a, du * dt / (2.0 * m), tg.size());
  if (u_lo > 0.0) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] *= std::polar(1.0, -u_lo * static_cast<double>(i) * dt / (2.0 * m));
    }
    return out;
  }

  // Generalized Euler-Maclaurin terms for u^(-1/4) (f0 + f1 u^(1/2) + f2 u) at u = 0.
  const double c0 = kZetaQuarter * std::pow(du, 0.75);
  const double c1 = kZetaMinusQuarter * std::pow(du, 1.25);
  const double c2 = kZetaMinusThreeQ * std::pow(du, 1.75);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double t = tg.at(i);
    out[i] -= c0 * f0 + c1 * f1 + c2 * (f2 - Complex(0.0, t / (2.0 * m)) * f0);
  }
  return out;
}

}  // namespace

std::vector<Complex> toa_amplitude_batch(const PhysicalState& s, Sector sigma, double x0,
                                         const TimeGrid& tg, QuadratureMethod method,
                                         const EngineOptions& options) {
  if (s.samples(sigma).size() < 2) return std::vector<Complex>(tg.size());
  require_phase_resolution(s, sigma, x0, tg);
  return method == QuadratureMethod::direct_trapezoid ? direct_batch(s, sigma, x0, tg)
                                                      : energy_batch(s, sigma, x0, tg, options);
}

double method_crosscheck(const PhysicalState& s, Sector sigma, double x0, const TimeGrid& tg,
                         const EngineOptions& options) {
  if (s.samples(sigma).size() < 2) return 0.0;
  require_phase_resolution(s, sigma, x0, tg);
  // A sector holding less than double-precision resolution of the total norm
  // carries only rounding noise; treat it as empty.
  if (s.weight(sigma) <= kNegligibleWeight * s.sector_weights().total()) return 0.0;
  const auto a = direct_batch(s, sigma, x0, tg);
  const auto b = energy_batch(s, sigma, x0, tg, options);
  double peak = 0.0, dev = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    peak = std::max(peak, std::norm(a[i]));
    dev = std::max(dev, std::abs(std::norm(a[i]) - std::norm(b[i])));
  }
  return peak > 0.0 ? dev / peak : 0.0;
}

}  // namespace toa
