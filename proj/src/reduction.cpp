#include "toa/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "toa/errors.hpp"

namespace toa {

MomentumWavefunction conditional_system_state(const PhysicalState& s, double t) {
  return time_evolve(s.psi0(), t, s.mass());
}

std::vector<Complex> ConditionalClockState::amplitudes() const {
  std::vector<Complex> out(wave.size());
  for (std::size_t i = 0; i < wave.size(); ++i) out[i] = std::sqrt(q[i] / mass) * wave[i];
  return out;
}

double ConditionalClockState::norm_squared() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < wave.size(); ++i) sum += weight[i] * std::norm(wave[i]);
  return sum;
}

ConditionalClockState position_reduce(const PhysicalState& s, double x0, Sector sigma) {
  const SectorSamples& smp = s.samples(sigma);
  ConditionalClockState c;
  c.sigma = sigma;
  c.label = x0;
  c.mass = s.mass();
  c.grid = s.grid();
  c.q = smp.q;
  c.weight = smp.weight;
  c.wave.resize(smp.size());
  const double k = sign(sigma) * x0;
  for (std::size_t i = 0; i < smp.size(); ++i) c.wave[i] = smp.value[i] * std::polar(1.0, smp.q[i] * k);
  return c;
}

namespace {

std::vector<Complex> inverse_values(const ConditionalClockState& c) {
  const MomentumGrid& grid = c.grid;
  const double sg = sign(c.sigma);
  const double k = sg * c.label;
  std::vector<Complex> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double p = grid.node(j);
    if (sg * p < 0.0) continue;
    const double q = std::abs(p);
    // Sector nodes ascend in q; locate by bisection to stay exact.
    const auto it = std::lower_bound(c.q.begin(), c.q.end(), q);
    if (it == c.q.end() || *it != q) continue;
    const std::size_t i = static_cast<std::size_t>(it - c.q.begin());
    const Complex v = c.wave[i] * std::polar(1.0, -q * k);
    out[j] = p == 0.0 ? 0.5 * v : v;
  }
  return out;
}

}  // namespace

PhysicalState inverse_position_reduce(const ConditionalClockState& c) {
  return PhysicalState::unnormalized(tabulated(c.grid, inverse_values(c)), c.mass, c.grid);
}

PhysicalState inverse_position_reduce(const ConditionalClockState& plus,
                                      const ConditionalClockState& minus) {
  if (plus.sigma != Sector::plus || minus.sigma != Sector::minus) {
    throw InvalidParameter("inverse_position_reduce expects a plus and a minus clock state");
  }
  if (!(plus.grid == minus.grid) || plus.mass != minus.mass) {
    throw IncompatibleStates("clock states come from different grids or masses");
  }
  std::vector<Complex> a = inverse_values(plus);
  const std::vector<Complex> b = inverse_values(minus);
  for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
  return PhysicalState::unnormalized(tabulated(plus.grid, std::move(a)), plus.mass, plus.grid);
}

NaiveReduction naive_reduce(const PhysicalState& s, double x0) {
  const MomentumGrid& grid = s.grid();
  const double m = s.mass();
  const double dp = grid.spacing();
  const double q_top = std::max(std::abs(grid.p_min()), std::abs(grid.p_max()));
  const auto n = static_cast<std::size_t>(std::floor(q_top / dp * (1.0 + 1e-12)));
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

  NaiveReduction out;
  out.q.resize(n);
  out.epsilon.resize(n);
  out.amplitude.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double q = static_cast<double>(j + 1) * dp;
    Complex f;
    for (Sector sg : kSectors) {
      const double p = sign(sg) * q;
      if (!grid.contains(p)) continue;
      f += s.psi0().branch_value(sg, p) * std::polar(1.0, q * (sign(sg) * x0));
    }
    out.q[j] = q;
    out.epsilon[j] = -q * q / (2.0 * m);
    out.amplitude[j] = f * (m / q) * inv_sqrt_2pi;
  }
  const std::vector<double> w = trapezoid_weights(out.q);
  for (std::size_t j = 0; j < n; ++j) out.norm_squared += w[j] * (out.q[j] / m) * std::norm(out.amplitude[j]);
  return out;
}

ReductionKernel ReductionKernel::isometric(double mass) {
  if (!(mass > 0.0)) throw InvalidParameter("mass must be positive");
  return {[mass](Sector s, double p) {
            const double sp = sign(s) * p;
            return sp > 0.0 ? std::sqrt(sp / mass) : 0.0;
          },
          [](Sector, double, double) { return 0.0; }};
}

ReductionKernel ReductionKernel::flat() {
  return {[](Sector s, double p) { return sign(s) * p > 0.0 ? 1.0 : 0.0; },
          [](Sector, double, double) { return 0.0; }};
}

ReductionKernel ReductionKernel::perturbed(double mass, double amplitude) {
  auto base = isometric(mass).weight;
  return {[base, amplitude](Sector s, double p) { return base(s, p) * (1.0 + amplitude * std::sin(p)); },
          [](Sector, double, double) { return 0.0; }};
}

ReductionKernel ReductionKernel::with_position_phase() const {
  return {weight, [](Sector, double p, double y) { return -y * p; }};
}

ReductionKernel ReductionKernel::with_time_phase(double mass) const {
  return {weight, [mass](Sector, double p, double y) { return -p * p * y / (2.0 * mass); }};
}

ReductionKernel ReductionKernel::with_extra_phase(std::function<double(Sector, double)> extra) const {
  auto base = phase;
  return {weight, [base, extra](Sector s, double p, double y) { return base(s, p, y) + extra(s, p); }};
}

ConditionalClockState general_reduce(const PhysicalState& s, const ReductionKernel& kernel,
                                     double y, Sector sigma) {
  const MomentumGrid& grid = s.grid();
  const double sg = sign(sigma);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double p = grid.node(j);
    if (sg * p < 0.0 && kernel.weight(sigma, p) != 0.0) {
      throw SectorViolation(std::string("kernel for sector ") + to_string(sigma) +
                            " has weight at p = " + std::to_string(p));
    }
  }

  const SectorSamples& smp = s.samples(sigma);
  const double m = s.mass();
  ConditionalClockState c;
  c.sigma = sigma;
  c.label = y;
  c.mass = m;
  c.grid = grid;
  for (std::size_t i = 0; i < smp.size(); ++i) {
    const double q = smp.q[i];
    const double p = sg * q;
    double ratio;  // weight * sqrt(m / q)
    if (q == 0.0) {
      const double d = 1e-8 * smp.max_spacing;
      ratio = kernel.weight(sigma, sg * d) * std::sqrt(m / d);
      const double coarse = kernel.weight(sigma, sg * 100.0 * d) * std::sqrt(m / (100.0 * d));
      if (kernel.weight(sigma, 0.0) != 0.0 || std::abs(ratio) > 2.0 * std::abs(coarse)) {
        c.endpoint_dropped = true;
        continue;
      }
    } else {
      const double w = kernel.weight(sigma, p);
      if (w < 0.0) throw InvalidParameter("kernel weight must be non-negative");
      ratio = w * std::sqrt(m / q);
    }
    c.q.push_back(q);
    c.weight.push_back(smp.weight[i]);
    c.wave.push_back(smp.value[i] * ratio * std::polar(1.0, -kernel.phase(sigma, p, y)));
  }
  return c;
}

}  // namespace toa
