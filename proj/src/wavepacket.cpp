#include "toa/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "toa/errors.hpp"

namespace toa {

const char* to_string(Sector s) noexcept { return s == Sector::plus ? "plus" : "minus"; }

MomentumGrid::MomentumGrid(double p_min, double p_max, std::size_t n_points)
    : p_min_(p_min), p_max_(p_max), n_(n_points), dp_(0.0) {
  if (!std::isfinite(p_min) || !std::isfinite(p_max) || !(p_min < p_max)) {
    throw InvalidParameter("momentum grid requires finite p_min < p_max");
  }
  if (n_points < kMinPoints) {
    throw InvalidParameter("momentum grid requires at least " + std::to_string(kMinPoints) +
                           " points, got " + std::to_string(n_points));
  }
  dp_ = (p_max_ - p_min_) / static_cast<double>(n_ - 1);
}

double MomentumGrid::node(std::size_t k) const noexcept {
  if (2 * k + 1 == n_) return 0.5 * (p_min_ + p_max_);
  if (k < n_ / 2) return p_min_ + static_cast<double>(k) * dp_;
  return p_max_ - static_cast<double>(n_ - 1 - k) * dp_;
}

std::vector<double> MomentumGrid::nodes() const {
  std::vector<double> out(n_);
  for (std::size_t k = 0; k < n_; ++k) out[k] = node(k);
  return out;
}

bool MomentumGrid::contains(double p) const noexcept {
  const double tol = 1e-9 * dp_;
  return p >= p_min_ - tol && p <= p_max_ + tol;
}

MomentumGrid MomentumGrid::covering(double p0, double sigma_p, std::size_t n_points) {
  if (!(sigma_p > 0.0)) throw InvalidParameter("sigma_p must be positive");
  return MomentumGrid(p0 - 8.0 * sigma_p, p0 + 8.0 * sigma_p, n_points);
}

std::vector<double> trapezoid_weights(const std::vector<double>& nodes) {
  const std::size_t n = nodes.size();
  std::vector<double> w(n, 0.0);
  if (n < 2) return w;
  w[0] = 0.5 * (nodes[1] - nodes[0]);
  w[n - 1] = 0.5 * (nodes[n - 1] - nodes[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (nodes[i + 1] - nodes[i - 1]);
  return w;
}

namespace {

Complex gaussian_value(const MomentumWavefunction::Gaussian& g, double p) {
  const double norm = std::pow(2.0 * std::numbers::pi * g.sigma_p * g.sigma_p, -0.25);
  const double d = p - g.p0;
  return norm * std::exp(Complex(-d * d / (4.0 * g.sigma_p * g.sigma_p), -p * g.x_c));
}

Complex table_value(const MomentumWavefunction::Tabulated& t, double p) {
  const MomentumGrid& grid = t.grid;
  if (!grid.contains(p)) {
    throw DomainError("tabulated wavefunction evaluated at p = " + std::to_string(p) +
                      " outside [" + std::to_string(grid.p_min()) + ", " +
                      std::to_string(grid.p_max()) + "]");
  }
  const auto& v = *t.values;
  const std::size_t n = grid.size();
  const double x = (p - grid.p_min()) / grid.spacing();
  std::size_t k = x <= 0.0 ? 0 : static_cast<std::size_t>(std::floor(x));
  k = std::min(k, n - 2);
  const double a = grid.node(k);
  const double b = grid.node(k + 1);
  const double frac = std::clamp((p - a) / (b - a), 0.0, 1.0);
  if (frac == 0.0) return v[k];
  if (frac == 1.0) return v[k + 1];
  return (1.0 - frac) * v[k] + frac * v[k + 1];
}

}  // namespace

MomentumWavefunction::MomentumWavefunction(Representation repr) : repr_(std::move(repr)) {}

Complex MomentumWavefunction::base_value(double p) const {
  if (const auto* g = std::get_if<Gaussian>(&repr_)) return gaussian_value(*g, p);
  if (const auto* t = std::get_if<Tabulated>(&repr_)) return table_value(*t, p);
  return {};  // superpositions are resolved per branch in branch_value
}

Complex MomentumWavefunction::branch_value(Sector sigma, double p) const {
  Complex value;
  if (const auto* sum = std::get_if<std::shared_ptr<const Superposition>>(&repr_)) {
    for (const auto& c : (*sum)->components) value += c.weight * c.psi->branch_value(sigma, p);
  } else {
    value = base_value(p);
  }
  if (shift_ != 0.0 || free_time_ != 0.0) {
    value *= std::exp(Complex(0.0, -(p * shift_ + 0.5 * p * p * free_time_)));
  }
  const Complex f = factor_[index(sigma)];
  if (f != Complex{1.0}) value *= f;
  return value;
}

Complex MomentumWavefunction::evaluate(double p) const {
  if (p > 0.0) return branch_value(Sector::plus, p);
  if (p < 0.0) return branch_value(Sector::minus, p);
  return 0.5 * (branch_value(Sector::plus, p) + branch_value(Sector::minus, p));
}

MomentumWavefunction MomentumWavefunction::translated(double x_shift) const {
  MomentumWavefunction out = *this;
  if (auto* g = std::get_if<Gaussian>(&out.repr_)) {
    g->x_c += x_shift;
  } else {
    out.shift_ += x_shift;
  }
  return out;
}

MomentumWavefunction MomentumWavefunction::evolved(double dt, double mass) const {
  if (!(mass > 0.0)) throw InvalidParameter("mass must be positive");
  MomentumWavefunction out = *this;
  out.free_time_ += dt / mass;
  return out;
}

MomentumWavefunction MomentumWavefunction::with_branch_factor(Sector s, Complex factor) const {
  MomentumWavefunction out = *this;
  out.factor_[index(s)] *= factor;
  return out;
}

MomentumWavefunction MomentumWavefunction::scaled(Complex factor) const {
  MomentumWavefunction out = *this;
  out.factor_[0] *= factor;
  out.factor_[1] *= factor;
  return out;
}

MomentumWavefunction gaussian(double p0, double sigma_p, double x_c) {
  if (!(sigma_p > 0.0) || !std::isfinite(sigma_p)) {
    throw InvalidParameter("gaussian: sigma_p must be positive, got " + std::to_string(sigma_p));
  }
  if (!std::isfinite(p0) || !std::isfinite(x_c)) {
    throw InvalidParameter("gaussian: p0 and x_c must be finite");
  }
  return MomentumWavefunction(MomentumWavefunction::Gaussian{p0, sigma_p, x_c});
}

MomentumWavefunction tabulated(const MomentumGrid& grid, std::vector<Complex> amplitudes) {
  if (amplitudes.size() != grid.size()) {
    throw InvalidParameter("tabulated: " + std::to_string(amplitudes.size()) +
                           " amplitudes for a grid of " + std::to_string(grid.size()) + " points");
  }
  return MomentumWavefunction(MomentumWavefunction::Tabulated{
      grid, std::make_shared<const std::vector<Complex>>(std::move(amplitudes))});
}

MomentumWavefunction superpose(
    const std::vector<std::pair<Complex, MomentumWavefunction>>& parts) {
  if (parts.empty()) throw InvalidParameter("superpose: no components");
  auto sum = std::make_shared<MomentumWavefunction::Superposition>();
  sum->components.reserve(parts.size());
  for (const auto& [w, psi] : parts) {
    sum->components.push_back({w, std::make_shared<const MomentumWavefunction>(psi)});
  }
  return MomentumWavefunction(std::shared_ptr<const MomentumWavefunction::Superposition>(sum));
}

Complex evaluate(const MomentumWavefunction& psi, double p) { return psi.evaluate(p); }

double norm_squared(const MomentumWavefunction& psi, const MomentumGrid& grid) {
  const std::size_t n = grid.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
    sum += w * std::norm(psi.evaluate(grid.node(k)));
  }
  return sum * grid.spacing();
}

MomentumWavefunction translate(const MomentumWavefunction& psi, double x_shift) {
  return psi.translated(x_shift);
}

MomentumWavefunction time_evolve(const MomentumWavefunction& psi, double dt, double mass) {
  return psi.evolved(dt, mass);
}

std::optional<MomentumGrid> recommended_grid(const MomentumWavefunction& psi,
                                             std::size_t n_points) {
  const auto& repr = psi.representation();
  if (const auto* g = std::get_if<MomentumWavefunction::Gaussian>(&repr)) {
    return MomentumGrid::covering(g->p0, g->sigma_p, n_points);
  }
  if (const auto* t = std::get_if<MomentumWavefunction::Tabulated>(&repr)) return t->grid;
  const auto& sum = std::get<std::shared_ptr<const MomentumWavefunction::Superposition>>(repr);
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& c : sum->components) {
    auto g = recommended_grid(*c.psi, n_points);
    if (!g) return std::nullopt;
    lo = first ? g->p_min() : std::min(lo, g->p_min());
    hi = first ? g->p_max() : std::max(hi, g->p_max());
    first = false;
  }
  return MomentumGrid(lo, hi, n_points);
}

}  // namespace toa
