#include "toa/physical_state.hpp"

#include <cmath>
#include <string>

#include "toa/errors.hpp"

namespace toa {

SectorSamples sector_samples(const MomentumWavefunction& psi0, const MomentumGrid& grid,
                             Sector sigma) {
  SectorSamples out;
  out.sigma = sigma;
  const double sg = sign(sigma);
  const std::size_t n = grid.size();
  const double dp = grid.spacing();
  out.max_spacing = dp;

  // Full-line trapezoid weights restricted to the sector; a node at p = 0 is
  // shared, half to each side, so the two sectors partition the full rule.
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = sigma == Sector::plus ? j : n - 1 - j;
    const double p = grid.node(k);
    const double w = (k == 0 || k + 1 == n) ? 0.5 * dp : dp;
    if (p == 0.0) {
      out.q.push_back(0.0);
      out.weight.push_back(0.5 * w);
      out.value.push_back(psi0.branch_value(sigma, 0.0));
      out.has_origin = true;
    } else if (sg * p > 0.0) {
      out.q.push_back(std::abs(p));
      out.weight.push_back(w);
      out.value.push_back(psi0.branch_value(sigma, p));
    }
  }
  out.reaches_origin = out.has_origin || (grid.p_min() < 0.0 && grid.p_max() > 0.0);
  if (out.q.empty()) out.reaches_origin = false;
  return out;
}

namespace {

double sector_norm(const SectorSamples& s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) sum += s.weight[i] * std::norm(s.value[i]);
  return sum;
}

}  // namespace

PhysicalState PhysicalState::unnormalized(MomentumWavefunction psi0, double mass,
                                          const MomentumGrid& grid) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw InvalidParameter("mass must be positive, got " + std::to_string(mass));
  }
  auto data = std::make_shared<Data>(Data{mass, std::move(psi0), grid, {}, {}, 1.0, false});
  for (Sector s : kSectors) data->sectors[index(s)] = sector_samples(data->psi0, grid, s);
  data->weights.plus = sector_norm(data->sectors[0]);
  data->weights.minus = sector_norm(data->sectors[1]);
  return PhysicalState(std::move(data));
}

PhysicalState lift(const MomentumWavefunction& psi0, double mass, const MomentumGrid& grid) {
  const PhysicalState raw = PhysicalState::unnormalized(psi0, mass, grid);
  const double n2 = raw.sector_weights().total();
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw InvalidState("cannot lift a wavefunction with zero norm on the grid");
  }
  const double scale = 1.0 / std::sqrt(n2);
  PhysicalState out = PhysicalState::unnormalized(psi0.scaled(scale), mass, grid);
  auto data = std::make_shared<PhysicalState::Data>(*out.data_);
  data->scale = scale;
  data->renormalized = std::abs(n2 - 1.0) > 1e-6;
  return PhysicalState(std::move(data));
}

Complex physical_inner_product(const PhysicalState& a, const PhysicalState& b) {
  if (a.mass() != b.mass()) {
    throw IncompatibleStates("mass mismatch: " + std::to_string(a.mass()) + " vs " +
                             std::to_string(b.mass()));
  }
  if (!(a.grid() == b.grid())) throw IncompatibleStates("momentum grids differ");
  Complex sum;
  for (Sector s : kSectors) {
    const SectorSamples& x = a.samples(s);
    const SectorSamples& y = b.samples(s);
    for (std::size_t i = 0; i < x.size(); ++i) sum += x.weight[i] * std::conj(x.value[i]) * y.value[i];
  }
  return sum;
}

PhysicalState sector_project(const PhysicalState& s, Sector sigma) {
  return PhysicalState::unnormalized(s.psi0().with_branch_factor(opposite(sigma), 0.0), s.mass(),
                                     s.grid());
}

PhysicalState apply_sector_phase(const PhysicalState& s, Sector sigma, double phase) {
  if (phase == 0.0) return s;
  return PhysicalState::unnormalized(
      s.psi0().with_branch_factor(sigma, std::polar(1.0, phase)), s.mass(), s.grid());
}

}  // namespace toa
