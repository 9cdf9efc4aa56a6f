#pragma once

// Constraint solutions of the free particle, stored through psi0(p) and split
// into the two momentum-sign sectors.

#include <memory>
#include <numbers>
#include <vector>

#include "toa/wavepacket.hpp"

namespace toa {

/// Normalization of the covariant clock POVM when the spectrum of H_C covers the negative axis.
inline constexpr double kClockNormalization = 0.5 / std::numbers::pi;

struct SectorWeights {
  double plus = 0.0;
  double minus = 0.0;

  double operator[](Sector s) const noexcept { return s == Sector::plus ? plus : minus; }
  double total() const noexcept { return plus + minus; }
};

/// Quadrature view of one sector on q = |p| >= 0: the grid nodes on the sector
/// side with their full-line trapezoid weights. A node at p = 0 belongs to
/// both sectors with half its weight each, so the two sector rules add up to
/// the full-line rule.
struct SectorSamples {
  Sector sigma = Sector::plus;
  std::vector<double> q;
  std::vector<double> weight;
  std::vector<Complex> value;  // psi0(sigma q)
  double max_spacing = 0.0;
  bool has_origin = false;      // p = 0 is a grid node
  bool reaches_origin = false;  // the grid straddles or touches p = 0

  bool empty() const noexcept { return q.empty(); }
  std::size_t size() const noexcept { return q.size(); }
  double q_max() const noexcept { return q.empty() ? 0.0 : q.back(); }
};

class PhysicalState {
 public:
  /// No normalization is applied; used for projections and reconstructions.
  static PhysicalState unnormalized(MomentumWavefunction psi0, double mass,
                                    const MomentumGrid& grid);

  double mass() const noexcept { return data_->mass; }
  const MomentumWavefunction& psi0() const noexcept { return data_->psi0; }
  const MomentumGrid& grid() const noexcept { return data_->grid; }
  const SectorWeights& sector_weights() const noexcept { return data_->weights; }
  double weight(Sector s) const noexcept { return data_->weights[s]; }
  const SectorSamples& samples(Sector s) const noexcept { return data_->sectors[index(s)]; }

  /// Factor applied to the supplied psi0 by lift (1 if none).
  double normalization_factor() const noexcept { return data_->scale; }
  /// True when lift had to correct the norm by more than 1e-6.
  bool renormalized() const noexcept { return data_->renormalized; }

 private:
  struct Data {
    double mass;
    MomentumWavefunction psi0;
    MomentumGrid grid;
    SectorWeights weights;
    std::array<SectorSamples, 2> sectors;
    double scale = 1.0;
    bool renormalized = false;
  };

  explicit PhysicalState(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  friend PhysicalState lift(const MomentumWavefunction&, double, const MomentumGrid&);

  std::shared_ptr<const Data> data_;
};

/// Sector quadrature for psi0 on grid; exposed for code that needs the samples
/// without building a state.
SectorSamples sector_samples(const MomentumWavefunction& psi0, const MomentumGrid& grid,
                             Sector sigma);

/// Builds a normalized state. Throws InvalidState for zero norm.
PhysicalState lift(const MomentumWavefunction& psi0, double mass, const MomentumGrid& grid);

/// Sector-wise overlap sum_sigma int dq conj(psi0_a(sigma q)) phi0_b(sigma q).
Complex physical_inner_product(const PhysicalState& a, const PhysicalState& b);

PhysicalState sector_project(const PhysicalState& s, Sector sigma);
PhysicalState apply_sector_phase(const PhysicalState& s, Sector sigma, double phase);

}  // namespace toa
