#pragma once

// Page-Wootters reductions: system conditioned on the clock, clock conditioned
// on the particle position (per sector), the naive cross-sector reduction,
// and the general sector-wise kernel family.

#include <functional>
#include <vector>

#include "toa/physical_state.hpp"

namespace toa {

/// psi_{S|C}(t): the state evolved by t.
MomentumWavefunction conditional_system_state(const PhysicalState& s, double t);

/// Clock state of one sector, sampled on q = |p|.
///
/// `wave` is chi expressed against the measure dq, so that the clock amplitude
/// is A(q) = sqrt(q/m) * wave(q) and the clock norm is int |wave|^2 dq.
struct ConditionalClockState {
  Sector sigma = Sector::plus;
  double label = 0.0;  // x0 for position reductions, y for general kernels
  double mass = 1.0;
  MomentumGrid grid{0.0, 1.0, MomentumGrid::kMinPoints};
  std::vector<double> q;
  std::vector<double> weight;
  std::vector<Complex> wave;
  bool endpoint_dropped = false;

  std::vector<Complex> amplitudes() const;
  double norm_squared() const;
};

ConditionalClockState position_reduce(const PhysicalState& s, double x0, Sector sigma);

/// Sector component psi0(sigma q) = wave(q) exp(-i sigma q x0) on the source
/// grid; zero on the other side. A p = 0 node receives half of the origin
/// value so that the two sector inverses sum to the original.
PhysicalState inverse_position_reduce(const ConditionalClockState& c);

/// Sum of the two sector inverses.
PhysicalState inverse_position_reduce(const ConditionalClockState& plus,
                                      const ConditionalClockState& minus);

/// F(eps) = sum_sigma (m/|p|) psi0(p) exp(i p x0) / sqrt(2 pi), p = sigma sqrt(-2 m eps).
struct NaiveReduction {
  std::vector<double> q;        // j * dp, j >= 1
  std::vector<double> epsilon;  // -q^2 / (2m)
  std::vector<Complex> amplitude;
  double norm_squared = 0.0;    // int |F|^2 d eps
};

NaiveReduction naive_reduce(const PhysicalState& s, double x0);

/// r_sigma(y, p) = Theta(sigma p) weight(sigma, p) exp(i phase(sigma, p, y)).
struct ReductionKernel {
  std::function<double(Sector, double)> weight;
  std::function<double(Sector, double, double)> phase;

  /// sqrt(sigma p / m): the isometric choice.
  static ReductionKernel isometric(double mass);
  static ReductionKernel flat();
  /// sqrt(sigma p / m) * (1 + amplitude * sin p)
  static ReductionKernel perturbed(double mass, double amplitude);

  /// phase = -y p (position reduction at y).
  ReductionKernel with_position_phase() const;
  /// phase = -p^2 y / (2m) (covariant time reduction at y).
  ReductionKernel with_time_phase(double mass) const;
  /// Adds a y-independent phase.
  ReductionKernel with_extra_phase(std::function<double(Sector, double)> extra) const;
};

/// Applies <r_sigma(y)| to the sector. Throws SectorViolation if the kernel
/// weight is nonzero on any grid node of the other sector. A q = 0 node is
/// dropped (and flagged) when weight/sqrt(q) diverges there.
ConditionalClockState general_reduce(const PhysicalState& s, const ReductionKernel& kernel,
                                     double y, Sector sigma);

}  // namespace toa
