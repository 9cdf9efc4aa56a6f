#pragma once

// Arrival-time densities: the relational one and the comparison baselines.

#include <optional>
#include <vector>

#include "toa/oscillatory.hpp"
#include "toa/physical_state.hpp"

namespace toa {

struct TimeDensity {
  TimeGrid grid;
  std::vector<double> total;
  std::vector<double> plus;
  std::vector<double> minus;
  double mass_captured = 0.0;

  const std::vector<double>& sector(Sector s) const noexcept {
    return s == Sector::plus ? plus : minus;
  }
};

/// P_sigma(t) = |A_sigma(t)|^2 / (2 pi); total = plus + minus.
TimeDensity relational_toa(const PhysicalState& s, double x0, const TimeGrid& tg,
                           QuadratureMethod method = QuadratureMethod::direct_trapezoid,
                           const EngineOptions& options = {});

/// psi(x0, t) = (2 pi)^(-1/2) int dp psi0(p) exp(i p x0 - i p^2 t / (2m)).
std::vector<Complex> wavefunction_at(const PhysicalState& s, double x0, const TimeGrid& tg);

/// |psi(x, t)|^2 on xg. Throws ResolutionError for "phase_resolution" or
/// "position_bandwidth" when the momentum grid cannot support xg.
std::vector<double> position_density(const PhysicalState& s, const PositionGrid& xg, double t);

/// Probability current J(x0, t) = Im(conj(psi) d_x psi) / m. Not a probability: may be negative.
std::vector<double> flux_toa(const PhysicalState& s, double x0, const TimeGrid& tg);

/// (m |x0| / t^2) |psi0(m x0 / t)|^2 for t > 0, else 0. Throws UndefinedMap for x0 = 0.
std::vector<double> semiclassical_toa(const PhysicalState& s, double x0, const TimeGrid& tg);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double mass_captured = 0.0;
  bool reliable = false;  // mass_captured >= 0.99
};

/// Trapezoid moments normalized by the captured mass. Throws UndefinedMoments
/// when no mass is captured.
Moments moments(const TimeDensity& d);
Moments moments(const TimeGrid& tg, const std::vector<double>& density);

struct NaiveCrosscheck {
  double lhs = 0.0;  // (1/2pi) int_tg |psi(x0,t)|^2 dt
  double rhs = 0.0;  // naive reduction norm
  double rel_dev = 0.0;
  double edge_density_low = 0.0;   // |psi(x0, t_min)|^2
  double edge_density_high = 0.0;  // |psi(x0, t_max)|^2
  double tail_estimate = 0.0;      // stationary-phase estimate of the lhs mass outside tg
};

NaiveCrosscheck naive_norm_crosscheck(const PhysicalState& s, double x0, const TimeGrid& tg);

double trapezoid(const TimeGrid& tg, const std::vector<double>& f);
/// (1/2) int |a - b| dt
double total_variation(const TimeGrid& tg, const std::vector<double>& a,
                       const std::vector<double>& b);
/// Grid time of the first maximum.
double peak_time(const TimeGrid& tg, const std::vector<double>& f);

/// g(t_k) = f(t_k + shift), cubic Lagrange interpolation (exact index shift when
/// shift is a multiple of the spacing). Points whose stencil leaves the grid are NaN.
std::vector<double> resample_shifted(const TimeGrid& tg, const std::vector<double>& f,
                                     double shift);

/// Plus-only two-packet state psi0 ~ g(p1, width) + a e^{i phi} g(p2, width), normalized.
PhysicalState two_packet_state(double mass, const MomentumGrid& grid, double p1, double p2,
                               double width, double amplitude, double phase);

struct BackflowWitness {
  double amplitude = 0.0;
  double phase = 0.0;
  double min_flux = 0.0;
  double t_at_min = 0.0;
};

/// Scans amplitude in (0, 1) and phase in [0, 2 pi) for the most negative flux at x0.
std::optional<BackflowWitness> scan_backflow(double mass, const MomentumGrid& grid, double p1,
                                             double p2, double width, double x0,
                                             const TimeGrid& tg, std::size_t n_amplitude = 9,
                                             std::size_t n_phase = 8);

}  // namespace toa
