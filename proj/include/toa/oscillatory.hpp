#pragma once

// Batched evaluation of the arrival amplitudes
//   A_sigma(t; x0) = int_0^inf dq sqrt(q/m) psi0(sigma q) exp(i (sigma q x0 - q^2 t / (2m)))

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toa/errors.hpp"
#include "toa/physical_state.hpp"

namespace toa {

template <class Tag>
class UniformAxis {
 public:
  UniformAxis(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw InvalidParameter(std::string(Tag::name) + " grid requires finite min < max");
    }
    if (n < 2) throw InvalidParameter(std::string(Tag::name) + " grid requires at least 2 points");
    step_ = (hi - lo) / static_cast<double>(n - 1);
  }

  double min() const noexcept { return lo_; }
  double max() const noexcept { return hi_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return step_; }
  double at(std::size_t k) const noexcept { return lo_ + static_cast<double>(k) * step_; }
  std::vector<double> values() const {
    std::vector<double> v(n_);
    for (std::size_t k = 0; k < n_; ++k) v[k] = at(k);
    return v;
  }
  double max_abs() const noexcept { return std::max(std::abs(lo_), std::abs(hi_)); }

  friend bool operator==(const UniformAxis&, const UniformAxis&) = default;

 private:
  double lo_;
  double hi_;
  std::size_t n_;
  double step_ = 0.0;
};

struct TimeAxisTag {
  static constexpr const char* name = "time";
};
struct PositionAxisTag {
  static constexpr const char* name = "position";
};
using TimeGrid = UniformAxis<TimeAxisTag>;
using PositionGrid = UniformAxis<PositionAxisTag>;

enum class QuadratureMethod { direct_trapezoid, energy_transform };

const char* to_string(QuadratureMethod m) noexcept;
std::optional<QuadratureMethod> parse_quadrature(std::string_view name);

/// Largest phase advance of the integrand across one momentum panel, against
/// its limit pi/4.
struct ResolutionMargin {
  std::string guard;
  double value = 0.0;
  double limit = 0.0;
  bool ok() const noexcept { return value < limit; }
};

/// dq_max * (q_max * max|t| / m + |x0|) for one sector.
ResolutionMargin phase_resolution(const PhysicalState& s, Sector sigma, double x0,
                                  const TimeGrid& tg);
/// Throws ResolutionError("phase_resolution") when the margin is violated.
void require_phase_resolution(const PhysicalState& s, Sector sigma, double x0,
                              const TimeGrid& tg);

struct EngineOptions {
  double du = 0.0;  // energy-transform spacing in u = q^2; 0 picks it from the phase rates
};

/// S_k = sum_j c_j exp(i (phi_j + k theta_j)), k = 0..n-1. Phases advance by
/// recurrence and are recomputed exactly every 64 steps; the result does not
/// depend on the number of worker threads.
std::vector<Complex> phase_sweep(const std::vector<Complex>& c, const std::vector<double>& phi,
                                 const std::vector<double>& theta, std::size_t n);

/// S_k = sum_n a_n exp(-i alpha n k), k = 0..k_count-1, by Bluestein's algorithm.
std::vector<Complex> chirp_z(const std::vector<Complex>& a, double alpha, std::size_t k_count);

/// u spacing used by the energy transform when EngineOptions::du is 0.
double default_energy_spacing(double q_max, double x0, const TimeGrid& tg, double mass);

std::vector<Complex> toa_amplitude_batch(const PhysicalState& s, Sector sigma, double x0,
                                         const TimeGrid& tg, QuadratureMethod method,
                                         const EngineOptions& options = {});

/// max_t | |A_direct|^2 - |A_transform|^2 | / max_t |A_direct|^2; 0 for a sector that is
/// empty or holds less than 1e-16 of the norm.
double method_crosscheck(const PhysicalState& s, Sector sigma, double x0, const TimeGrid& tg,
                         const EngineOptions& options = {});

}  // namespace toa
