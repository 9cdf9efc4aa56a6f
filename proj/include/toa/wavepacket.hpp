#pragma once

// Momentum-space wavefunctions psi0(p): the free data that selects a physical
// state. Units have hbar = 1.

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace toa {

using Complex = std::complex<double>;

/// Momentum-sign branch of the constraint solutions.
enum class Sector { plus, minus };

inline constexpr std::array<Sector, 2> kSectors{Sector::plus, Sector::minus};

constexpr double sign(Sector s) noexcept { return s == Sector::plus ? 1.0 : -1.0; }
constexpr std::size_t index(Sector s) noexcept { return s == Sector::plus ? 0 : 1; }
constexpr Sector opposite(Sector s) noexcept {
  return s == Sector::plus ? Sector::minus : Sector::plus;
}
const char* to_string(Sector s) noexcept;

/// Uniform momentum grid with at least 16 nodes.
///
/// Nodes are generated from whichever end is closer so that a mirrored grid
/// [-b, -a] produces bit-for-bit negated nodes of [a, b].
class MomentumGrid {
 public:
  static constexpr std::size_t kMinPoints = 16;

  MomentumGrid(double p_min, double p_max, std::size_t n_points);

  double p_min() const noexcept { return p_min_; }
  double p_max() const noexcept { return p_max_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return dp_; }
  double node(std::size_t k) const noexcept;
  std::vector<double> nodes() const;
  bool contains(double p) const noexcept;

  /// Grid spanning [p0 - 8 sigma, p0 + 8 sigma].
  static MomentumGrid covering(double p0, double sigma_p, std::size_t n_points);

  friend bool operator==(const MomentumGrid&, const MomentumGrid&) = default;

 private:
  double p_min_;
  double p_max_;
  std::size_t n_;
  double dp_;
};

class MomentumWavefunction;

struct WeightedComponent {
  Complex weight;
  std::shared_ptr<const MomentumWavefunction> psi;
};

/// psi0(p) in one of three representations, plus a stack of exact pointwise
/// modifiers (translation, free evolution, per-branch factors) applied lazily
/// at evaluation time.
class MomentumWavefunction {
 public:
  /// (2 pi sigma^2)^(-1/4) exp(-(p - p0)^2 / (4 sigma^2)) exp(-i p x_c)
  struct Gaussian {
    double p0;
    double sigma_p;
    double x_c;
  };
  struct Tabulated {
    MomentumGrid grid;
    std::shared_ptr<const std::vector<Complex>> values;
  };
  struct Superposition {
    std::vector<WeightedComponent> components;
  };
  using Representation =
      std::variant<Gaussian, Tabulated, std::shared_ptr<const Superposition>>;

  explicit MomentumWavefunction(Representation repr);

  /// Full-line value. p = 0 belongs to neither branch and returns the branch mean.
  Complex evaluate(double p) const;

  /// Value of the sigma-branch continuation at any p: identical to evaluate()
  /// on the sigma side, and used to extend a branch across p = 0 for quadrature.
  Complex branch_value(Sector sigma, double p) const;

  const Representation& representation() const noexcept { return repr_; }
  double shift() const noexcept { return shift_; }
  double free_time() const noexcept { return free_time_; }
  Complex branch_factor(Sector s) const noexcept { return factor_[index(s)]; }

  MomentumWavefunction translated(double x_shift) const;
  MomentumWavefunction evolved(double dt, double mass) const;
  MomentumWavefunction with_branch_factor(Sector s, Complex factor) const;
  MomentumWavefunction scaled(Complex factor) const;

 private:
  Complex base_value(double p) const;

  Representation repr_;
  double shift_ = 0.0;      // exp(-i p shift)
  double free_time_ = 0.0;  // sum of dt/m; exp(-i p^2 free_time / 2)
  std::array<Complex, 2> factor_{Complex{1.0}, Complex{1.0}};
};

MomentumWavefunction gaussian(double p0, double sigma_p, double x_c);
MomentumWavefunction tabulated(const MomentumGrid& grid, std::vector<Complex> amplitudes);
MomentumWavefunction superpose(const std::vector<std::pair<Complex, MomentumWavefunction>>& parts);

Complex evaluate(const MomentumWavefunction& psi, double p);

/// Trapezoid estimate of the integral of |psi|^2 over the grid.
double norm_squared(const MomentumWavefunction& psi, const MomentumGrid& grid);

/// <p|T(x')|psi> = exp(-i x' p) psi(p)
MomentumWavefunction translate(const MomentumWavefunction& psi, double x_shift);

/// Multiplies by exp(-i p^2 dt / (2m)). Throws InvalidParameter for m <= 0.
MomentumWavefunction time_evolve(const MomentumWavefunction& psi, double dt, double mass);

/// Grid covering the numerically significant support, when it can be known
/// analytically. Tabulated forms report their own grid.
std::optional<MomentumGrid> recommended_grid(const MomentumWavefunction& psi,
                                             std::size_t n_points);

/// Trapezoid weights for arbitrary increasing nodes.
std::vector<double> trapezoid_weights(const std::vector<double>& nodes);

}  // namespace toa
