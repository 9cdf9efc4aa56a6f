#pragma once

// Scenario files: JSON description of a state, grids, arrival positions and
// requested densities.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "toa/errors.hpp"
#include "toa/oscillatory.hpp"
#include "toa/wavepacket.hpp"

namespace toa {

/// Schema violation; `path()` is the offending field, e.g. "momentum_grid.n_points".
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

enum class DensityMethod { relational, flux, semiclassical };
const char* to_string(DensityMethod m) noexcept;

/// Extra relational density computed with a phase applied to one sector.
struct PhaseVariant {
  std::string name;
  Sector sector;
  double phase;
};

struct ScenarioConfig {
  double mass;
  MomentumWavefunction wavepacket;
  MomentumGrid momentum_grid;
  TimeGrid time_grid;
  std::vector<double> arrival_positions;
  std::vector<DensityMethod> methods;
  QuadratureMethod quadrature;
  std::filesystem::path output_dir;
  std::vector<PhaseVariant> phase_variants;
  std::optional<std::filesystem::path> export_wavefunction;
  std::string echo;  // the validated input, re-serialized
};

/// Relative paths inside the document resolve against base_dir.
ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);
ScenarioConfig load_config(const std::filesystem::path& file);

/// Canonical demo: gaussian(5, 0.5, 0), m = 1, x0 = 10, t in [0, 4] x 2048.
std::string demo_config_json();

/// Two-column complex CSV with header "p,re,im" on a uniform grid.
MomentumWavefunction read_tabulated_csv(const std::filesystem::path& file);
void write_tabulated_csv(const std::filesystem::path& file, const MomentumWavefunction& psi,
                         const MomentumGrid& grid);

}  // namespace toa
