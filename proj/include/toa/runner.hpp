#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "toa/config.hpp"

namespace toa {

struct RunOutcome {
  std::vector<std::filesystem::path> files;
  std::filesystem::path manifest;
};

/// Writes toa_x0_<i>.csv per arrival position and manifest.json into the
/// output directory. All densities are computed before anything is written.
RunOutcome run_toa(const ScenarioConfig& config);

/// Writes compare.csv with total-variation and peak-shift distances between
/// every pair of requested densities (methods, then phase variants).
/// Throws ConfigError when fewer than two densities are requested.
RunOutcome run_compare(const ScenarioConfig& config);

/// Fixed 12-significant-digit rendering used in every CSV.
std::string format_value(double v);

}  // namespace toa
