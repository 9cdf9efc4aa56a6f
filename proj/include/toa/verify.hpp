#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace toa {

enum class VerifyLevel { quick, full };

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::quick;
  /// Test-only fault: "sector-weight-sign" combines the two sectors with a
  /// relative sign inside one amplitude instead of summing their densities.
  std::string inject_fault;
};

struct InvariantResult {
  std::string id;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  VerifyLevel level = VerifyLevel::quick;
  std::vector<InvariantResult> results;
  double seconds = 0.0;

  bool all_passed() const noexcept;
  std::string to_json() const;
};

/// Momentum grid size used by a level (1024 quick, 8192 full).
std::size_t verify_grid_points(VerifyLevel level) noexcept;

std::vector<std::string> invariant_ids();

/// Runs every invariant, printing one line per result to `log` when given.
VerifyReport run_verify(const VerifyOptions& options, std::ostream* log = nullptr);

}  // namespace toa
