#pragma once

// Fast invariant checks at tiny sizes, grouped by module.

#include <iosfwd>
#include <string>
#include <vector>

namespace irgg {

struct SelfcheckOptions {
  /// Test hook: flips every numeric tolerance negative so value checks fail.
  bool corrupt_tolerance = false;
};

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& options = {});

/// One "PASS|FAIL module: name" line per check plus a per-module summary.
/// Returns true when everything passed.
bool print_selfcheck(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace irgg
