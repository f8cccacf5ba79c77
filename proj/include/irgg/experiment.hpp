#pragma once

// Runs one configured experiment and writes its CSV rows and JSON manifest.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "irgg/config.hpp"

namespace irgg {

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::optional<unsigned> threads;
};

struct RunReport {
  std::vector<std::string> files;  // CSV outputs, main table first
  std::string manifest;
  std::size_t rows = 0;
  double runtime_ms = 0.0;
};

/// Column names of the main CSV for a kind, in output order.
std::vector<std::string> csv_columns(ExperimentKind kind);

/// Writes <out>/<name>.csv (plus <name>_trail.csv for mc-interval) and
/// <out>/<name>.manifest.json. Rows are flushed as they complete. On failure
/// the manifest records the error and the exception propagates.
RunReport run_experiment(ExperimentConfig cfg, const RunOverrides& overrides,
                         std::ostream* log = nullptr);

}  // namespace irgg
