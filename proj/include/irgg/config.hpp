#pragma once

// Experiment configuration: an INI file with one section per concern. See
// configs/README.md for the keys each experiment kind reads.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "irgg/analytic_bounds.hpp"
#include "irgg/mc_bounds.hpp"
#include "irgg/robustness.hpp"

namespace irgg {

/// Invalid or inconsistent configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { table1, table2, analytic_curve, mc_interval, attack, supply };

const char* to_string(ExperimentKind k);

struct DensityRow {
  double lam1 = 0.0;
  double lam2 = 0.0;
  Geometry geometry;
};

struct AttackEntry {
  std::string label;
  AttackSpec spec;
};

struct SupplySettings {
  double area = 0.0;
  int k1 = 1;
  int k2 = 1;
  /// Distribution of the number of G2 supplies a G1 node needs; point mass k2
  /// when absent.
  std::optional<SupplyPmf> k2_pmf;
  std::size_t trials = 20000;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::table1;
  std::string name;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string output_dir = "results";

  Geometry geometry;
  double window = 10.0;
  int seeds = 5;
  std::vector<DensityRow> rows;

  BoundId bound = BoundId::small_ratio;
  std::vector<double> lam2_grid;

  double side = 0.0;  // D; 0 means 10 * max(d1, d2)
  SearchOptions search;

  ModelParams model;
  std::vector<AttackEntry> attacks;

  SupplySettings supply;

  /// Every key read, as "section.key" -> raw text, in file order.
  std::vector<std::pair<std::string, std::string>> echo;
};

/// Parses and validates; throws ConfigError with the offending key or the
/// violated hypothesis in the message.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

}  // namespace irgg
