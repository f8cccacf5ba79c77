#pragma once

// Simulation-certified bounds on the percolation threshold. A bond of a
// 1-dependent square lattice is attached to each 2D x D rectangle R made of
// two D x D squares S1, S2; the bond state is a deterministic function of the
// points inside R. When the bond-open probability is certified to exceed
// 0.8639 by an exact binomial confidence bound, the lattice percolates:
//   upper_merge     greedy mutual components of S1 and S2 join
//   upper_crossing  the greedy mutual component of R crosses R' horizontally
//                   and S1' vertically in both graphs
//   lower_vacant    after dropping nodes with no other-graph node within dep,
//                   the vacant space of one graph crosses R' and S1'
// R' and S1' are R and S1 shrunk by an inset on every side.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "irgg/analytic_bounds.hpp"
#include "irgg/spatial.hpp"

namespace irgg {

enum class BondVariant { upper_merge, upper_crossing, lower_vacant };

const char* to_string(BondVariant v);

struct BondTrialConfig {
  double side = 10.0;  // D
  BondVariant variant = BondVariant::upper_merge;
  BoundQuery query;
  /// Overrides the variant's default inset when set.
  std::optional<double> inset;

  Window rect() const { return {0.0, 0.0, 2.0 * side, side}; }
  Window square1() const { return {0.0, 0.0, side, side}; }
  Window square2() const { return {side, 0.0, 2.0 * side, side}; }

  /// Inset used for graph `which` (1 or 2): max(d1, d2) + dep for
  /// upper_crossing, d_which + dep for lower_vacant, 0 for upper_merge.
  double inset_for(int which) const;
  /// R' and S1' for a given inset.
  Window inner_rect(double d) const { return {d, d, 2.0 * side - d, side - d}; }
  Window inner_square(double d) const { return {d, d, side - d, side - d}; }
};

/// Throws std::invalid_argument on non-positive side or distances, negative
/// densities, or an inset with 2 * inset >= side.
void validate(const BondTrialConfig& cfg);

struct TrialPoints {
  PointSet g1;
  PointSet g2;
};

/// Both Poisson processes on R, drawn from one stream.
TrialPoints sample_trial_points(const BondTrialConfig& cfg, RngStream& rng);

// The evaluate_* functions clip their inputs to R before doing anything else,
// so points outside R never influence the outcome.
bool evaluate_upper_merge(const BondTrialConfig& cfg, const PointSet& g1, const PointSet& g2);
bool evaluate_upper_crossing(const BondTrialConfig& cfg, const PointSet& g1, const PointSet& g2);
bool evaluate_lower_vacant(const BondTrialConfig& cfg, const PointSet& g1, const PointSet& g2,
                           int which_graph);

bool trial_upper_merge(const BondTrialConfig& cfg, RngStream& rng);
bool trial_upper_crossing(const BondTrialConfig& cfg, RngStream& rng);
bool trial_lower_vacant(const BondTrialConfig& cfg, RngStream& rng, int which_graph);

/// Density of G1 nodes with at least one G2 node within dep:
/// lam1 (1 - e^{-lam2 pi dep^2}).
double effective_density(double lam1, double lam2, double dep);

struct ConfidenceVerdict {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double threshold_p = kOneDependentThreshold;
  double confidence = 0.995;
  /// One-sided exact (Clopper-Pearson) lower confidence bound on p.
  double lower_bound = 0.0;
  bool accepted = false;
};

/// Throws std::invalid_argument unless failures <= trials and 0 < confidence < 1.
ConfidenceVerdict confidence_verdict(std::size_t trials, std::size_t failures,
                                     double threshold_p = kOneDependentThreshold,
                                     double confidence = 0.995);

struct BatchTally {
  std::size_t trials = 0;
  std::size_t open = 0;     // graph 1 for lower_vacant
  std::size_t open_g2 = 0;  // lower_vacant only
};

/// Runs `trials` independent trials of cfg.variant. Trial t uses stream
/// make_stream_id(tag, point, t) of `seed`, so tallies do not depend on the
/// thread count.
BatchTally run_bond_batch(const BondTrialConfig& cfg, std::size_t trials, std::uint64_t seed,
                          std::uint32_t point, unsigned threads = 0);

struct SearchOptions {
  double step = 0.05;
  int coarse_every = 5;
  double lam1_max = 20.0;
  std::size_t trials = 100;
  double threshold_p = kOneDependentThreshold;
  double confidence = 0.995;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::optional<double> inset;
};

struct GridTally {
  double lam1 = 0.0;
  std::size_t trials = 0;
  /// Closed bonds (graph 1 for lower_vacant).
  std::size_t failures = 0;
  /// Graph-2 closed bonds for lower_vacant; 0 otherwise.
  std::size_t failures_g2 = 0;
  bool accepted = false;
};

struct SearchResult {
  BondVariant variant = BondVariant::upper_merge;
  std::optional<double> lam1;
  std::vector<GridTally> trail;
};

/// Upper variants: smallest grid lam1 (multiples of step) whose verdict
/// accepts. lower_vacant: largest grid lam1 accepted for at least one graph
/// below the first rejection. Coarse grid first, then the fine grid inside the
/// bracketing coarse interval. lam1 is nullopt when the range is exhausted.
SearchResult search_threshold(BondVariant variant, double lam2, const Geometry& geometry,
                              double side, const SearchOptions& options);

struct IntervalResult {
  SearchResult upper_merge;
  SearchResult upper_crossing;
  SearchResult lower;

  /// Smaller of the two upper searches.
  std::optional<double> upper() const;
};

IntervalResult confidence_interval(double lam2, const Geometry& geometry, double side,
                                   const SearchOptions& options);

}  // namespace irgg
