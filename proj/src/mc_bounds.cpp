#include "irgg/mc_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/binomial.hpp>

#include "irgg/interdep.hpp"
#include "irgg/parallel.hpp"
#include "irgg/rgg.hpp"

namespace irgg {

const char* to_string(BondVariant v) {
  switch (v) {
    case BondVariant::upper_merge: return "upper_merge";
    case BondVariant::upper_crossing: return "upper_crossing";
    case BondVariant::lower_vacant: return "lower_vacant";
  }
  return "?";
}

double BondTrialConfig::inset_for(int which) const {
  if (inset) return *inset;
  switch (variant) {
    case BondVariant::upper_merge: return 0.0;
    case BondVariant::upper_crossing: return std::max(query.d1, query.d2) + query.dep;
    case BondVariant::lower_vacant: return (which == 1 ? query.d1 : query.d2) + query.dep;
  }
  return 0.0;
}

void validate(const BondTrialConfig& cfg) {
  const BoundQuery& q = cfg.query;
  if (!(cfg.side > 0.0)) throw std::invalid_argument("rectangle side D must be positive");
  if (!(q.d1 > 0.0) || !(q.d2 > 0.0) || !(q.dep > 0.0)) {
    throw std::invalid_argument("connection and interdependence distances must be positive");
  }
  if (q.lam1 < 0.0 || q.lam2 < 0.0) throw std::invalid_argument("densities must be non-negative");
  if (cfg.inset && *cfg.inset < 0.0) throw std::invalid_argument("inset must be non-negative");
  for (int which : {1, 2}) {
    const double d = cfg.inset_for(which);
    if (!(2.0 * d < cfg.side)) {
      throw std::invalid_argument("inset " + std::to_string(d) + " leaves no inner rectangle for D = " +
                                  std::to_string(cfg.side) + " (need 2 * inset < D)");
    }
  }
}

TrialPoints sample_trial_points(const BondTrialConfig& cfg, RngStream& rng) {
  const Window r = cfg.rect();
  PointSet g1 = sample_poisson(cfg.query.lam1, r, rng, cfg.query.d1);
  PointSet g2 = sample_poisson(cfg.query.lam2, r, rng, cfg.query.d2);
  return {std::move(g1), std::move(g2)};
}

namespace {

InterdepModel clipped_model(const BondTrialConfig& cfg, const PointSet& g1, const PointSet& g2) {
  const Window r = cfg.rect();
  return InterdepModel(Rgg(restrict_to(g1, r), cfg.query.d1), Rgg(restrict_to(g2, r), cfg.query.d2),
                       cfg.query.dep);
}

bool crosses_both_ways(const Rgg& g, const BondTrialConfig& cfg, double inset, NodeMask active,
                       bool vacant) {
  const CrossingSpec h{cfg.inner_rect(inset), Direction::horizontal};
  const CrossingSpec v{cfg.inner_square(inset), Direction::vertical};
  if (vacant) return has_vacant_crossing(g, h, active) && has_vacant_crossing(g, v, active);
  return has_occupied_crossing(g, h, active) && has_occupied_crossing(g, v, active);
}

std::vector<char> member_mask(std::size_t n, const std::vector<std::size_t>& members) {
  std::vector<char> m(n, 0);
  for (std::size_t i : members) m[i] = 1;
  return m;
}

}  // namespace

bool evaluate_upper_merge(const BondTrialConfig& cfg, const PointSet& g1, const PointSet& g2) {
  const InterdepModel m = clipped_model(cfg, g1, g2);
  const SupplyMap supply = build_supply_map(m);
  const MutualComponent a = alg2_greedy(m, supply, cfg.square1());
  if (a.empty()) return false;
  const MutualComponent b = alg2_greedy(m, supply, cfg.square2());
  return merge_test(m, a, b);
}

bool evaluate_upper_crossing(const BondTrialConfig& cfg, const PointSet& g1, const PointSet& g2) {
  const InterdepModel m = clipped_model(cfg, g1, g2);
  const MutualComponent c = alg2_greedy(m, cfg.rect());
  if (c.empty()) return false;
  const double d = cfg.inset_for(1);
  const std::vector<char> in1 = member_mask(m.g1().size(), c.v1);
  const std::vector<char> in2 = member_mask(m.g2().size(), c.v2);
  return crosses_both_ways(m.g1(), cfg, d, in1, false) && crosses_both_ways(m.g2(), cfg, d, in2, false);
}

bool evaluate_lower_vacant(const BondTrialConfig& cfg, const PointSet& g1, const PointSet& g2,
                           int which_graph) {
  if (which_graph != 1 && which_graph != 2) throw std::invalid_argument("which_graph must be 1 or 2");
  const Window r = cfg.rect();
  const PointSet own = restrict_to(which_graph == 1 ? g1 : g2, r);
  const PointSet other = restrict_to(which_graph == 1 ? g2 : g1, r);
  const double d = which_graph == 1 ? cfg.query.d1 : cfg.query.d2;

  // Relaxed supply: a node survives iff any other-graph node lies within dep.
  std::vector<char> keep(own.size(), 0);
  for (std::size_t i = 0; i < own.size(); ++i) {
    other.for_each_within(own[i], cfg.query.dep, [&](std::size_t) { keep[i] = 1; });
  }
  const Rgg g(own, d);
  return crosses_both_ways(g, cfg, cfg.inset_for(which_graph), keep, true);
}

bool trial_upper_merge(const BondTrialConfig& cfg, RngStream& rng) {
  const TrialPoints p = sample_trial_points(cfg, rng);
  return evaluate_upper_merge(cfg, p.g1, p.g2);
}

bool trial_upper_crossing(const BondTrialConfig& cfg, RngStream& rng) {
  const TrialPoints p = sample_trial_points(cfg, rng);
  return evaluate_upper_crossing(cfg, p.g1, p.g2);
}

bool trial_lower_vacant(const BondTrialConfig& cfg, RngStream& rng, int which_graph) {
  const TrialPoints p = sample_trial_points(cfg, rng);
  return evaluate_lower_vacant(cfg, p.g1, p.g2, which_graph);
}

double effective_density(double lam1, double lam2, double dep) {
  return lam1 * (1.0 - std::exp(-lam2 * std::numbers::pi * dep * dep));
}

ConfidenceVerdict confidence_verdict(std::size_t trials, std::size_t failures, double threshold_p,
                                     double confidence) {
  if (failures > trials) throw std::invalid_argument("failures exceed trials");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("confidence must lie in (0, 1)");
  }
  ConfidenceVerdict v;
  v.trials = trials;
  v.failures = failures;
  v.threshold_p = threshold_p;
  v.confidence = confidence;
  const std::size_t successes = trials - failures;
  if (successes > 0) {
    using boost::math::binomial_distribution;
    v.lower_bound = binomial_distribution<>::find_lower_bound_on_p(
        static_cast<double>(trials), static_cast<double>(successes), 1.0 - confidence);
  }
  v.accepted = v.lower_bound >= threshold_p;
  return v;
}

BatchTally run_bond_batch(const BondTrialConfig& cfg, std::size_t trials, std::uint64_t seed,
                          std::uint32_t point, unsigned threads) {
  validate(cfg);
  const auto tag = static_cast<std::uint32_t>(cfg.variant) + 1;
  std::vector<char> open1(trials, 0);
  std::vector<char> open2(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    RngStream rng(seed, make_stream_id(tag, point, static_cast<std::uint32_t>(t)));
    const TrialPoints p = sample_trial_points(cfg, rng);
    switch (cfg.variant) {
      case BondVariant::upper_merge:
        open1[t] = evaluate_upper_merge(cfg, p.g1, p.g2);
        break;
      case BondVariant::upper_crossing:
        open1[t] = evaluate_upper_crossing(cfg, p.g1, p.g2);
        break;
      case BondVariant::lower_vacant:
        open1[t] = evaluate_lower_vacant(cfg, p.g1, p.g2, 1);
        open2[t] = evaluate_lower_vacant(cfg, p.g1, p.g2, 2);
        break;
    }
  });
  BatchTally tally;
  tally.trials = trials;
  tally.open = static_cast<std::size_t>(std::count(open1.begin(), open1.end(), 1));
  tally.open_g2 = static_cast<std::size_t>(std::count(open2.begin(), open2.end(), 1));
  return tally;
}

SearchResult search_threshold(BondVariant variant, double lam2, const Geometry& geometry,
                              double side, const SearchOptions& options) {
  if (!(options.step > 0.0) || options.coarse_every < 1 || !(options.lam1_max >= options.step) ||
      options.trials == 0) {
    throw std::invalid_argument("search needs step > 0, coarse_every >= 1, lam1_max >= step, trials > 0");
  }
  BondTrialConfig cfg;
  cfg.side = side;
  cfg.variant = variant;
  cfg.query = BoundQuery::from(geometry, 0.0, lam2);
  cfg.inset = options.inset;
  validate(cfg);

  SearchResult result;
  result.variant = variant;
  const bool lower = variant == BondVariant::lower_vacant;
  const auto k_max = static_cast<int>(std::floor(options.lam1_max / options.step + 1e-9));

  const auto evaluate = [&](int k) {
    cfg.query.lam1 = k * options.step;
    const BatchTally t =
        run_bond_batch(cfg, options.trials, options.seed, static_cast<std::uint32_t>(k), options.threads);
    GridTally g;
    g.lam1 = cfg.query.lam1;
    g.trials = t.trials;
    g.failures = t.trials - t.open;
    g.accepted = confidence_verdict(t.trials, g.failures, options.threshold_p, options.confidence).accepted;
    if (lower) {
      g.failures_g2 = t.trials - t.open_g2;
      g.accepted = g.accepted ||
                   confidence_verdict(t.trials, g.failures_g2, options.threshold_p, options.confidence).accepted;
    }
    result.trail.push_back(g);
    return g.accepted;
  };

  std::vector<int> coarse;
  for (int k = options.coarse_every; k < k_max; k += options.coarse_every) coarse.push_back(k);
  coarse.push_back(k_max);

  if (!lower) {
    int below = 0;
    for (int k : coarse) {
      if (evaluate(k)) {
        for (int f = below + 1; f < k; ++f) {
          if (evaluate(f)) {
            result.lam1 = f * options.step;
            return result;
          }
        }
        result.lam1 = k * options.step;
        return result;
      }
      below = k;
    }
    return result;
  }

  int accepted = 0;
  int rejected = 0;
  for (int k : coarse) {
    if (!evaluate(k)) {
      rejected = k;
      break;
    }
    accepted = k;
  }
  if (rejected == 0) return result;  // never rejected within range
  for (int f = accepted + 1; f < rejected; ++f) {
    if (!evaluate(f)) break;
    accepted = f;
  }
  if (accepted > 0) result.lam1 = accepted * options.step;
  return result;
}

std::optional<double> IntervalResult::upper() const {
  const auto& a = upper_merge.lam1;
  const auto& b = upper_crossing.lam1;
  if (a && b) return std::min(*a, *b);
  return a ? a : b;
}

IntervalResult confidence_interval(double lam2, const Geometry& geometry, double side,
                                   const SearchOptions& options) {
  IntervalResult r;
  r.upper_merge = search_threshold(BondVariant::upper_merge, lam2, geometry, side, options);
  r.upper_crossing = search_threshold(BondVariant::upper_crossing, lam2, geometry, side, options);
  r.lower = search_threshold(BondVariant::lower_vacant, lam2, geometry, side, options);
  return r;
}

}  // namespace irgg
