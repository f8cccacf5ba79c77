#pragma once

// Random node failures, disk-shaped geographical attacks, and how much of the
// largest mutual component survives them.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "irgg/analytic_bounds.hpp"
#include "irgg/interdep.hpp"

namespace irgg {

/// Each G_i node is removed independently with probability q_i.
struct RandomAttack {
  double q1 = 0.0;
  double q2 = 0.0;
};

/// Every node of both graphs within `radius` of `center` (closed disk) is
/// removed.
struct DiskAttack {
  Point center;
  double radius = 1.0;
};

using AttackSpec = std::variant<RandomAttack, DiskAttack>;

/// Throws std::invalid_argument for probabilities outside [0, 1], a
/// non-positive radius, or a disk missing the window.
void validate(const AttackSpec& spec, const Window& window);

/// Window and distances are unchanged. A random attack keeps a node iff a
/// uniform draw is >= q_i, so smaller q keeps a superset under the same rng.
InterdepModel apply_attack(const InterdepModel& m, const AttackSpec& spec, RngStream& rng);

struct ModelParams {
  double lam1 = 0.0;
  double lam2 = 0.0;
  double d1 = 1.0;
  double d2 = 1.0;
  double dep = 0.5;
  Window window = Window::square(10.0);
};

/// G1 and G2 sampled from one stream, G1 first.
InterdepModel sample_model(const ModelParams& p, RngStream& rng);

struct AttackSummary {
  std::vector<MutualStats> per_seed;
  double mean_f1 = 0.0;
  double mean_f2 = 0.0;
  double min_f1 = 0.0;
  double min_f2 = 0.0;
};

/// For every seed: samples a model, applies the attack, and measures the
/// largest mutual component as a fraction of the surviving nodes of each
/// graph. Model and attack draw from separate streams of the seed, so
/// different attacks on the same seed see the same network.
AttackSummary post_attack_percolation(const ModelParams& params, const AttackSpec& spec,
                                      const std::vector<std::uint64_t>& seeds, unsigned threads = 0);

/// Same sampling without an attack.
AttackSummary mutual_stats_over_seeds(const ModelParams& params,
                                      const std::vector<std::uint64_t>& seeds, unsigned threads = 0);

struct FrontierPoint {
  double q1_max = 0.0;
  double q2 = 0.0;
};

/// Piecewise-linear threshold lam1*(lam2) through the finite curve points
/// (sorted by lam2). Below the smallest lam2 there is no guarantee (nullopt);
/// above the largest, the last value is held.
std::optional<double> interpolate_curve(const std::vector<CurvePoint>& curve, double lam2);

/// For q2 on a uniform grid of `q2_steps + 1` values in [0, 1], the largest q1
/// with lam1 (1 - q1) still on or above the curve at lam2 (1 - q2). The
/// frontier stops at the first q2 where no q1 >= 0 is admissible.
std::vector<FrontierPoint> max_tolerable_random_fraction(const std::vector<CurvePoint>& curve,
                                                         double lam1, double lam2,
                                                         int q2_steps = 100);

}  // namespace irgg
