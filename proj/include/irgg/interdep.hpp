#pragma once

// Two random geometric graphs on one window coupled by an interdependence
// distance: a node is supplied by every node of the other graph within that
// distance. Mutual components are pairs (V1, V2) where each side is connected
// in its own graph and every node has at least one supply node on the other
// side.

#include <cstddef>
#include <functional>
#include <vector>

#include "irgg/rgg.hpp"

namespace irgg {

class InterdepModel {
 public:
  /// Throws std::invalid_argument when the windows differ or dep_dist <= 0.
  InterdepModel(Rgg g1, Rgg g2, double dep_dist);

  const Rgg& g1() const { return g1_; }
  const Rgg& g2() const { return g2_; }
  const Rgg& graph(int which) const { return which == 1 ? g1_ : g2_; }
  double dep_dist() const { return dep_dist_; }
  const Window& window() const { return g1_.window(); }

 private:
  Rgg g1_;
  Rgg g2_;
  double dep_dist_;
};

/// Bipartite "within dep_dist" relation, stored from both sides. Lists are
/// ascending.
struct SupplyMap {
  std::vector<std::vector<std::size_t>> supplies_1to2;
  std::vector<std::vector<std::size_t>> supplies_2to1;
};

SupplyMap build_supply_map(const InterdepModel& m);

/// Node subsets of g1 and g2, ascending. Both empty means "no mutual
/// component".
struct MutualComponent {
  std::vector<std::size_t> v1;
  std::vector<std::size_t> v2;

  bool empty() const { return v1.empty() && v2.empty(); }
  std::size_t total() const { return v1.size() + v2.size(); }

  friend bool operator==(const MutualComponent&, const MutualComponent&) = default;
};

/// Called with each iterate V^k of the fixed-point loops (k = 0, 1, ...).
using IterateObserver = std::function<void(const MutualComponent&)>;

/// Largest mutual component containing b1 (in g1) and b2 (in g2): start from
/// their connected components, repeatedly drop unsupplied nodes and keep what
/// stays connected to b1 / b2. Returns the empty marker when b1 or b2 is
/// dropped. Throws std::invalid_argument when b1, b2 are farther apart than
/// dep_dist or out of range.
MutualComponent alg1_mutual_component(const InterdepModel& m, std::size_t b1, std::size_t b2,
                                      const IterateObserver& observe = {});
MutualComponent alg1_mutual_component(const InterdepModel& m, const SupplyMap& supply,
                                      std::size_t b1, std::size_t b2,
                                      const IterateObserver& observe = {});

/// Greedy mutual component of the nodes and links inside `region`: take the
/// largest component of each graph, drop unsupplied nodes, keep the largest
/// remaining component, repeat until stable. Equal-size components are
/// ranked by their lowest member under (x, y, index) order.
MutualComponent alg2_greedy(const InterdepModel& m, const Window& region,
                            const IterateObserver& observe = {});
MutualComponent alg2_greedy(const InterdepModel& m, const SupplyMap& supply,
                            const Window& region, const IterateObserver& observe = {});

/// Whether two mutual components join into one: the union of their g1 sides
/// is connected in g1 and the union of their g2 sides is connected in g2.
/// False when either argument is the empty marker.
bool merge_test(const InterdepModel& m, const MutualComponent& a, const MutualComponent& b);

/// Definition check: each side connected within itself, each node supplied
/// from the other side. The empty marker is not a mutual component.
bool is_mutual_component(const InterdepModel& m, const MutualComponent& c);

struct MutualStats {
  double f1 = 0.0;
  double f2 = 0.0;
};

/// Fractions of each graph's nodes in the greedy mutual component of the whole
/// window; zero for an empty graph.
MutualStats largest_mutual_stats(const InterdepModel& m);

}  // namespace irgg
