#include "irgg/interdep.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace irgg {

namespace {

using Mask = std::vector<char>;

Mask to_mask(std::size_t n, const std::vector<std::size_t>& idx) {
  Mask m(n, 0);
  for (std::size_t i : idx) m[i] = 1;
  return m;
}

std::vector<std::size_t> to_indices(const Mask& m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i]) out.push_back(i);
  }
  return out;
}

// Nodes reachable from `seed` through active nodes (seed must be active).
Mask component_of(const Rgg& g, const Mask& active, std::size_t seed) {
  Mask out(g.size(), 0);
  std::vector<std::size_t> stack{seed};
  out[seed] = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    g.for_each_neighbor(i, [&](std::size_t j) {
      if (active[j] && !out[j]) {
        out[j] = 1;
        stack.push_back(j);
      }
    });
  }
  return out;
}

// Largest component among active nodes; ties go to the component whose
// lowest member under (x, y, index) order comes first.
Mask largest_component(const Rgg& g, const Mask& active) {
  const std::size_t n = g.size();
  Mask out(n, 0);
  if (n == 0) return out;
  const ComponentLabeling lab = connected_components(g, active);

  std::vector<std::size_t> lowest(n, ComponentLabeling::npos);
  const auto key = [&g](std::size_t i) { return std::make_tuple(g[i].x, g[i].y, i); };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t l = lab.label[i];
    if (l == ComponentLabeling::npos) continue;
    if (lowest[l] == ComponentLabeling::npos || key(i) < key(lowest[l])) lowest[l] = i;
  }

  std::size_t best = ComponentLabeling::npos;
  for (std::size_t l = 0; l < n; ++l) {
    if (lab.sizes[l] == 0) continue;
    if (best == ComponentLabeling::npos || lab.sizes[l] > lab.sizes[best] ||
        (lab.sizes[l] == lab.sizes[best] && key(lowest[l]) < key(lowest[best]))) {
      best = l;
    }
  }
  if (best == ComponentLabeling::npos) return out;
  for (std::size_t i = 0; i < n; ++i) out[i] = lab.label[i] == best ? 1 : 0;
  return out;
}

// Members of `side` with at least one supplier in `other`.
Mask supplied(const Mask& side, const Mask& other,
              const std::vector<std::vector<std::size_t>>& supplies) {
  Mask out(side.size(), 0);
  for (std::size_t i = 0; i < side.size(); ++i) {
    if (!side[i]) continue;
    for (std::size_t j : supplies[i]) {
      if (other[j]) {
        out[i] = 1;
        break;
      }
    }
  }
  return out;
}

MutualComponent to_component(const Mask& v1, const Mask& v2) {
  return MutualComponent{to_indices(v1), to_indices(v2)};
}

void require_supply_shape(const InterdepModel& m, const SupplyMap& s) {
  if (s.supplies_1to2.size() != m.g1().size() || s.supplies_2to1.size() != m.g2().size()) {
    throw std::invalid_argument("supply map does not match the model");
  }
}

bool connected_subset(const Rgg& g, const std::vector<std::size_t>& nodes) {
  if (nodes.empty()) return false;
  const Mask mask = to_mask(g.size(), nodes);
  const Mask reach = component_of(g, mask, nodes.front());
  return std::all_of(nodes.begin(), nodes.end(), [&](std::size_t i) { return reach[i] != 0; });
}

}  // namespace

InterdepModel::InterdepModel(Rgg g1, Rgg g2, double dep_dist)
    : g1_(std::move(g1)), g2_(std::move(g2)), dep_dist_(dep_dist) {
  if (!(g1_.window() == g2_.window())) {
    throw std::invalid_argument("both graphs must share the same window");
  }
  if (!(dep_dist_ > 0.0)) throw std::invalid_argument("interdependence distance must be positive");
}

SupplyMap build_supply_map(const InterdepModel& m) {
  SupplyMap s;
  const PointSet& p1 = m.g1().points();
  const PointSet& p2 = m.g2().points();
  s.supplies_1to2.resize(p1.size());
  s.supplies_2to1.resize(p2.size());
  for (std::size_t a = 0; a < p1.size(); ++a) {
    p2.for_each_within(p1[a], m.dep_dist(), [&](std::size_t b) { s.supplies_1to2[a].push_back(b); });
    std::sort(s.supplies_1to2[a].begin(), s.supplies_1to2[a].end());
  }
  // Mirror from the first side so both directions agree exactly.
  for (std::size_t a = 0; a < p1.size(); ++a) {
    for (std::size_t b : s.supplies_1to2[a]) s.supplies_2to1[b].push_back(a);
  }
  return s;
}

MutualComponent alg1_mutual_component(const InterdepModel& m, std::size_t b1, std::size_t b2,
                                      const IterateObserver& observe) {
  return alg1_mutual_component(m, build_supply_map(m), b1, b2, observe);
}

MutualComponent alg1_mutual_component(const InterdepModel& m, const SupplyMap& supply,
                                      std::size_t b1, std::size_t b2,
                                      const IterateObserver& observe) {
  require_supply_shape(m, supply);
  if (b1 >= m.g1().size() || b2 >= m.g2().size()) {
    throw std::invalid_argument("seed node index out of range");
  }
  if (distance_sq(m.g1()[b1], m.g2()[b2]) > m.dep_dist() * m.dep_dist()) {
    throw std::invalid_argument("seed nodes are farther apart than the interdependence distance");
  }

  Mask v1 = component_of(m.g1(), Mask(m.g1().size(), 1), b1);
  Mask v2 = component_of(m.g2(), Mask(m.g2().size(), 1), b2);
  while (true) {
    if (observe) observe(to_component(v1, v2));
    const Mask keep1 = supplied(v1, v2, supply.supplies_1to2);
    const Mask keep2 = supplied(v2, v1, supply.supplies_2to1);
    if (!keep1[b1] || !keep2[b2]) return {};
    Mask next1 = component_of(m.g1(), keep1, b1);
    Mask next2 = component_of(m.g2(), keep2, b2);
    if (next1 == v1 && next2 == v2) break;
    v1 = std::move(next1);
    v2 = std::move(next2);
  }
  return to_component(v1, v2);
}

MutualComponent alg2_greedy(const InterdepModel& m, const Window& region,
                            const IterateObserver& observe) {
  return alg2_greedy(m, build_supply_map(m), region, observe);
}

MutualComponent alg2_greedy(const InterdepModel& m, const SupplyMap& supply,
                            const Window& region, const IterateObserver& observe) {
  require_supply_shape(m, supply);
  require_valid(region);
  const Rgg& g1 = m.g1();
  const Rgg& g2 = m.g2();

  Mask in1(g1.size(), 0);
  Mask in2(g2.size(), 0);
  for (std::size_t i = 0; i < g1.size(); ++i) in1[i] = region.contains(g1[i]) ? 1 : 0;
  for (std::size_t i = 0; i < g2.size(); ++i) in2[i] = region.contains(g2[i]) ? 1 : 0;

  Mask v1 = largest_component(g1, in1);
  Mask v2 = largest_component(g2, in2);
  while (true) {
    if (observe) observe(to_component(v1, v2));
    const Mask keep1 = supplied(v1, v2, supply.supplies_1to2);
    const Mask keep2 = supplied(v2, v1, supply.supplies_2to1);
    Mask next1 = largest_component(g1, keep1);
    Mask next2 = largest_component(g2, keep2);
    if (next1 == v1 && next2 == v2) break;
    v1 = std::move(next1);
    v2 = std::move(next2);
  }
  MutualComponent out = to_component(v1, v2);
  // One side empty strips the other on the next pass; both are empty here.
  if (out.v1.empty() || out.v2.empty()) return {};
  return out;
}

bool merge_test(const InterdepModel& m, const MutualComponent& a, const MutualComponent& b) {
  if (a.v1.empty() || a.v2.empty() || b.v1.empty() || b.v2.empty()) return false;
  std::vector<std::size_t> u1;
  std::vector<std::size_t> u2;
  std::set_union(a.v1.begin(), a.v1.end(), b.v1.begin(), b.v1.end(), std::back_inserter(u1));
  std::set_union(a.v2.begin(), a.v2.end(), b.v2.begin(), b.v2.end(), std::back_inserter(u2));
  return connected_subset(m.g1(), u1) && connected_subset(m.g2(), u2);
}

bool is_mutual_component(const InterdepModel& m, const MutualComponent& c) {
  if (c.v1.empty() || c.v2.empty()) return false;
  if (!std::is_sorted(c.v1.begin(), c.v1.end()) || !std::is_sorted(c.v2.begin(), c.v2.end())) {
    return false;
  }
  if (c.v1.back() >= m.g1().size() || c.v2.back() >= m.g2().size()) return false;
  if (!connected_subset(m.g1(), c.v1) || !connected_subset(m.g2(), c.v2)) return false;

  const Mask in1 = to_mask(m.g1().size(), c.v1);
  const Mask in2 = to_mask(m.g2().size(), c.v2);
  const auto has_supplier = [&m](const Point& p, const PointSet& other, const Mask& in) {
    bool found = false;
    other.for_each_within(p, m.dep_dist(), [&](std::size_t j) {
      if (in[j]) found = true;
    });
    return found;
  };
  for (std::size_t i : c.v1) {
    if (!has_supplier(m.g1()[i], m.g2().points(), in2)) return false;
  }
  for (std::size_t i : c.v2) {
    if (!has_supplier(m.g2()[i], m.g1().points(), in1)) return false;
  }
  return true;
}

MutualStats largest_mutual_stats(const InterdepModel& m) {
  const MutualComponent c = alg2_greedy(m, m.window());
  MutualStats s;
  if (m.g1().size() > 0) s.f1 = static_cast<double>(c.v1.size()) / static_cast<double>(m.g1().size());
  if (m.g2().size() > 0) s.f2 = static_cast<double>(c.v2.size()) / static_cast<double>(m.g2().size());
  return s;
}

}  // namespace irgg
