#pragma once

// Random geometric graph over a PointSet: links join points within the
// connection distance (closed ball). Links are never stored; neighbor queries
// go through the point set's cell index.

#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "irgg/spatial.hpp"

namespace irgg {

/// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  bool same(std::size_t a, std::size_t b) { return find(a) == find(b); }
  std::size_t size_of(std::size_t x) { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

class Rgg {
 public:
  /// Re-indexes the points with cell side = conn_dist. Throws
  /// std::invalid_argument unless conn_dist > 0.
  Rgg(const PointSet& points, double conn_dist);

  const PointSet& points() const { return points_; }
  const Window& window() const { return points_.window(); }
  double conn_dist() const { return conn_dist_; }
  std::size_t size() const { return points_.size(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }

  bool linked(std::size_t i, std::size_t j) const {
    return i != j && distance_sq(points_[i], points_[j]) <= conn_dist_ * conn_dist_;
  }

  /// Calls f(j) for every j != i linked to i.
  template <class F>
  void for_each_neighbor(std::size_t i, F&& f) const {
    points_.for_each_within(points_[i], conn_dist_, [&](std::size_t j) {
      if (j != i) f(j);
    });
  }

  /// Linked neighbors of i, ascending.
  std::vector<std::size_t> neighbors(std::size_t i) const;

 private:
  PointSet points_;
  double conn_dist_;
};

/// A per-node membership flag (non-zero = member). An empty span means every
/// node is a member.
using NodeMask = std::span<const char>;

struct ComponentLabeling {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  /// Node -> canonical label (smallest member index); npos for masked-out
  /// nodes.
  std::vector<std::size_t> label;
  /// Label -> component size; zero at indices that are not labels.
  std::vector<std::size_t> sizes;

  std::size_t component_count() const;
  std::size_t size_of_node(std::size_t i) const {
    return label[i] == npos ? 0 : sizes[label[i]];
  }
};

ComponentLabeling connected_components(const Rgg& g, NodeMask active = {});

enum class Direction { horizontal, vertical };

struct CrossingSpec {
  Window rect;
  Direction direction = Direction::horizontal;
};

/// Is there a linked node sequence v1..vn with v2..v(n-1) inside the rect and
/// end nodes straddling it? For a horizontal crossing of [x1,x2] x [y1,y2]:
/// x(v1) <= x1, x(vn) >= x2 and both y(v1), y(vn) in [y1,y2]. Only active
/// nodes take part.
bool has_occupied_crossing(const Rgg& g, const CrossingSpec& spec, NodeMask active = {});

/// Is there a curve inside the rect joining the two opposite sides (left/right
/// for horizontal) that touches no link? Decided by the dual barrier test:
/// link segments clipped to the rect are joined when they intersect, and a
/// barrier joining the other two sides blocks every such curve. Isolated nodes
/// never block.
bool has_vacant_crossing(const Rgg& g, const CrossingSpec& spec, NodeMask active = {});

/// Link segments between active nodes, clipped to `rect` (segments missing the
/// rect are dropped).
std::vector<Segment> clipped_link_segments(const Rgg& g, const Window& rect, NodeMask active = {});

}  // namespace irgg
