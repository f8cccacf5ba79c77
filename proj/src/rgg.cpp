#include "irgg/rgg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irgg {

namespace {

bool is_active(NodeMask active, std::size_t i) { return active.empty() || active[i] != 0; }

void require_mask(const Rgg& g, NodeMask active) {
  if (!active.empty() && active.size() != g.size()) {
    throw std::invalid_argument("node mask size does not match the graph");
  }
}

void require_rect_inside(const Rgg& g, const CrossingSpec& spec) {
  require_valid(spec.rect);
  if (!g.window().contains(spec.rect)) {
    throw std::invalid_argument("crossing rectangle must lie inside the graph window");
  }
}

// Coordinates along (u) and across (v) the crossing direction.
struct Axes {
  Direction dir;
  double u(Point p) const { return dir == Direction::horizontal ? p.x : p.y; }
  double v(Point p) const { return dir == Direction::horizontal ? p.y : p.x; }
};

}  // namespace

Rgg::Rgg(const PointSet& points, double conn_dist)
    : points_(points.rebinned(conn_dist > 0.0 ? conn_dist : 1.0)), conn_dist_(conn_dist) {
  if (!(conn_dist > 0.0)) throw std::invalid_argument("connection distance must be positive");
}

std::vector<std::size_t> Rgg::neighbors(std::size_t i) const {
  std::vector<std::size_t> out;
  for_each_neighbor(i, [&out](std::size_t j) { out.push_back(j); });
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t ComponentLabeling::component_count() const {
  return static_cast<std::size_t>(
      std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; }));
}

ComponentLabeling connected_components(const Rgg& g, NodeMask active) {
  require_mask(g, active);
  const std::size_t n = g.size();
  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_active(active, i)) continue;
    g.for_each_neighbor(i, [&](std::size_t j) {
      if (j > i && is_active(active, j)) sets.unite(i, j);
    });
  }

  ComponentLabeling out;
  out.label.assign(n, ComponentLabeling::npos);
  out.sizes.assign(n, 0);
  std::vector<std::size_t> root_label(n, ComponentLabeling::npos);
  // Ascending scan: the first member seen of each set is its smallest index.
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_active(active, i)) continue;
    const std::size_t r = sets.find(i);
    if (root_label[r] == ComponentLabeling::npos) root_label[r] = i;
    out.label[i] = root_label[r];
    ++out.sizes[root_label[r]];
  }
  return out;
}

bool has_occupied_crossing(const Rgg& g, const CrossingSpec& spec, NodeMask active) {
  require_mask(g, active);
  require_rect_inside(g, spec);
  const Axes ax{spec.direction};
  const Window& r = spec.rect;
  const double u_lo = spec.direction == Direction::horizontal ? r.x_min : r.y_min;
  const double u_hi = spec.direction == Direction::horizontal ? r.x_max : r.y_max;
  const double v_lo = spec.direction == Direction::horizontal ? r.y_min : r.x_min;
  const double v_hi = spec.direction == Direction::horizontal ? r.y_max : r.x_max;

  const std::size_t n = g.size();
  std::vector<char> inner(n, 0);
  std::vector<char> start(n, 0);
  std::vector<char> finish(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_active(active, i)) continue;
    const Point p = g[i];
    const bool v_ok = ax.v(p) >= v_lo && ax.v(p) <= v_hi;
    inner[i] = r.contains(p) ? 1 : 0;
    start[i] = (v_ok && ax.u(p) <= u_lo) ? 1 : 0;
    finish[i] = (v_ok && ax.u(p) >= u_hi) ? 1 : 0;
  }

  // Components of the interior nodes; a crossing is a start node and a finish
  // node linked to the same interior component, or linked to each other.
  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!inner[i]) continue;
    g.for_each_neighbor(i, [&](std::size_t j) {
      if (j > i && inner[j]) sets.unite(i, j);
    });
  }

  std::vector<char> reached(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!start[i]) continue;
    bool direct = false;
    g.for_each_neighbor(i, [&](std::size_t j) {
      if (inner[j]) reached[sets.find(j)] = 1;
      if (finish[j]) direct = true;
    });
    if (direct) return true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!finish[i]) continue;
    bool hit = false;
    g.for_each_neighbor(i, [&](std::size_t j) {
      if (inner[j] && reached[sets.find(j)]) hit = true;
    });
    if (hit) return true;
  }
  return false;
}

namespace {

struct ClippedLink {
  Segment seg;
  std::size_t i;
  std::size_t j;
};

std::vector<ClippedLink> clipped_links(const Rgg& g, const Window& rect, NodeMask active) {
  std::vector<ClippedLink> out;
  const double d = g.conn_dist();
  const Window reach{rect.x_min - d, rect.y_min - d, rect.x_max + d, rect.y_max + d};
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!is_active(active, i) || !reach.contains(g[i])) continue;
    g.for_each_neighbor(i, [&](std::size_t j) {
      if (j <= i || !is_active(active, j)) return;
      if (auto c = clip_segment(Segment{g[i], g[j]}, rect)) out.push_back({*c, i, j});
    });
  }
  return out;
}

}  // namespace

std::vector<Segment> clipped_link_segments(const Rgg& g, const Window& rect, NodeMask active) {
  require_mask(g, active);
  std::vector<Segment> out;
  for (const ClippedLink& l : clipped_links(g, rect, active)) out.push_back(l.seg);
  return out;
}

bool has_vacant_crossing(const Rgg& g, const CrossingSpec& spec, NodeMask active) {
  require_mask(g, active);
  require_rect_inside(g, spec);
  const Window& r = spec.rect;
  const std::vector<ClippedLink> links = clipped_links(g, r, active);
  if (links.empty()) return true;
  std::vector<Segment> segs;
  segs.reserve(links.size());
  for (const ClippedLink& l : links) segs.push_back(l.seg);

  // A horizontal crossing is blocked by a barrier joining bottom and top; a
  // vertical one by a barrier joining left and right.
  const bool horiz = spec.direction == Direction::horizontal;
  const std::size_t m = segs.size();
  const std::size_t side_a = m;
  const std::size_t side_b = m + 1;
  DisjointSets sets(m + 2);

  for (std::size_t k = 0; k < m; ++k) {
    const Segment& s = segs[k];
    if (horiz) {
      if (std::min(s.a.y, s.b.y) <= r.y_min) sets.unite(k, side_a);
      if (std::max(s.a.y, s.b.y) >= r.y_max) sets.unite(k, side_b);
    } else {
      if (std::min(s.a.x, s.b.x) <= r.x_min) sets.unite(k, side_a);
      if (std::max(s.a.x, s.b.x) >= r.x_max) sets.unite(k, side_b);
    }
  }

  // Links meeting at a node inside the rect touch there.
  std::vector<std::size_t> first_at(g.size(), m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t node : {links[k].i, links[k].j}) {
      if (!r.contains(g[node])) continue;
      if (first_at[node] == m) {
        first_at[node] = k;
      } else {
        sets.unite(k, first_at[node]);
      }
    }
  }
  if (sets.same(side_a, side_b)) return false;

  // Bucket segments by bounding box; clipped segments are no longer than the
  // connection distance, so a cell of that side keeps buckets small.
  const double cell = g.conn_dist();
  const auto cols = static_cast<std::size_t>(std::ceil(r.width() / cell)) + 1;
  const auto rows = static_cast<std::size_t>(std::ceil(r.height() / cell)) + 1;
  std::vector<std::vector<std::uint32_t>> buckets(cols * rows);
  const auto col_of = [&](double x) {
    return std::min(cols - 1, static_cast<std::size_t>(std::max(0.0, (x - r.x_min) / cell)));
  };
  const auto row_of = [&](double y) {
    return std::min(rows - 1, static_cast<std::size_t>(std::max(0.0, (y - r.y_min) / cell)));
  };
  for (std::size_t k = 0; k < m; ++k) {
    const Segment& s = segs[k];
    const std::size_t c0 = col_of(std::min(s.a.x, s.b.x));
    const std::size_t c1 = col_of(std::max(s.a.x, s.b.x));
    const std::size_t r0 = row_of(std::min(s.a.y, s.b.y));
    const std::size_t r1 = row_of(std::max(s.a.y, s.b.y));
    for (std::size_t rr = r0; rr <= r1; ++rr) {
      for (std::size_t cc = c0; cc <= c1; ++cc) buckets[rr * cols + cc].push_back(static_cast<std::uint32_t>(k));
    }
  }

  for (const auto& bucket : buckets) {
    for (std::size_t a = 0; a < bucket.size(); ++a) {
      for (std::size_t b = a + 1; b < bucket.size(); ++b) {
        const std::size_t ka = bucket[a];
        const std::size_t kb = bucket[b];
        if (sets.same(ka, kb)) continue;
        if (segments_intersect(segs[ka], segs[kb])) sets.unite(ka, kb);
      }
    }
    if (sets.same(side_a, side_b)) return false;
  }
  return !sets.same(side_a, side_b);
}

}  // namespace irgg
