#pragma once

// Points, rectangular windows, segments, seeded random streams and the
// grid-indexed point set shared by every other module.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace irgg {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance_sq(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(Point a, Point b) { return std::sqrt(distance_sq(a, b)); }

/// Axis-aligned closed rectangle [x_min, x_max] x [y_min, y_max].
struct Window {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 1.0;
  double y_max = 1.0;

  static Window square(double side) { return {0.0, 0.0, side, side}; }

  bool valid() const { return x_max > x_min && y_max > y_min; }
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  Point center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }

  bool contains(Point p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  bool contains(const Window& w) const {
    return w.x_min >= x_min && w.x_max <= x_max && w.y_min >= y_min && w.y_max <= y_max;
  }

  friend bool operator==(const Window&, const Window&) = default;
};

/// Throws std::invalid_argument unless x_max > x_min and y_max > y_min.
void require_valid(const Window& w);

struct Segment {
  Point a;
  Point b;
};

/// Closed-segment intersection. Collinear overlap (including a single shared
/// endpoint) counts as intersecting.
bool segments_intersect(const Segment& s1, const Segment& s2);

/// Liang-Barsky clip of a closed segment to a closed window. Endpoints that
/// land on the window boundary are snapped exactly onto it.
std::optional<Segment> clip_segment(const Segment& s, const Window& w);

/// Seeded random stream. Identical (seed, stream_id) pairs reproduce identical
/// draws; distinct stream ids seed independent engines.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  double uniform(double lo, double hi);
  bool bernoulli(double p);
  std::uint64_t poisson(double mean);
  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Packs an (experiment, point, trial) triple into a stream id.
std::uint64_t make_stream_id(std::uint32_t tag, std::uint32_t point, std::uint32_t trial);

/// An immutable list of points inside a window with a uniform cell index.
class PointSet {
 public:
  PointSet();
  PointSet(std::vector<Point> points, Window window, double density, double bin_size = 1.0);

  const std::vector<Point>& points() const { return points_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Window& window() const { return window_; }
  double density() const { return density_; }
  double bin_size() const { return bin_size_; }

  /// Same points, re-indexed with a different cell side.
  PointSet rebinned(double bin_size) const;

  /// Calls f(index) for every point within the closed ball, in no particular
  /// order.
  template <class F>
  void for_each_within(Point center, double radius, F&& f) const;

  /// Indices of points in the cell that contains p (tests and diagnostics).
  std::vector<std::size_t> cell_members(Point p) const;

 private:
  void build_index();
  std::size_t cell_col(double x) const;
  std::size_t cell_row(double y) const;

  std::vector<Point> points_;
  Window window_;
  double density_ = 0.0;
  double bin_size_ = 1.0;
  std::size_t cols_ = 1;
  std::size_t rows_ = 1;
  std::vector<std::uint32_t> cell_start_;
  std::vector<std::uint32_t> cell_items_;
};

/// Homogeneous Poisson process: N ~ Poisson(density * area), positions i.i.d.
/// uniform. Throws std::invalid_argument on negative density.
PointSet sample_poisson(double density, const Window& window, RngStream& rng,
                        double bin_size = 1.0);

/// Indices within the closed ball, ascending.
std::vector<std::size_t> neighbors_within(const PointSet& ps, Point center, double radius);

/// Points of ps inside `w` (closed), in original order, re-windowed to `w`.
/// When `kept` is non-null it receives the original index of each kept point.
PointSet restrict_to(const PointSet& ps, const Window& w,
                     std::vector<std::size_t>* kept = nullptr);

/// Points of ps whose flag in `keep` is set, in original order.
PointSet select_points(const PointSet& ps, std::span<const char> keep, double density);

// ---------------------------------------------------------------------------

template <class F>
void PointSet::for_each_within(Point center, double radius, F&& f) const {
  if (points_.empty() || radius < 0.0) return;
  const double r2 = radius * radius;
  const double lo_x = center.x - radius;
  const double hi_x = center.x + radius;
  const double lo_y = center.y - radius;
  const double hi_y = center.y + radius;
  if (hi_x < window_.x_min || lo_x > window_.x_max || hi_y < window_.y_min ||
      lo_y > window_.y_max) {
    return;
  }
  const std::size_t c0 = cell_col(lo_x);
  const std::size_t c1 = cell_col(hi_x);
  const std::size_t r0 = cell_row(lo_y);
  const std::size_t r1 = cell_row(hi_y);
  for (std::size_t r = r0; r <= r1; ++r) {
    for (std::size_t c = c0; c <= c1; ++c) {
      const std::size_t cell = r * cols_ + c;
      for (std::uint32_t k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
        const std::uint32_t idx = cell_items_[k];
        if (distance_sq(points_[idx], center) <= r2) f(static_cast<std::size_t>(idx));
      }
    }
  }
}

}  // namespace irgg
