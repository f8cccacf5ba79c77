#include "irgg/spatial.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace irgg {

namespace {

constexpr double kCollinearEps = 1e-12;

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int orientation(Point o, Point a, Point b) {
  const double v = cross(o, a, b);
  if (std::abs(v) <= kCollinearEps) return 0;
  return v > 0.0 ? 1 : -1;
}

// p is known to be collinear with s; test whether it lies within s's box.
bool on_segment(const Segment& s, Point p) {
  return p.x >= std::min(s.a.x, s.b.x) && p.x <= std::max(s.a.x, s.b.x) &&
         p.y >= std::min(s.a.y, s.b.y) && p.y <= std::max(s.a.y, s.b.y);
}

}  // namespace

void require_valid(const Window& w) {
  if (!w.valid()) {
    throw std::invalid_argument("window must satisfy x_max > x_min and y_max > y_min");
  }
}

bool segments_intersect(const Segment& s1, const Segment& s2) {
  const int o1 = orientation(s1.a, s1.b, s2.a);
  const int o2 = orientation(s1.a, s1.b, s2.b);
  const int o3 = orientation(s2.a, s2.b, s1.a);
  const int o4 = orientation(s2.a, s2.b, s1.b);

  if (o1 != o2 && o3 != o4) return true;

  if (o1 == 0 && on_segment(s1, s2.a)) return true;
  if (o2 == 0 && on_segment(s1, s2.b)) return true;
  if (o3 == 0 && on_segment(s2, s1.a)) return true;
  if (o4 == 0 && on_segment(s2, s1.b)) return true;
  return false;
}

std::optional<Segment> clip_segment(const Segment& s, const Window& w) {
  const double dx = s.b.x - s.a.x;
  const double dy = s.b.y - s.a.y;
  double t0 = 0.0;
  double t1 = 1.0;
  // Which boundary (if any) fixed each parameter: 0 none, 1 x_min, 2 x_max,
  // 3 y_min, 4 y_max.
  int side0 = 0;
  int side1 = 0;

  const auto clip = [&](double p, double q, int side) {
    if (p == 0.0) return q >= 0.0;
    const double r = q / p;
    if (p < 0.0) {
      if (r > t1) return false;
      if (r > t0) {
        t0 = r;
        side0 = side;
      }
    } else {
      if (r < t0) return false;
      if (r < t1) {
        t1 = r;
        side1 = side;
      }
    }
    return true;
  };

  if (!clip(-dx, s.a.x - w.x_min, 1)) return std::nullopt;
  if (!clip(dx, w.x_max - s.a.x, 2)) return std::nullopt;
  if (!clip(-dy, s.a.y - w.y_min, 3)) return std::nullopt;
  if (!clip(dy, w.y_max - s.a.y, 4)) return std::nullopt;

  const auto snap = [&w](Point p, int side) {
    switch (side) {
      case 1: p.x = w.x_min; break;
      case 2: p.x = w.x_max; break;
      case 3: p.y = w.y_min; break;
      case 4: p.y = w.y_max; break;
      default: break;
    }
    p.x = std::clamp(p.x, w.x_min, w.x_max);
    p.y = std::clamp(p.y, w.y_min, w.y_max);
    return p;
  };

  Segment out;
  out.a = side0 == 0 ? s.a : snap(Point{s.a.x + t0 * dx, s.a.y + t0 * dy}, side0);
  out.b = side1 == 0 ? s.b : snap(Point{s.a.x + t1 * dx, s.a.y + t1 * dy}, side1);
  return out;
}

// ---------------------------------------------------------------------------

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), 0x9e3779b9u};
  engine_.seed(seq);
}

double RngStream::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

bool RngStream::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::bernoulli_distribution(p)(engine_);
}

std::uint64_t RngStream::poisson(double mean) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<std::uint64_t>(mean)(engine_);
}

std::uint64_t make_stream_id(std::uint32_t tag, std::uint32_t point, std::uint32_t trial) {
  return (static_cast<std::uint64_t>(tag) << 48) ^ (static_cast<std::uint64_t>(point) << 24) ^
         static_cast<std::uint64_t>(trial);
}

// ---------------------------------------------------------------------------

PointSet::PointSet() { build_index(); }

PointSet::PointSet(std::vector<Point> points, Window window, double density, double bin_size)
    : points_(std::move(points)), window_(window), density_(density), bin_size_(bin_size) {
  require_valid(window_);
  if (!(bin_size_ > 0.0)) throw std::invalid_argument("bin size must be positive");
  if (density_ < 0.0) throw std::invalid_argument("density must be non-negative");
  for (const Point& p : points_) {
    if (!window_.contains(p)) {
      throw std::invalid_argument("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                  ") lies outside the window");
    }
  }
  build_index();
}

PointSet PointSet::rebinned(double bin_size) const {
  return PointSet(points_, window_, density_, bin_size);
}

std::size_t PointSet::cell_col(double x) const {
  const double c = std::floor((x - window_.x_min) / bin_size_);
  if (c <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(c), cols_ - 1);
}

std::size_t PointSet::cell_row(double y) const {
  const double r = std::floor((y - window_.y_min) / bin_size_);
  if (r <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(r), rows_ - 1);
}

void PointSet::build_index() {
  // Keep the cell count proportional to the point count; a coarser grid only
  // costs speed.
  const double max_cells = 4.0 * static_cast<double>(points_.size()) + 64.0;
  double bin = bin_size_;
  while (std::ceil(window_.width() / bin) * std::ceil(window_.height() / bin) > max_cells) {
    bin *= 2.0;
  }
  bin_size_ = bin;
  cols_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(window_.width() / bin)));
  rows_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(window_.height() / bin)));

  const std::size_t cells = cols_ * rows_;
  cell_start_.assign(cells + 1, 0);
  std::vector<std::uint32_t> cell_of(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto cell = static_cast<std::uint32_t>(cell_row(points_[i].y) * cols_ + cell_col(points_[i].x));
    cell_of[i] = cell;
    ++cell_start_[cell + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) cell_start_[c + 1] += cell_start_[c];
  cell_items_.resize(points_.size());
  std::vector<std::uint32_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    cell_items_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
  }
}

std::vector<std::size_t> PointSet::cell_members(Point p) const {
  std::vector<std::size_t> out;
  if (points_.empty()) return out;
  const std::size_t cell = cell_row(p.y) * cols_ + cell_col(p.x);
  for (std::uint32_t k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
    out.push_back(cell_items_[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------

PointSet sample_poisson(double density, const Window& window, RngStream& rng, double bin_size) {
  if (density < 0.0) throw std::invalid_argument("density must be non-negative");
  require_valid(window);
  const std::uint64_t n = rng.poisson(density * window.area());
  std::vector<Point> pts;
  pts.reserve(n);
  std::uniform_real_distribution<double> ux(window.x_min, window.x_max);
  std::uniform_real_distribution<double> uy(window.y_min, window.y_max);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = ux(rng.engine());
    const double y = uy(rng.engine());
    pts.push_back({x, y});
  }
  return PointSet(std::move(pts), window, density, bin_size);
}

std::vector<std::size_t> neighbors_within(const PointSet& ps, Point center, double radius) {
  std::vector<std::size_t> out;
  ps.for_each_within(center, radius, [&out](std::size_t i) { out.push_back(i); });
  std::sort(out.begin(), out.end());
  return out;
}

PointSet restrict_to(const PointSet& ps, const Window& w, std::vector<std::size_t>* kept) {
  require_valid(w);
  std::vector<Point> pts;
  if (kept) kept->clear();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (w.contains(ps[i])) {
      pts.push_back(ps[i]);
      if (kept) kept->push_back(i);
    }
  }
  return PointSet(std::move(pts), w, ps.density(), ps.bin_size());
}

PointSet select_points(const PointSet& ps, std::span<const char> keep, double density) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (keep[i]) pts.push_back(ps[i]);
  }
  return PointSet(std::move(pts), ps.window(), density, ps.bin_size());
}

}  // namespace irgg
