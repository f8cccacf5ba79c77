#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "irgg/spatial.hpp"
#include "oracles.hpp"

using namespace irgg;

TEST_CASE("zero density gives an empty set") {
  RngStream rng(1, 0);
  CHECK(sample_poisson(0.0, Window::square(10.0), rng).empty());
}

TEST_CASE("negative density is rejected") {
  RngStream rng(1, 0);
  CHECK_THROWS_AS(sample_poisson(-1.0, Window::square(10.0), rng), std::invalid_argument);
}

TEST_CASE("same seed and stream reproduce the same points") {
  RngStream a(7, 0);
  RngStream b(7, 0);
  const PointSet pa = sample_poisson(2.0, Window::square(20.0), a);
  const PointSet pb = sample_poisson(2.0, Window::square(20.0), b);
  REQUIRE(pa.size() == pb.size());
  CHECK(pa.points() == pb.points());

  RngStream c(7, 1);
  CHECK(sample_poisson(2.0, Window::square(20.0), c).points() != pa.points());
}

TEST_CASE("mean point count over 200 seeds") {
  double total = 0.0;
  for (std::uint32_t s = 0; s < 200; ++s) {
    RngStream rng(42, make_stream_id(1, 0, s));
    total += static_cast<double>(sample_poisson(15.0, Window::square(10.0), rng).size());
  }
  CHECK(std::abs(total / 200.0 - 1500.0) <= 3.0 * std::sqrt(1500.0));
}

TEST_CASE("points are uniform inside the window") {
  RngStream rng(3, 0);
  const Window w{-2.0, 1.0, 4.0, 3.0};
  const PointSet ps = sample_poisson(50.0, w, rng);
  for (const Point& p : ps.points()) REQUIRE(w.contains(p));
  // Left and right halves hold about half each.
  const auto left = std::count_if(ps.points().begin(), ps.points().end(), [](Point p) { return p.x < 1.0; });
  const double frac = static_cast<double>(left) / static_cast<double>(ps.size());
  CHECK(std::abs(frac - 0.5) < 4.0 * std::sqrt(0.25 / static_cast<double>(ps.size())));
}

namespace {

// Chi-square statistic of Poisson counts against Poisson(mean), with the
// support split into bins of expected count >= 5.
bool counts_fit_poisson(std::uint64_t seed, int samples, double density, const Window& w) {
  const double mean = density * w.area();
  const boost::math::poisson_distribution<> pois(mean);
  std::vector<int> counts;
  for (int s = 0; s < samples; ++s) {
    RngStream rng(seed, make_stream_id(2, 0, static_cast<std::uint32_t>(s)));
    counts.push_back(static_cast<int>(sample_poisson(density, w, rng).size()));
  }
  // Bin edges: accumulate values until each bin expects >= 5.
  std::vector<std::pair<int, int>> bins;  // [lo, hi]
  int lo = 0;
  double expected = 0.0;
  for (int k = 0; k < 10 * static_cast<int>(mean) + 50; ++k) {
    expected += samples * boost::math::pdf(pois, k);
    if (expected >= 5.0 && samples * boost::math::cdf(boost::math::complement(pois, k)) >= 5.0) {
      bins.push_back({lo, k});
      lo = k + 1;
      expected = 0.0;
    }
  }
  bins.push_back({lo, INT32_MAX});
  double chi2 = 0.0;
  for (const auto& [a, b] : bins) {
    const double p = (b == INT32_MAX ? 1.0 : boost::math::cdf(pois, b)) - (a == 0 ? 0.0 : boost::math::cdf(pois, a - 1));
    const double e = samples * p;
    const auto o = static_cast<double>(std::count_if(counts.begin(), counts.end(), [&](int c) { return c >= a && c <= b; }));
    chi2 += (o - e) * (o - e) / e;
  }
  const boost::math::chi_squared_distribution<> dist(static_cast<double>(bins.size() - 1));
  return chi2 <= boost::math::quantile(dist, 0.99);
}

}  // namespace

TEST_CASE("point counts pass a chi-square test against Poisson") {
  // One rerun with fresh seeds absorbs the 1% false-alarm rate.
  const bool ok = counts_fit_poisson(5, 600, 0.3, Window::square(10.0)) ||
                  counts_fit_poisson(6, 600, 0.3, Window::square(10.0));
  CHECK(ok);
}

TEST_CASE("neighbors_within on hand-made points") {
  const PointSet ps({{0, 0}, {0, 0.5}, {0, 2}}, Window{-1, -1, 3, 3}, 0.0);
  CHECK(neighbors_within(ps, {0, 0}, 1.0) == std::vector<std::size_t>{0, 1});
  CHECK(neighbors_within(ps, {0, 0.5}, 0.0) == std::vector<std::size_t>{1});
  CHECK(neighbors_within(ps, {0, 0}, 2.0) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("neighbors_within matches a linear scan") {
  RngStream rng(9, 0);
  const Window w = Window::square(10.0);
  const PointSet ps = sample_poisson(5.0, w, rng);
  REQUIRE(ps.size() > 400);
  for (int q = 0; q < 100; ++q) {
    const Point c{rng.uniform(-1, 11), rng.uniform(-1, 11)};
    const double r = rng.uniform(0.0, 2.5);
    CHECK(neighbors_within(ps, c, r) == oracle::neighbors(ps.points(), c, r));
  }
}

TEST_CASE("bin size changes nothing but speed") {
  RngStream rng(10, 0);
  const PointSet base = sample_poisson(4.0, Window::square(12.0), rng);
  const double r = 1.3;
  for (double bin : {r / 2.0, r, 2.0 * r}) {
    const PointSet ps = base.rebinned(bin);
    for (std::size_t i = 0; i < base.size(); i += 7) {
      CHECK(neighbors_within(ps, base[i], r) == oracle::neighbors(base.points(), base[i], r));
    }
  }
}

TEST_CASE("grid lookup finds every point") {
  RngStream rng(11, 0);
  const PointSet ps = sample_poisson(3.0, Window{0, 0, 7.5, 3.2}, rng, 0.6);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto members = ps.cell_members(ps[i]);
    CHECK(std::find(members.begin(), members.end(), i) != members.end());
  }
}

TEST_CASE("points outside the window are rejected") {
  CHECK_THROWS_AS(PointSet({{5, 5}}, Window::square(1.0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(PointSet({}, Window{0, 0, 0, 1}, 0.0), std::invalid_argument);
}

TEST_CASE("segments_intersect") {
  CHECK(segments_intersect({{0, 0}, {1, 1}}, {{0, 1}, {1, 0}}));
  CHECK_FALSE(segments_intersect({{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}));
  CHECK(segments_intersect({{0, 0}, {2, 0}}, {{1, 0}, {3, 0}}));
  // Shared endpoint, T-junction, collinear but apart, near miss.
  CHECK(segments_intersect({{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}));
  CHECK(segments_intersect({{0, 0}, {2, 0}}, {{1, 0}, {1, 1}}));
  CHECK_FALSE(segments_intersect({{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}));
  CHECK_FALSE(segments_intersect({{0, 0}, {1, 0}}, {{0.5, 1e-6}, {0.5, 1}}));
  // Degenerate point segments.
  CHECK(segments_intersect({{0.5, 0}, {0.5, 0}}, {{0, 0}, {1, 0}}));
  CHECK_FALSE(segments_intersect({{0.5, 0.1}, {0.5, 0.1}}, {{0, 0}, {1, 0}}));
}

TEST_CASE("segments_intersect is symmetric on random segments") {
  RngStream rng(12, 0);
  for (int i = 0; i < 2000; ++i) {
    const Segment a{{rng.uniform(0, 1), rng.uniform(0, 1)}, {rng.uniform(0, 1), rng.uniform(0, 1)}};
    const Segment b{{rng.uniform(0, 1), rng.uniform(0, 1)}, {rng.uniform(0, 1), rng.uniform(0, 1)}};
    CHECK(segments_intersect(a, b) == segments_intersect(b, a));
    CHECK(segments_intersect(a, b) == segments_intersect({a.b, a.a}, b));
  }
}

TEST_CASE("clip_segment") {
  const Window w = Window::square(1.0);
  const auto inside = clip_segment({{0.2, 0.2}, {0.8, 0.3}}, w);
  REQUIRE(inside);
  CHECK(inside->a == Point{0.2, 0.2});

  const auto through = clip_segment({{-1, 0.5}, {2, 0.5}}, w);
  REQUIRE(through);
  CHECK(through->a.x == doctest::Approx(0.0));
  CHECK(through->b.x == doctest::Approx(1.0));

  CHECK_FALSE(clip_segment({{-1, 2}, {2, 2}}, w));
  CHECK(clip_segment({{-1, 1}, {2, 1}}, w));  // along the top edge
}

TEST_CASE("restrict_to and select_points keep order") {
  const PointSet ps({{0.5, 0.5}, {3, 3}, {1, 1}}, Window::square(4.0), 1.0);
  std::vector<std::size_t> kept;
  const PointSet r = restrict_to(ps, Window::square(2.0), &kept);
  CHECK(kept == std::vector<std::size_t>{0, 2});
  CHECK(r.window() == Window::square(2.0));
  const std::vector<char> keep = {0, 1, 1};
  const PointSet s = select_points(ps, keep, 0.5);
  CHECK(s.size() == 2);
  CHECK(s[0] == Point{3, 3});
  CHECK(s.density() == 0.5);
}
