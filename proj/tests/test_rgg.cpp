#include <doctest.h>

#include <numeric>
#include <random>

#include "irgg/rgg.hpp"
#include "oracles.hpp"

using namespace irgg;

namespace {

Rgg make(std::vector<Point> pts, Window w, double d) { return Rgg(PointSet(std::move(pts), w, 0.0), d); }

Rgg random_rgg(std::uint64_t seed, std::uint32_t stream, double lam, Window w, double d) {
  RngStream rng(seed, stream);
  return Rgg(sample_poisson(lam, w, rng), d);
}

std::vector<char> random_mask(std::size_t n, RngStream& rng, double keep) {
  std::vector<char> m(n);
  for (auto& v : m) v = rng.bernoulli(keep) ? 1 : 0;
  return m;
}

}  // namespace

TEST_CASE("collinear points 0.9 apart form one component") {
  const Rgg g = make({{0, 0}, {0.9, 0}, {1.8, 0}}, Window{-1, -1, 3, 1}, 1.0);
  const ComponentLabeling lab = connected_components(g);
  CHECK(lab.component_count() == 1);
  CHECK(lab.size_of_node(2) == 3);
}

TEST_CASE("links use the closed ball") {
  const Rgg apart = make({{0, 0}, {1.0001, 0}}, Window{-1, -1, 2, 1}, 1.0);
  CHECK(connected_components(apart).component_count() == 2);
  const Rgg touching = make({{0, 0}, {1.0, 0}}, Window{-1, -1, 2, 1}, 1.0);
  CHECK(connected_components(touching).component_count() == 1);
}

TEST_CASE("connection distance must be positive") {
  CHECK_THROWS_AS(make({}, Window::square(1.0), 0.0), std::invalid_argument);
}

TEST_CASE("links are symmetric with no self links") {
  const Rgg g = random_rgg(1, 0, 3.0, Window::square(6.0), 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto nb = g.neighbors(i);
    CHECK(std::find(nb.begin(), nb.end(), i) == nb.end());
    for (std::size_t j : nb) {
      const auto back = g.neighbors(j);
      CHECK(std::find(back.begin(), back.end(), i) != back.end());
    }
  }
}

TEST_CASE("component labels match BFS") {
  for (std::uint32_t s = 0; s < 20; ++s) {
    const Rgg g = random_rgg(2, s, 3.0, Window::square(10.0), 1.0);
    const auto lab = connected_components(g);
    CHECK(lab.label == oracle::component_labels(g.points().points(), 1.0));
  }
}

TEST_CASE("masked component labels match BFS on the active nodes") {
  RngStream rng(3, 99);
  for (std::uint32_t s = 0; s < 20; ++s) {
    const Rgg g = random_rgg(3, s, 2.0, Window::square(10.0), 1.0);
    const auto mask = random_mask(g.size(), rng, 0.7);
    const auto lab = connected_components(g, mask);
    const auto want = oracle::component_labels(g.points().points(), 1.0, mask);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(lab.label[i] == (want[i] == SIZE_MAX ? ComponentLabeling::npos : want[i]));
    }
  }
}

TEST_CASE("components do not depend on point order") {
  const Rgg g = random_rgg(4, 0, 2.0, Window::square(10.0), 1.0);
  std::vector<std::size_t> perm(g.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937 gen(5);
  std::shuffle(perm.begin(), perm.end(), gen);
  std::vector<Point> shuffled;
  for (std::size_t i : perm) shuffled.push_back(g[i]);
  const Rgg h = make(shuffled, g.window(), 1.0);
  const auto a = connected_components(g);
  const auto b = connected_components(h);
  // Same partition: i ~ j in g iff perm-images agree in h.
  for (std::size_t x = 0; x < perm.size(); ++x) {
    for (std::size_t y = x + 1; y < perm.size(); y += 5) {
      CHECK((b.label[x] == b.label[y]) == (a.label[perm[x]] == a.label[perm[y]]));
    }
  }
}

TEST_CASE("occupied crossing on hand-made chains") {
  const Window w{-1, -1, 2, 2};
  const Rgg chain = make({{-0.1, 0.5}, {0.5, 0.5}, {1.1, 0.5}}, w, 0.7);
  const Window unit = Window::square(1.0);
  CHECK(has_occupied_crossing(chain, {unit, Direction::horizontal}));
  CHECK_FALSE(has_occupied_crossing(chain, {unit, Direction::vertical}));
  CHECK_FALSE(has_occupied_crossing(make({}, w, 1.0), {unit, Direction::horizontal}));

  // End nodes outside the rect's band do not count.
  const Rgg high = make({{-0.1, 1.2}, {0.5, 0.9}, {1.1, 0.5}}, w, 0.7);
  CHECK_FALSE(has_occupied_crossing(high, {unit, Direction::horizontal}));

  // A node straddling the whole rect in one hop.
  const Rgg hop = make({{-0.1, 0.5}, {1.1, 0.5}}, w, 1.5);
  CHECK(has_occupied_crossing(hop, {unit, Direction::horizontal}));

  // An interior node outside the rect breaks the path.
  const Rgg detour = make({{-0.1, 0.5}, {0.5, 1.3}, {1.1, 0.5}}, w, 1.0);
  CHECK_FALSE(has_occupied_crossing(detour, {unit, Direction::horizontal}));
}

TEST_CASE("occupied crossing rejects a rect outside the window") {
  const Rgg g = make({}, Window::square(1.0), 1.0);
  CHECK_THROWS(has_occupied_crossing(g, {Window{0, 0, 2, 1}, Direction::horizontal}));
}

TEST_CASE("occupied crossing matches the definitional path search") {
  RngStream rng(6, 0);
  int positives = 0;
  for (std::uint32_t s = 0; s < 150; ++s) {
    const double lam = 1.0 + 3.0 * static_cast<double>(s % 10) / 10.0;
    const Rgg g = random_rgg(6, s, lam, Window{0, 0, 8, 5}, 1.0);
    const Window rect{1, 1, 7, 4};
    const auto mask = s % 3 == 0 ? random_mask(g.size(), rng, 0.8) : std::vector<char>{};
    for (bool horizontal : {true, false}) {
      const bool got = has_occupied_crossing(g, {rect, horizontal ? Direction::horizontal : Direction::vertical}, mask);
      const bool want = oracle::occupied_crossing(g.points().points(), 1.0, rect, horizontal, mask);
      CHECK(got == want);
      positives += want ? 1 : 0;
    }
  }
  // Both outcomes must be exercised.
  CHECK(positives > 20);
  CHECK(positives < 280);
}

TEST_CASE("vacant crossing on hand-made links") {
  const Window w{-1, -1, 5, 3};
  const Window rect{0, 0, 4, 2};
  CHECK(has_vacant_crossing(make({}, w, 1.0), {rect, Direction::horizontal}));
  const Rgg spanning = make({{2, -0.5}, {2, 2.5}}, w, 3.5);
  CHECK_FALSE(has_vacant_crossing(spanning, {rect, Direction::horizontal}));
  CHECK(has_vacant_crossing(spanning, {rect, Direction::vertical}));
  // Two links that cross in an X and together span top to bottom.
  const Rgg x = make({{1, -0.2}, {2, 1.3}, {2, 0.7}, {1, 2.2}}, w, 1.9);
  CHECK_FALSE(has_vacant_crossing(x, {rect, Direction::horizontal}));
  // Isolated nodes block nothing.
  const Rgg dots = make({{2, 0}, {2, 1}, {2, 2}}, w, 0.5);
  CHECK(has_vacant_crossing(dots, {rect, Direction::horizontal}));
}

TEST_CASE("vacant crossing matches the raster flood fill") {
  const Window window{0, 0, 6, 4};
  const Window rect{1, 1, 5, 3};
  const double d = 1.0;
  const double step = 0.004 * d;
  int compared = 0;
  int excluded = 0;
  int open = 0;
  for (std::uint32_t s = 0; compared < 200 && s < 1000; ++s) {
    const Rgg g = random_rgg(7, s, 1.5, window, d);
    const bool horizontal = s % 2 == 0;
    const auto segs = oracle::link_segments(g.points().points(), d, rect);
    const auto want = oracle::resolved_vacant_crossing(segs, rect, horizontal, step, 3 * step);
    if (!want) {
      ++excluded;
      continue;
    }
    ++compared;
    open += *want ? 1 : 0;
    CHECK(has_vacant_crossing(g, {rect, horizontal ? Direction::horizontal : Direction::vertical}) == *want);
  }
  CHECK(compared >= 200);
  CHECK(open > 20);
  CHECK(open < 180);
  MESSAGE("vacant raster: " << compared << " compared, " << excluded << " excluded");
}

TEST_CASE("adding a point never opens a vacant crossing or closes an occupied one") {
  const Window w{0, 0, 8, 5};
  const Window rect{1, 1, 7, 4};
  for (std::uint32_t s = 0; s < 60; ++s) {
    RngStream rng(8, s);
    PointSet ps = sample_poisson(1.6, w, rng);
    std::vector<Point> pts = ps.points();
    const Rgg before = make(pts, w, 1.0);
    pts.push_back({rng.uniform(0, 8), rng.uniform(0, 5)});
    const Rgg after = make(pts, w, 1.0);
    for (Direction dir : {Direction::horizontal, Direction::vertical}) {
      if (!has_vacant_crossing(before, {rect, dir})) CHECK_FALSE(has_vacant_crossing(after, {rect, dir}));
      if (has_occupied_crossing(before, {rect, dir})) CHECK(has_occupied_crossing(after, {rect, dir}));
    }
  }
}

TEST_CASE("clipped link segments stay inside the rect") {
  const Rgg g = random_rgg(9, 0, 2.0, Window::square(6.0), 1.0);
  const Window rect{1, 1, 5, 5};
  const auto segs = clipped_link_segments(g, rect);
  CHECK(segs.size() == oracle::link_segments(g.points().points(), 1.0, rect).size());
  for (const Segment& s : segs) {
    CHECK(rect.contains(s.a));
    CHECK(rect.contains(s.b));
  }
}
