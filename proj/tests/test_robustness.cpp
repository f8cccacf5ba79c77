#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "irgg/robustness.hpp"
#include "oracles.hpp"

using namespace irgg;

namespace {

InterdepModel sample(std::uint64_t seed, double lam1, double lam2, double side = 10.0) {
  RngStream rng(seed, 0);
  return sample_model({lam1, lam2, 1.0, 3.0, 1.5, Window::square(side)}, rng);
}

std::vector<std::uint64_t> seeds(std::uint64_t first, int n) {
  std::vector<std::uint64_t> s;
  for (int i = 0; i < n; ++i) s.push_back(first + static_cast<std::uint64_t>(i));
  return s;
}

double spread(const AttackSummary& a) {
  double var = 0.0;
  for (const MutualStats& s : a.per_seed) var += (s.f1 - a.mean_f1) * (s.f1 - a.mean_f1);
  return std::sqrt(var / static_cast<double>(a.per_seed.size() - 1) / static_cast<double>(a.per_seed.size()));
}

}  // namespace

TEST_CASE("attack validation") {
  const Window w = Window::square(10.0);
  CHECK_THROWS_AS(validate(RandomAttack{-0.1, 0}, w), std::invalid_argument);
  CHECK_THROWS_AS(validate(RandomAttack{0, 1.1}, w), std::invalid_argument);
  CHECK_THROWS_AS(validate(DiskAttack{{5, 5}, 0.0}, w), std::invalid_argument);
  CHECK_THROWS_AS(validate(DiskAttack{{20, 20}, 1.0}, w), std::invalid_argument);
  CHECK_NOTHROW(validate(DiskAttack{{11, 5}, 1.0}, w));
}

TEST_CASE("no-op thinning keeps the model") {
  const InterdepModel m = sample(1, 5, 2);
  RngStream rng(1, 1);
  const InterdepModel a = apply_attack(m, RandomAttack{0, 0}, rng);
  CHECK(a.g1().points().points() == m.g1().points().points());
  CHECK(a.g2().points().points() == m.g2().points().points());
  CHECK(a.window() == m.window());
  CHECK(a.dep_dist() == m.dep_dist());
}

TEST_CASE("total removal") {
  const InterdepModel m = sample(2, 5, 2);
  RngStream rng(2, 1);
  const InterdepModel a = apply_attack(m, RandomAttack{1, 0.3}, rng);
  CHECK(a.g1().size() == 0);
  CHECK(a.g2().size() > 0);
  const InterdepModel d = apply_attack(m, DiskAttack{{5, 5}, 100}, rng);
  CHECK(d.g1().size() == 0);
  CHECK(d.g2().size() == 0);
  CHECK(largest_mutual_stats(d).f1 == 0.0);
}

TEST_CASE("disk attack removes exactly the closed disk") {
  const InterdepModel m = sample(3, 6, 3);
  const DiskAttack disk{{4.0, 6.5}, 2.2};
  RngStream rng(3, 1);
  const InterdepModel a = apply_attack(m, disk, rng);
  for (int which : {1, 2}) {
    std::vector<Point> want;
    for (const Point& p : m.graph(which).points().points()) {
      if (!oracle::linked(p, disk.center, disk.radius)) want.push_back(p);
    }
    CHECK(a.graph(which).points().points() == want);
  }
  // A point exactly on the circle is removed.
  const InterdepModel edge(Rgg(PointSet({{1, 1}, {3, 1}}, Window::square(4.0), 0.0), 1.0),
                           Rgg(PointSet({}, Window::square(4.0), 0.0), 1.0), 0.5);
  CHECK(apply_attack(edge, DiskAttack{{1, 1}, 2.0}, rng).g1().size() == 0);
}

TEST_CASE("thinned points look like a fresh Poisson sample at the reduced density") {
  const auto cell_chi2_ok = [](std::uint64_t seed) {
    const InterdepModel m = sample(seed, 20, 1, 10.0);
    RngStream rng(seed, 9);
    const InterdepModel a = apply_attack(m, RandomAttack{0.6, 0.0}, rng);
    const auto& pts = a.g1().points().points();
    // 5 x 5 cell counts against the uniform expectation.
    std::vector<double> counts(25, 0.0);
    for (const Point& p : pts) {
      const int i = std::min(4, static_cast<int>(p.x / 2.0));
      const int j = std::min(4, static_cast<int>(p.y / 2.0));
      counts[static_cast<std::size_t>(5 * j + i)] += 1.0;
    }
    const double e = static_cast<double>(pts.size()) / 25.0;
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - e) * (c - e) / e;
    const boost::math::chi_squared_distribution<> dist(24.0);
    const double mean = 20 * 0.4 * 100;
    return chi2 <= boost::math::quantile(dist, 0.99) &&
           std::abs(static_cast<double>(pts.size()) - mean) <= 4 * std::sqrt(mean) &&
           a.g1().points().density() == doctest::Approx(8.0);
  };
  CHECK((cell_chi2_ok(4) || cell_chi2_ok(5)));
}

TEST_CASE("smaller removal probability keeps a superset") {
  const InterdepModel m = sample(6, 5, 2);
  RngStream a(6, 1), b(6, 1);
  const InterdepModel light = apply_attack(m, RandomAttack{0.2, 0.2}, a);
  const InterdepModel heavy = apply_attack(m, RandomAttack{0.5, 0.5}, b);
  const auto& lp = light.g1().points().points();
  for (const Point& p : heavy.g1().points().points()) CHECK(std::find(lp.begin(), lp.end(), p) != lp.end());
}

TEST_CASE("a vanishing disk changes nothing") {
  const ModelParams p{15, 1.848, 1, 3, 1.5, Window::square(10.0)};
  const AttackSummary none = mutual_stats_over_seeds(p, seeds(1, 3), 1);
  const AttackSummary tiny = post_attack_percolation(p, DiskAttack{{5.0, 5.0}, 1e-12}, seeds(1, 3), 1);
  CHECK(none.mean_f1 == tiny.mean_f1);
  CHECK(none.mean_f2 == tiny.mean_f2);
  CHECK(tiny.per_seed.size() == 3);
}

TEST_CASE("summaries do not depend on the thread count") {
  const ModelParams p{15, 1.848, 1, 3, 1.5, Window::square(10.0)};
  const AttackSummary one = post_attack_percolation(p, RandomAttack{0.3, 0.3}, seeds(1, 4), 1);
  const AttackSummary two = post_attack_percolation(p, RandomAttack{0.3, 0.3}, seeds(1, 4), 2);
  CHECK(one.mean_f1 == two.mean_f1);
  CHECK(one.min_f2 == two.min_f2);
}

TEST_CASE("mutual fractions fall with heavier attacks") {
  const ModelParams p{4, 4, 1, 1, 0.5, Window::square(10.0)};
  const auto s = seeds(100, 20);
  AttackSummary prev = post_attack_percolation(p, RandomAttack{0.0, 0.0}, s, 1);
  for (double q : {0.3, 0.5, 0.7}) {
    const AttackSummary cur = post_attack_percolation(p, RandomAttack{q, q}, s, 1);
    CHECK(cur.mean_f1 <= prev.mean_f1 + 3 * std::hypot(spread(cur), spread(prev)) + 1e-12);
    prev = cur;
  }
  // Disks measured over the surviving nodes: a larger hole leaves the rest at
  // least as fragmented.
  const ModelParams dense{2.5, 2.5, 1, 1, 0.5, Window::square(12.0)};
  AttackSummary last = post_attack_percolation(dense, DiskAttack{{6, 6}, 0.5}, s, 1);
  for (double r : {2.0, 4.0}) {
    const AttackSummary cur = post_attack_percolation(dense, DiskAttack{{6, 6}, r}, s, 1);
    CHECK(cur.mean_f1 <= last.mean_f1 + 3 * std::hypot(spread(cur), spread(last)) + 1e-12);
    last = cur;
  }
}

TEST_CASE("thinning far below the threshold leaves no giant component") {
  const ModelParams p{4, 4, 1, 1, 0.5, Window::square(30.0)};
  const AttackSummary a = post_attack_percolation(p, RandomAttack{0.75, 0.75}, seeds(1, 5), 1);
  CHECK(a.mean_f1 < 0.2);
  CHECK(a.mean_f2 < 0.2);
}

TEST_CASE("curve interpolation") {
  const std::vector<CurvePoint> c = {{1.0, 10.0}, {2.0, std::nullopt}, {3.0, 6.0}};
  CHECK_FALSE(interpolate_curve(c, 0.5));
  CHECK(*interpolate_curve(c, 1.0) == doctest::Approx(10.0));
  CHECK(*interpolate_curve(c, 2.0) == doctest::Approx(8.0));
  CHECK(*interpolate_curve(c, 9.0) == doctest::Approx(6.0));
  CHECK_FALSE(interpolate_curve({}, 1.0));
}

TEST_CASE("random-failure frontier") {
  CurveRequest req;
  req.geometry = {1, 3, 1.5};
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(0.8 + 0.05 * i);
  const auto curve = solve_threshold_curve(req, grid);

  // On the curve: nothing can be removed.
  const double lam2 = 1.54;
  const double lam1 = *interpolate_curve(curve, lam2);
  const auto on = max_tolerable_random_fraction(curve, lam1, lam2, 100);
  REQUIRE(!on.empty());
  CHECK(on.front().q1_max == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(on.front().q2 == 0.0);
  for (const FrontierPoint& f : on) CHECK(f.q2 == 0.0);

  // Twice the curve density tolerates half the nodes of G1 at q2 = 0.
  const auto twice = max_tolerable_random_fraction(curve, 2 * lam1, lam2, 100);
  CHECK(twice.front().q1_max >= 0.5 - 1e-9);
  for (std::size_t i = 1; i < twice.size(); ++i) {
    CHECK(twice[i].q2 > twice[i - 1].q2);
    CHECK(twice[i].q1_max <= twice[i - 1].q1_max + 1e-12);
  }
  // Every frontier point sits on or above the curve.
  for (const FrontierPoint& f : twice) {
    const auto need = interpolate_curve(curve, lam2 * (1 - f.q2));
    REQUIRE(need);
    CHECK(2 * lam1 * (1 - f.q1_max) >= *need - 1e-9);
  }
}
