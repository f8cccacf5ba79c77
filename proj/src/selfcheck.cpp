#include "irgg/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <boost/math/distributions/binomial.hpp>

#include "irgg/analytic_bounds.hpp"
#include "irgg/config.hpp"
#include "irgg/interdep.hpp"
#include "irgg/mc_bounds.hpp"
#include "irgg/rgg.hpp"
#include "irgg/robustness.hpp"

namespace irgg {

namespace {

class Checker {
 public:
  explicit Checker(const SelfcheckOptions& o) : corrupt_(o.corrupt_tolerance) {}

  double tol(double t) const { return corrupt_ ? -std::abs(t) - 1.0 : t; }

  void expect(const std::string& module, const std::string& name, bool ok, const std::string& detail = {}) {
    results_.push_back({module, name, ok, detail});
  }

  void near(const std::string& module, const std::string& name, double got, double want, double t) {
    std::ostringstream d;
    d << "got " << got << ", want " << want << " +/- " << t;
    expect(module, name, std::abs(got - want) <= tol(t), d.str());
  }

  void at_most(const std::string& module, const std::string& name, double got, double bound) {
    std::ostringstream d;
    d << "got " << got << ", bound " << bound;
    expect(module, name, got <= bound + tol(1e-12), d.str());
  }

  void guarded(const std::string& module, const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      expect(module, name, false, std::string("threw: ") + e.what());
    }
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  bool corrupt_;
  std::vector<CheckResult> results_;
};

std::vector<std::size_t> brute_neighbors(const PointSet& ps, Point c, double r) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (distance_sq(ps[i], c) <= r * r) out.push_back(i);
  }
  return out;
}

// Component count by BFS over the all-pairs adjacency.
std::size_t brute_component_count(const Rgg& g) {
  std::vector<char> seen(g.size(), 0);
  std::size_t count = 0;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (seen[s]) continue;
    ++count;
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (!seen[j] && distance_sq(g[i], g[j]) <= g.conn_dist() * g.conn_dist()) {
          seen[j] = 1;
          stack.push_back(j);
        }
      }
    }
  }
  return count;
}

// Exhaustive (k1*, k2*) search for the supply-feasibility question.
bool brute_supply(const std::vector<int>& t1, const std::vector<int>& t2) {
  for (int a = 1; a <= static_cast<int>(t1.size()); ++a) {
    for (int b = 1; b <= static_cast<int>(t2.size()); ++b) {
      const auto n1 = std::count_if(t1.begin(), t1.end(), [b](int t) { return t <= b; });
      const auto n2 = std::count_if(t2.begin(), t2.end(), [a](int t) { return t <= a; });
      if (n1 >= a && n2 >= b) return true;
    }
  }
  return false;
}

void check_spatial(Checker& c) {
  const std::string m = "spatial";
  c.guarded(m, "neighbors_within matches a linear scan", [&] {
    RngStream rng(11, 0);
    const PointSet ps = sample_poisson(3.0, Window::square(8.0), rng, 0.7);
    bool ok = true;
    for (int q = 0; q < 30; ++q) {
      const Point p{rng.uniform(0, 8), rng.uniform(0, 8)};
      const double r = rng.uniform(0, 2);
      ok = ok && neighbors_within(ps, p, r) == brute_neighbors(ps, p, r);
    }
    c.expect(m, "neighbors_within matches a linear scan", ok);
  });
  c.guarded(m, "sampling is reproducible", [&] {
    RngStream a(7, 0), b(7, 0);
    c.expect(m, "sampling is reproducible",
             sample_poisson(2.0, Window::square(20.0), a).points() ==
                 sample_poisson(2.0, Window::square(20.0), b).points());
  });
  c.expect(m, "segment intersection basics",
           segments_intersect({{0, 0}, {1, 1}}, {{0, 1}, {1, 0}}) &&
               !segments_intersect({{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}) &&
               segments_intersect({{0, 0}, {2, 0}}, {{1, 0}, {3, 0}}));
}

void check_rgg(Checker& c) {
  const std::string m = "rgg";
  c.guarded(m, "component count matches BFS", [&] {
    RngStream rng(12, 0);
    const Rgg g(sample_poisson(2.0, Window::square(10.0), rng), 0.8);
    c.expect(m, "component count matches BFS",
             connected_components(g).component_count() == brute_component_count(g));
  });
  c.guarded(m, "straight chain crosses", [&] {
    std::vector<Point> pts;
    for (int i = 0; i <= 10; ++i) pts.push_back({static_cast<double>(i), 2.0});
    const Rgg g(PointSet(pts, Window::square(10.0), 0.0), 1.0);
    const CrossingSpec h{{1.0, 1.0, 9.0, 3.0}, Direction::horizontal};
    const CrossingSpec v{{1.0, 0.0, 9.0, 10.0}, Direction::vertical};
    c.expect(m, "straight chain crosses",
             has_occupied_crossing(g, h) && !has_vacant_crossing(g, v) && has_vacant_crossing(g, h));
  });
}

void check_interdep(Checker& c) {
  const std::string m = "interdep";
  c.guarded(m, "greedy and seeded components are mutual components", [&] {
    bool ok = true;
    for (std::uint32_t t = 0; t < 30; ++t) {
      RngStream rng(13, t);
      const Window w = Window::square(4.0);
      const InterdepModel model(Rgg(sample_poisson(1.5, w, rng), 1.0), Rgg(sample_poisson(1.5, w, rng), 1.2), 0.6);
      const MutualComponent g = alg2_greedy(model, w);
      ok = ok && (g.empty() || is_mutual_component(model, g));
      for (std::size_t b1 = 0; b1 < model.g1().size(); ++b1) {
        for (std::size_t b2 = 0; b2 < model.g2().size(); ++b2) {
          if (distance(model.g1()[b1], model.g2()[b2]) > model.dep_dist()) continue;
          const MutualComponent a = alg1_mutual_component(model, b1, b2);
          ok = ok && (a.empty() || is_mutual_component(model, a));
        }
      }
    }
    c.expect(m, "greedy and seeded components are mutual components", ok);
  });
}

void check_bounds(Checker& c) {
  const std::string m = "analytic-bounds";
  struct Row { double lam1, d2, dep, lam2; };
  const Row rows[] = {{15, 3, 1.5, 1.54}, {20, 3, 1.5, 0.92}, {25, 3, 1.5, 0.75},
                      {15, 2, 1.0, 2.39}, {20, 2, 1.0, 1.80}, {25, 2, 1.0, 1.58}};
  for (const Row& r : rows) {
    const auto got = small_ratio_solve_lam2(r.lam1, 1.0, r.d2, r.dep);
    c.near(m, "small-ratio threshold at lam1=" + std::to_string(static_cast<int>(r.lam1)) + ", d2=" +
                  std::to_string(static_cast<int>(r.d2)),
           got.value_or(-1.0), r.lam2, 0.01);
  }
  c.near(m, "large-ratio bound at its equality", large_ratio_lhs({16, 0.190, 1, 10, 7.07}), kOneDependentThreshold,
         0.002);
  c.guarded(m, "supply feasibility matches exhaustive search", [&] {
    bool ok = true;
    for (int code = 0; code < 4 * 4 * 4 * 4; ++code) {
      const std::vector<int> t1 = {code % 4 + 1, code / 4 % 4 + 1};
      const std::vector<int> t2 = {code / 16 % 4 + 1, code / 64 % 4 + 1};
      ok = ok && alg3_supply_feasible(t1, t2) == brute_supply(t1, t2);
    }
    c.expect(m, "supply feasibility matches exhaustive search", ok);
  });
}

void check_mc(Checker& c) {
  const std::string m = "mc-bounds";
  c.expect(m, "five failures in 100 accepted, six rejected",
           confidence_verdict(100, 5).accepted && !confidence_verdict(100, 6).accepted);
  const boost::math::binomial_distribution<> b(100, kOneDependentThreshold);
  c.at_most(m, "P(X >= 95) at the threshold", boost::math::cdf(boost::math::complement(b, 94)), 0.005);
  c.near(m, "effective density", effective_density(2.03, 1.8, 0.5), 1.536, 0.01);
  c.guarded(m, "empty graph never opens an upper bond", [&] {
    BondTrialConfig cfg;
    cfg.side = 5.0;
    cfg.query = {0.0, 0.0, 1.0, 1.0, 0.5};
    RngStream rng(14, 0);
    c.expect(m, "empty graph never opens an upper bond", !trial_upper_merge(cfg, rng));
  });
}

void check_robustness(Checker& c) {
  const std::string m = "robustness";
  c.guarded(m, "zero removal keeps every node", [&] {
    RngStream rng(15, 0);
    const ModelParams p{3.0, 2.0, 1.0, 1.0, 0.5, Window::square(6.0)};
    const InterdepModel model = sample_model(p, rng);
    const InterdepModel same = apply_attack(model, RandomAttack{0.0, 0.0}, rng);
    c.expect(m, "zero removal keeps every node",
             same.g1().points().points() == model.g1().points().points() &&
                 same.g2().points().points() == model.g2().points().points());
  });
  c.guarded(m, "frontier on the curve is the origin", [&] {
    const std::vector<CurvePoint> curve = {{1.0, 4.0}, {2.0, 3.0}, {3.0, 2.5}};
    const auto f = max_tolerable_random_fraction(curve, 3.0, 2.0, 20);
    c.expect(m, "frontier on the curve is the origin", f.size() == 1 && f[0].q1_max == 0.0 && f[0].q2 == 0.0);
  });
}

void check_config(Checker& c) {
  const std::string m = "exp-cli";
  c.guarded(m, "table config parses", [&] {
    std::istringstream in("[experiment]\nkind = table1\n[simulation]\nwindow = 10\nseeds = 2\n[rows]\nr1 = 15 1.54 1 3 1.5\n");
    const ExperimentConfig cfg = parse_config(in);
    c.expect(m, "table config parses", cfg.rows.size() == 1 && cfg.seeds == 2);
  });
  bool rejected = false;
  try {
    std::istringstream in("[experiment]\nkind = table1\n[rows]\nr1 = 15 1.54 1 3 1.0\n");
    parse_config(in);
  } catch (const ConfigError&) {
    rejected = true;
  }
  c.expect(m, "dep below d2/2 is rejected", rejected);
}

}  // namespace

std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& options) {
  Checker c(options);
  check_spatial(c);
  check_rgg(c);
  check_interdep(c);
  check_bounds(c);
  check_mc(c);
  check_robustness(c);
  check_config(c);
  return c.take();
}

bool print_selfcheck(const std::vector<CheckResult>& results, std::ostream& out) {
  std::vector<std::string> order;
  std::map<std::string, std::pair<int, int>> tally;
  for (const CheckResult& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.module << ": " << r.name;
    if (!r.passed && !r.detail.empty()) out << " (" << r.detail << ")";
    out << '\n';
    if (!tally.count(r.module)) order.push_back(r.module);
    auto& t = tally[r.module];
    t.first += r.passed ? 1 : 0;
    t.second += 1;
  }
  bool all = true;
  for (const std::string& mod : order) {
    const auto [pass, total] = tally[mod];
    out << mod << ": " << pass << "/" << total << (pass == total ? " pass" : " FAIL") << '\n';
    all = all && pass == total;
  }
  return all;
}

}  // namespace irgg
