#include "irgg/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "irgg/parallel.hpp"

namespace irgg {

namespace {

constexpr std::uint32_t kModelTag = 0x31;
constexpr std::uint32_t kAttackTag = 0x32;

PointSet thin(const PointSet& ps, double q, RngStream& rng) {
  std::vector<char> keep(ps.size(), 0);
  for (std::size_t i = 0; i < ps.size(); ++i) keep[i] = rng.uniform(0.0, 1.0) >= q ? 1 : 0;
  return select_points(ps, keep, ps.density() * (1.0 - q));
}

PointSet outside_disk(const PointSet& ps, const DiskAttack& d) {
  std::vector<char> keep(ps.size(), 1);
  ps.for_each_within(d.center, d.radius, [&](std::size_t i) { keep[i] = 0; });
  return select_points(ps, keep, ps.density());
}

}  // namespace

void validate(const AttackSpec& spec, const Window& window) {
  if (const auto* r = std::get_if<RandomAttack>(&spec)) {
    if (!(r->q1 >= 0.0 && r->q1 <= 1.0) || !(r->q2 >= 0.0 && r->q2 <= 1.0)) {
      throw std::invalid_argument("removal probabilities must lie in [0, 1]");
    }
    return;
  }
  const auto& d = std::get<DiskAttack>(spec);
  if (!(d.radius > 0.0)) throw std::invalid_argument("attack radius must be positive");
  const double dx = std::clamp(d.center.x, window.x_min, window.x_max) - d.center.x;
  const double dy = std::clamp(d.center.y, window.y_min, window.y_max) - d.center.y;
  if (dx * dx + dy * dy > d.radius * d.radius) {
    throw std::invalid_argument("attack disk does not intersect the window");
  }
}

InterdepModel apply_attack(const InterdepModel& m, const AttackSpec& spec, RngStream& rng) {
  validate(spec, m.window());
  const PointSet& p1 = m.g1().points();
  const PointSet& p2 = m.g2().points();
  PointSet a1;
  PointSet a2;
  if (const auto* r = std::get_if<RandomAttack>(&spec)) {
    a1 = thin(p1, r->q1, rng);
    a2 = thin(p2, r->q2, rng);
  } else {
    const auto& d = std::get<DiskAttack>(spec);
    a1 = outside_disk(p1, d);
    a2 = outside_disk(p2, d);
  }
  return InterdepModel(Rgg(a1, m.g1().conn_dist()), Rgg(a2, m.g2().conn_dist()), m.dep_dist());
}

InterdepModel sample_model(const ModelParams& p, RngStream& rng) {
  PointSet g1 = sample_poisson(p.lam1, p.window, rng, p.d1);
  PointSet g2 = sample_poisson(p.lam2, p.window, rng, p.d2);
  return InterdepModel(Rgg(g1, p.d1), Rgg(g2, p.d2), p.dep);
}

namespace {

AttackSummary summarize_seeds(const ModelParams& params, const AttackSpec* spec,
                              const std::vector<std::uint64_t>& seeds, unsigned threads) {
  AttackSummary s;
  s.per_seed.resize(seeds.size());
  parallel_for(seeds.size(), threads, [&](std::size_t i) {
    RngStream model_rng(seeds[i], make_stream_id(kModelTag, 0, 0));
    const InterdepModel m = sample_model(params, model_rng);
    if (spec) {
      RngStream attack_rng(seeds[i], make_stream_id(kAttackTag, 0, 0));
      s.per_seed[i] = largest_mutual_stats(apply_attack(m, *spec, attack_rng));
    } else {
      s.per_seed[i] = largest_mutual_stats(m);
    }
  });
  if (seeds.empty()) return s;
  s.min_f1 = s.min_f2 = std::numeric_limits<double>::infinity();
  for (const MutualStats& st : s.per_seed) {
    s.mean_f1 += st.f1;
    s.mean_f2 += st.f2;
    s.min_f1 = std::min(s.min_f1, st.f1);
    s.min_f2 = std::min(s.min_f2, st.f2);
  }
  s.mean_f1 /= static_cast<double>(seeds.size());
  s.mean_f2 /= static_cast<double>(seeds.size());
  return s;
}

}  // namespace

AttackSummary post_attack_percolation(const ModelParams& params, const AttackSpec& spec,
                                      const std::vector<std::uint64_t>& seeds, unsigned threads) {
  validate(spec, params.window);
  return summarize_seeds(params, &spec, seeds, threads);
}

AttackSummary mutual_stats_over_seeds(const ModelParams& params,
                                      const std::vector<std::uint64_t>& seeds, unsigned threads) {
  return summarize_seeds(params, nullptr, seeds, threads);
}

std::optional<double> interpolate_curve(const std::vector<CurvePoint>& curve, double lam2) {
  std::vector<std::pair<double, double>> pts;
  for (const CurvePoint& c : curve) {
    if (c.lam1) pts.emplace_back(c.lam2, *c.lam1);
  }
  std::sort(pts.begin(), pts.end());
  if (pts.empty() || lam2 < pts.front().first) return std::nullopt;
  if (lam2 >= pts.back().first) return pts.back().second;
  const auto hi = std::upper_bound(pts.begin(), pts.end(), lam2,
                                   [](double v, const auto& p) { return v < p.first; });
  const auto lo = hi - 1;
  const double t = (lam2 - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

std::vector<FrontierPoint> max_tolerable_random_fraction(const std::vector<CurvePoint>& curve,
                                                         double lam1, double lam2, int q2_steps) {
  if (q2_steps < 1) throw std::invalid_argument("q2_steps must be at least 1");
  if (!(lam1 > 0.0) || lam2 < 0.0) throw std::invalid_argument("lam1 must be positive, lam2 non-negative");
  std::vector<FrontierPoint> out;
  for (int s = 0; s <= q2_steps; ++s) {
    const double q2 = static_cast<double>(s) / q2_steps;
    const std::optional<double> need = interpolate_curve(curve, lam2 * (1.0 - q2));
    if (!need) break;
    double q1 = 1.0 - *need / lam1;
    if (q1 < 0.0) {
      if (q1 < -1e-9) break;
      q1 = 0.0;
    }
    out.push_back({q1, q2});
  }
  return out;
}

}  // namespace irgg
