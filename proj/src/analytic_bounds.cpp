#include "irgg/analytic_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "irgg/spatial.hpp"

namespace irgg {

namespace {

// Series in rand_supply_p12 stop once the remaining Poisson mass is below
// this.
constexpr double kSeriesTail = 1e-14;

int floor_ratio(double num, double den) {
  // Guard against ratios like 3.0000000000000004 / 2.9999999999999996.
  return static_cast<int>(std::floor(num / den + 1e-12));
}

double poisson_log_pmf(double mean, int l) {
  if (mean <= 0.0) return l == 0 ? 0.0 : -INFINITY;
  return l * std::log(mean) - mean - std::lgamma(l + 1.0);
}

// Smallest L with P(Poisson(mean) > L) < tail.
int poisson_cutoff(double mean, double tail) {
  if (mean <= 0.0) return 0;
  double cdf = 0.0;
  int l = 0;
  while (true) {
    cdf += std::exp(poisson_log_pmf(mean, l));
    if (1.0 - cdf < tail && l >= mean) return l;
    ++l;
    if (l > 100000000) return l;
  }
}

// P(Binomial(n, f) >= k).
double binomial_upper_tail(int n, double f, int k) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (f <= 0.0) return 0.0;
  if (f >= 1.0) return 1.0;
  const double lf = std::log(f);
  const double lq = std::log1p(-f);
  double sum = 0.0;
  for (int t = k; t <= n; ++t) {
    const double lc = std::lgamma(n + 1.0) - std::lgamma(t + 1.0) - std::lgamma(n - t + 1.0);
    sum += std::exp(lc + t * lf + (n - t) * lq);
  }
  return std::min(1.0, sum);
}

void require_positive_distances(const BoundQuery& q) {
  if (!(q.d1 > 0.0) || !(q.d2 > 0.0) || !(q.dep > 0.0)) {
    throw DomainError("distances d1, d2 and dep must be positive");
  }
  if (q.lam1 < 0.0 || q.lam2 < 0.0) throw DomainError("densities must be non-negative");
}

}  // namespace

void check_lattice_domain(const BoundQuery& q) {
  require_positive_distances(q);
  if (q.d1 > q.d2) {
    throw DomainError("lattice bounds require d1 <= d2 (got d1=" + std::to_string(q.d1) +
                      ", d2=" + std::to_string(q.d2) + ")");
  }
  if (q.dep < q.d2 / 2.0) {
    throw DomainError("lattice bounds require dep >= d2/2 (got dep=" + std::to_string(q.dep) +
                      ", d2/2=" + std::to_string(q.d2 / 2.0) + ")");
  }
}

LatticeDerived lattice_derived(const Geometry& g) {
  LatticeDerived out;
  out.c = std::max(1, floor_ratio(g.d2, g.d1));
  out.s = g.d1 / (2.0 * std::sqrt(2.0));
  out.D = std::min(g.d2 / std::sqrt(10.0), g.dep / std::sqrt(5.0));
  out.m = std::max(0, floor_ratio(2.0 * out.D, g.d1));
  out.r = std::min({g.d1, g.d2, 2.0 * g.dep}) / 2.0;
  out.A = kTriangleCellArea * out.r * out.r;
  return out;
}

double small_ratio_lhs(const BoundQuery& q) {
  check_lattice_domain(q);
  const int c = lattice_derived(q.geometry()).c;
  const double d1sq = q.d1 * q.d1;
  const double p1 = std::pow(-std::expm1(-q.lam1 * d1sq / 8.0), c);
  const double p2 = -std::expm1(-q.lam2 * c * c * d1sq / 8.0);
  return p1 * p2;
}

std::optional<double> small_ratio_solve_lam2(double lam1, double d1, double d2, double dep) {
  const BoundQuery q{lam1, 0.0, d1, d2, dep};
  check_lattice_domain(q);
  const int c = lattice_derived(q.geometry()).c;
  const double p1 = std::pow(-std::expm1(-lam1 * d1 * d1 / 8.0), c);
  if (p1 <= kHalfThreshold) return std::nullopt;
  return -(8.0 / (c * c * d1 * d1)) * std::log1p(-kHalfThreshold / p1);
}

double eq1_refined_p1(double p_s) {
  if (!(p_s >= 0.0 && p_s <= 1.0)) throw DomainError("p_s must lie in [0, 1]");
  const double q = 1.0 - p_s;
  const double p3 = p_s * p_s * p_s;
  const double p4 = p3 * p_s;
  const double p6 = p3 * p3;
  return p3 + q * p4 + q * p4 - q * p6;
}

double small_ratio_refined_lhs(const BoundQuery& q) {
  check_lattice_domain(q);
  const int c = lattice_derived(q.geometry()).c;
  if (c != 3) throw DomainError("the refined bound covers floor(d2/d1) = 3 only");
  const double d1sq = q.d1 * q.d1;
  const double p_s = -std::expm1(-q.lam1 * d1sq / 8.0);
  const double p2 = -std::expm1(-q.lam2 * c * c * d1sq / 8.0);
  return eq1_refined_p1(p_s) * p2;
}

double eq2_crossing_lb(int k, int m, double p) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (m < 0) throw DomainError("m must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
  const double decay = std::pow(3.0 * (1.0 - p), m);
  const double v = 1.0 - (4.0 / 3.0) * (static_cast<double>(k) * m + 1.0) * decay;
  return std::max(0.0, v);
}

double large_ratio_lhs(const BoundQuery& q) {
  check_lattice_domain(q);
  const LatticeDerived ld = lattice_derived(q.geometry());
  const double p = -std::expm1(-q.lam1 * q.d1 * q.d1 / 8.0);
  const double p_prime = -std::expm1(-2.0 * ld.D * ld.D * q.lam2);
  return eq2_crossing_lb(1, ld.m, p) * eq2_crossing_lb(2, ld.m, p) * p_prime;
}

std::pair<double, double> large_ratio_example(double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw DomainError("distances must be positive");
  if (d1 > d2) throw DomainError("requires d1 <= d2");
  // p = 2/3 makes 3(1 - p) = 1.
  const double lam1 = 8.0 * std::log(3.0) / (d1 * d1);
  const double D = lattice_derived({d1, d2, d2 / 2.0}).D;
  const double lam2 = -std::log1p(-kOneDependentThreshold) / (2.0 * D * D);
  return {lam1, lam2};
}

double triangle_site_lhs(double lam1, double lam2, double r) {
  if (!(r > 0.0)) throw DomainError("r must be positive");
  if (lam1 < 0.0 || lam2 < 0.0) throw DomainError("densities must be non-negative");
  const double A = kTriangleCellArea * r * r;
  return -std::expm1(-lam1 * A) * -std::expm1(-lam2 * A);
}

double poisson_upper_tail(double mean, int k) {
  if (k <= 0) return 1.0;
  if (mean <= 0.0) return 0.0;
  double below = 0.0;
  for (int l = 0; l < k; ++l) below += std::exp(poisson_log_pmf(mean, l));
  return std::clamp(1.0 - below, 0.0, 1.0);
}

double det_supply_lhs(double lam1, double lam2, double A, int k1, int k2) {
  if (k1 < 1 || k2 < 1) throw DomainError("supply requirements must be >= 1");
  if (!(A > 0.0)) throw DomainError("cell area must be positive");
  if (lam1 < 0.0 || lam2 < 0.0) throw DomainError("densities must be non-negative");
  return poisson_upper_tail(lam1 * A, k1) * poisson_upper_tail(lam2 * A, k2);
}

SupplyPmf::SupplyPmf(std::vector<double> pmf) : pmf_(std::move(pmf)) {
  if (pmf_.empty()) throw DomainError("supply pmf must have support >= 1");
  double total = 0.0;
  for (double v : pmf_) {
    if (v < 0.0) throw DomainError("supply pmf has a negative mass");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("supply pmf must sum to 1");
  cdf_.resize(pmf_.size());
  std::partial_sum(pmf_.begin(), pmf_.end(), cdf_.begin());
  cdf_.back() = 1.0;
}

SupplyPmf SupplyPmf::point_mass(int k) {
  if (k < 1) throw DomainError("supply requirement must be >= 1");
  std::vector<double> v(static_cast<std::size_t>(k), 0.0);
  v.back() = 1.0;
  return SupplyPmf(std::move(v));
}

double SupplyPmf::pmf(int k) const {
  if (k < 1 || k > max_value()) return 0.0;
  return pmf_[static_cast<std::size_t>(k - 1)];
}

double SupplyPmf::cdf(int k) const {
  if (k < 1) return 0.0;
  if (k >= max_value()) return 1.0;
  return cdf_[static_cast<std::size_t>(k - 1)];
}

double rand_supply_p12(double lam1, double lam2, double A, int k1, const SupplyPmf& k2_pmf) {
  if (k1 < 1) throw DomainError("K1 must be >= 1");
  if (!(A > 0.0)) throw DomainError("cell area must be positive");
  if (lam1 < 0.0 || lam2 < 0.0) throw DomainError("densities must be non-negative");
  const double mean1 = lam1 * A;
  const double mean2 = lam2 * A;
  if (mean1 <= 0.0 || mean2 <= 0.0) return 0.0;

  const int l_max = poisson_cutoff(mean1, kSeriesTail);
  const int k2_max = poisson_cutoff(mean2, kSeriesTail);
  std::vector<double> pois1(static_cast<std::size_t>(l_max) + 1);
  for (int l = 0; l <= l_max; ++l) pois1[static_cast<std::size_t>(l)] = std::exp(poisson_log_pmf(mean1, l));

  double total = 0.0;
  double prev_f = -1.0;
  double prev_inner = 0.0;
  for (int k2 = 1; k2 <= k2_max; ++k2) {
    const double f = k2_pmf.cdf(k2);
    double inner = prev_inner;
    if (f != prev_f) {
      inner = 0.0;
      for (int l = k1; l <= l_max; ++l) {
        inner += pois1[static_cast<std::size_t>(l)] * binomial_upper_tail(l, f, k1);
      }
      prev_f = f;
      prev_inner = inner;
    }
    total += std::exp(poisson_log_pmf(mean2, k2)) * inner;
  }
  return std::min(1.0, total);
}

bool alg3_supply_feasible(std::vector<int> tags_on_g1, std::vector<int> tags_on_g2,
                          std::size_t* iterations) {
  if (iterations) *iterations = 0;
  if (tags_on_g1.empty() || tags_on_g2.empty()) return false;
  const auto positive = [](int t) { return t >= 1; };
  if (!std::all_of(tags_on_g1.begin(), tags_on_g1.end(), positive) ||
      !std::all_of(tags_on_g2.begin(), tags_on_g2.end(), positive)) {
    throw DomainError("supply tags must be positive integers");
  }
  // need_from_2[t-1]: t-th smallest number of G2 supplies a G1 node needs;
  // need_from_1 likewise for G2 nodes.
  std::vector<int>& need_from_2 = tags_on_g1;
  std::vector<int>& need_from_1 = tags_on_g2;
  std::sort(need_from_2.begin(), need_from_2.end());
  std::sort(need_from_1.begin(), need_from_1.end());
  const long n1 = static_cast<long>(need_from_2.size());
  const long n2 = static_cast<long>(need_from_1.size());

  long t1 = 1;
  long t2 = 1;
  std::size_t loops = 0;
  while (true) {
    ++loops;
    const long want1 = need_from_1[static_cast<std::size_t>(t2 - 1)];
    const long want2 = need_from_2[static_cast<std::size_t>(t1 - 1)];
    if (want1 <= t1 && want2 <= t2) {
      if (iterations) *iterations = loops;
      return true;
    }
    if (want1 > n1 || want2 > n2) {
      if (iterations) *iterations = loops;
      return false;
    }
    t1 = std::max(t1, want1);
    t2 = std::max(t2, want2);
  }
}

SupplyEstimate estimate_supply_probability(double lam1, double lam2, double A,
                                           const SupplyRequirement& k1,
                                           const SupplyRequirement& k2, std::size_t trials,
                                           std::uint64_t seed) {
  if (!(A > 0.0)) throw DomainError("cell area must be positive");
  if (trials == 0) throw DomainError("need at least one trial");
  RngStream rng(seed, make_stream_id(7, 0, 0));
  const auto& m1 = k1.dist.masses();
  const auto& m2 = k2.dist.masses();
  std::discrete_distribution<int> draw_k1(m1.begin(), m1.end());
  std::discrete_distribution<int> draw_k2(m2.begin(), m2.end());

  std::size_t hits = 0;
  std::vector<int> tags1;
  std::vector<int> tags2;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto n1 = rng.poisson(lam1 * A);
    const auto n2 = rng.poisson(lam2 * A);
    tags1.resize(n1);
    tags2.resize(n2);
    for (auto& v : tags1) v = draw_k2(rng.engine()) + 1;
    for (auto& v : tags2) v = draw_k1(rng.engine()) + 1;
    if (alg3_supply_feasible(tags1, tags2)) ++hits;
  }
  SupplyEstimate e;
  e.trials = trials;
  e.p = static_cast<double>(hits) / static_cast<double>(trials);
  e.std_error = std::sqrt(std::max(e.p * (1.0 - e.p), 1e-300) / static_cast<double>(trials));
  return e;
}

double bound_threshold(BoundId id) {
  return id == BoundId::large_ratio ? kOneDependentThreshold : kHalfThreshold;
}

double bound_lhs(const CurveRequest& req, double lam1, double lam2) {
  const BoundQuery q = BoundQuery::from(req.geometry, lam1, lam2);
  switch (req.bound) {
    case BoundId::small_ratio:
      return small_ratio_lhs(q);
    case BoundId::small_ratio_refined:
      return small_ratio_refined_lhs(q);
    case BoundId::large_ratio:
      return large_ratio_lhs(q);
    case BoundId::triangle_site:
      return triangle_site_lhs(lam1, lam2, lattice_derived(req.geometry).r);
    case BoundId::det_supply:
      return det_supply_lhs(lam1, lam2, lattice_derived(req.geometry).A, req.k1, req.k2);
  }
  throw std::logic_error("unknown bound id");
}

std::vector<CurvePoint> solve_threshold_curve(const CurveRequest& req,
                                              const std::vector<double>& lam2_grid) {
  const double target = bound_threshold(req.bound);
  const double d1sq = req.geometry.d1 * req.geometry.d1;
  std::vector<CurvePoint> out;
  out.reserve(lam2_grid.size());
  for (double lam2 : lam2_grid) {
    const auto f = [&](double lam1) { return bound_lhs(req, lam1, lam2); };
    double lo = 0.0;
    double f_lo = f(lo);
    double hi = 1e3 / d1sq;
    double f_hi = f(hi);
    while (f_hi <= target && hi < 1e9) {
      if (f_hi < f_lo) throw std::logic_error("bound lhs decreases in lam1");
      hi *= 10.0;
      f_hi = f(hi);
    }
    if (f_hi <= target || f_lo > target) {
      out.push_back({lam2, f_lo > target ? std::optional<double>(0.0) : std::nullopt});
      continue;
    }
    while (hi - lo > 1e-10 * hi) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = f(mid);
      if (f_mid < f_lo || f_mid > f_hi) throw std::logic_error("bound lhs is not monotone in lam1");
      if (f_mid > target) {
        hi = mid;
        f_hi = f_mid;
      } else {
        lo = mid;
        f_lo = f_mid;
      }
    }
    out.push_back({lam2, hi});
  }
  return out;
}

}  // namespace irgg
