#pragma once

// Closed-form sufficient conditions for a giant mutual component, obtained by
// mapping the interdependent model onto lattices with known thresholds, and
// the supply-requirement extensions (fixed or random number of required
// supply nodes).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace irgg {

/// Raised when a bound is evaluated outside its hypotheses.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Bond-open probability above which a 1-dependent square-lattice bond model
/// percolates.
inline constexpr double kOneDependentThreshold = 0.8639;
/// Site/bond threshold of the triangle-lattice site and independent square
/// bond models.
inline constexpr double kHalfThreshold = 0.5;
/// Area of a triangle-lattice cell bounded by arcs of radius r, over r^2.
inline constexpr double kTriangleCellArea = 0.8227;

struct Geometry {
  double d1 = 1.0;
  double d2 = 1.0;
  double dep = 0.5;
};

struct BoundQuery {
  double lam1 = 0.0;
  double lam2 = 0.0;
  double d1 = 1.0;
  double d2 = 1.0;
  double dep = 0.5;

  static BoundQuery from(const Geometry& g, double lam1, double lam2) {
    return {lam1, lam2, g.d1, g.d2, g.dep};
  }
  Geometry geometry() const { return {d1, d2, dep}; }
};

/// Throws DomainError unless densities are non-negative, distances positive,
/// d1 <= d2 and dep >= d2 / 2.
void check_lattice_domain(const BoundQuery& q);

struct LatticeDerived {
  int c = 1;          // floor(d2 / d1)
  double s = 0.0;     // small-square side d1 / (2 sqrt 2)
  double D = 0.0;     // min(d2 / sqrt 10, dep / sqrt 5)
  int m = 0;          // floor(2 D / d1)
  double r = 0.0;     // min(d1, d2, 2 dep) / 2
  double A = 0.0;     // triangle-cell area for radius r
};

LatticeDerived lattice_derived(const Geometry& g);

/// (1 - e^{-lam1 d1^2/8})^c (1 - e^{-lam2 c^2 d1^2/8}); percolation is
/// guaranteed when the value exceeds 1/2.
double small_ratio_lhs(const BoundQuery& q);

/// Closed-form inversion of small_ratio_lhs = 1/2 for lam2; nullopt when the G1
/// factor alone is already <= 1/2.
std::optional<double> small_ratio_solve_lam2(double lam1, double d1, double d2, double dep);

/// Probability that the bond ends of a 3 x 3 block of small squares are linked
/// by occupied squares along the diagonal or along either of the two detours
/// around an empty centre square; each square is occupied with probability
/// p_s. Only meaningful for floor(d2/d1) = 3.
double eq1_refined_p1(double p_s);

/// eq1_refined_p1(p_s) times the G2 factor of small_ratio_lhs; requires c = 3.
double small_ratio_refined_lhs(const BoundQuery& q);

/// Lower bound on a horizontal open-bond crossing of a km x m lattice with
/// bond probability p: max(0, 1 - (4/3)(km + 1) (3(1 - p))^m).
double eq2_crossing_lb(int k, int m, double p);

/// Product of the two crossing bounds (k = 1, 2) and the G2 occupancy
/// probability 1 - e^{-2 D^2 lam2}; percolation is guaranteed above 0.8639.
double large_ratio_lhs(const BoundQuery& q);

/// Densities where 1 - e^{-lam1 d1^2/8} = 2/3 and 1 - e^{-2 D^2 lam2} = 0.8639
/// with dep = d2 / 2.
std::pair<double, double> large_ratio_example(double d1, double d2);

/// (1 - e^{-lam1 A})(1 - e^{-lam2 A}) with A = 0.8227 r^2.
double triangle_site_lhs(double lam1, double lam2, double r);

/// P(Poisson(mean) >= k).
double poisson_upper_tail(double mean, int k);

/// Product of the two "at least K_i nodes in a cell of area A" probabilities.
double det_supply_lhs(double lam1, double lam2, double A, int k1, int k2);

/// Probability mass function over 1..n: pmf[i] is P(K = i + 1).
class SupplyPmf {
 public:
  explicit SupplyPmf(std::vector<double> pmf);
  static SupplyPmf point_mass(int k);

  int max_value() const { return static_cast<int>(pmf_.size()); }
  double pmf(int k) const;
  double cdf(int k) const;
  const std::vector<double>& masses() const { return pmf_; }

 private:
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

/// A fixed or random supply requirement.
struct SupplyRequirement {
  SupplyPmf dist = SupplyPmf::point_mass(1);
  bool fixed = true;

  static SupplyRequirement constant(int k) { return {SupplyPmf::point_mass(k), true}; }
  static SupplyRequirement random(SupplyPmf pmf) { return {std::move(pmf), false}; }
};

/// Probability that a cell of area A holds exactly k2 >= 1 G2 nodes together
/// with at least k1 G1 nodes each needing at most k2 supply nodes, summed over
/// k2. Series are truncated once the remaining Poisson mass is below 1e-14.
double rand_supply_p12(double lam1, double lam2, double A, int k1, const SupplyPmf& k2_pmf);

/// Do tags admit (k1*, k2*) with at least k1* G1 nodes tagged <= k2* and at
/// least k2* G2 nodes tagged <= k1*? tags_on_g1 are the G1 nodes' required
/// numbers of G2 supplies; tags_on_g2 symmetric. Empty input on either side
/// gives false. `iterations`, when non-null, receives the loop count.
bool alg3_supply_feasible(std::vector<int> tags_on_g1, std::vector<int> tags_on_g2,
                          std::size_t* iterations = nullptr);

/// Monte-Carlo estimate of the probability that a cell of area A is open
/// under random requirements for both graphs (Poisson counts, i.i.d. tags,
/// decided by alg3_supply_feasible).
struct SupplyEstimate {
  double p = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};
SupplyEstimate estimate_supply_probability(double lam1, double lam2, double A,
                                           const SupplyRequirement& k1,
                                           const SupplyRequirement& k2, std::size_t trials,
                                           std::uint64_t seed);

enum class BoundId { small_ratio, small_ratio_refined, large_ratio, triangle_site, det_supply };

struct CurveRequest {
  BoundId bound = BoundId::small_ratio;
  Geometry geometry;
  int k1 = 1;  // det_supply only
  int k2 = 1;
};

/// Left-hand side of the chosen bound and its percolation constant.
double bound_lhs(const CurveRequest& req, double lam1, double lam2);
double bound_threshold(BoundId id);

struct CurvePoint {
  double lam2 = 0.0;
  std::optional<double> lam1;
};

/// For each lam2, bisects lam1 onto the bound's equality (relative tolerance
/// 1e-6 or better). Entries with no finite lam1 are nullopt. Throws
/// std::logic_error if the lhs is seen decreasing in lam1.
std::vector<CurvePoint> solve_threshold_curve(const CurveRequest& req,
                                              const std::vector<double>& lam2_grid);

}  // namespace irgg
