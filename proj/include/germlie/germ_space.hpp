#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "germlie/cauchy.hpp"
#include "germlie/errors.hpp"
#include "germlie/random.hpp"
#include "germlie/report.hpp"
#include "germlie/series.hpp"

namespace germlie {

/// The graded neighborhood basis U_n = K + B(0, rho_n) of a finite anchor set K,
/// rho_n = rho_0 r^n, with values in a coefficient space Z.
///
/// Levels are numbered from 0. U_n is the union of the anchor balls of radius
/// rho_n, and p_n(x) = |x| / rho_n satisfies p_n <= r p_{n+1}.
class GermSpace {
 public:
  static constexpr double kRatioLimit = 0.18393972058572117;  ///< 1 / (2e)

  GermSpace(std::vector<Point> anchors, double base_radius, double ratio, int levels,
            CoefficientSpace space, int degree = 12);

  const std::vector<Point>& anchors() const { return anchors_; }
  int anchor_count() const { return static_cast<int>(anchors_.size()); }
  int dim() const { return static_cast<int>(anchors_.front().size()); }
  double base_radius() const { return base_radius_; }
  double ratio() const { return ratio_; }
  int levels() const { return levels_; }
  const CoefficientSpace& space() const { return space_; }
  int degree() const { return degree_; }

  /// rho_n
  double radius(int level) const;
  double seminorm(int level, const Point& x) const { return point_norm(x) / radius(level); }
  /// Index of the nearest anchor whose closed level-n ball contains x, or -1.
  int anchor_containing(int level, const Point& x) const;
  bool contains(int level, const Point& x) const { return anchor_containing(level, x) >= 0; }
  /// Pairs i < j whose level-n balls intersect.
  std::vector<std::pair<int, int>> overlapping_pairs(int level) const;

  /// Random point of U_n at most `fraction` rho_n away from a random anchor.
  Point random_point(Rng& rng, int level, double fraction = 1.0) const;

  void require_level(int level) const;

  friend bool operator==(const GermSpace& a, const GermSpace& b);

 private:
  std::vector<Point> anchors_;
  double base_radius_;
  double ratio_;
  int levels_;
  CoefficientSpace space_;
  int degree_;
};

using GermSpacePtr = std::shared_ptr<const GermSpace>;

GermSpacePtr make_germ_space(std::vector<Point> anchors, double base_radius, double ratio,
                             int levels, CoefficientSpace space, int degree = 12);

/// An element of BHol(U_n, Z): one series per anchor, each on the radius rho_n ball.
class BHolElement {
 public:
  BHolElement(GermSpacePtr space, int level, std::vector<TruncatedSeries> reps);

  static BHolElement constant(GermSpacePtr space, int level, const Coeff& value);
  static BHolElement zero(GermSpacePtr space, int level);
  /// Re-expands one series (whose ball must contain every anchor ball) at each anchor.
  static BHolElement from_global(GermSpacePtr space, int level, const TruncatedSeries& global);

  const GermSpacePtr& germ_space() const { return space_; }
  int level() const { return level_; }
  double radius() const { return space_->radius(level_); }
  const std::vector<TruncatedSeries>& reps() const { return reps_; }
  const TruncatedSeries& rep(int anchor) const { return reps_.at(static_cast<std::size_t>(anchor)); }

  /// max over anchors of the majorant norm on the level ball.
  double norm_upper() const { return norm_upper_; }
  /// max over anchors of sample_sup on the level ball.
  double norm_lower(int samples = 256) const;

  /// Largest disagreement of overlapping anchor series at shared sample points,
  /// minus the sum of their tails; 0 for a single anchor.
  double coherence_residual() const { return coherence_residual_; }
  bool coherent(double tol = 1e-9) const { return coherence_residual_ <= tol; }

  /// Value of the stored polynomials at x, using the nearest anchor ball.
  Coeff eval(const Point& x) const;
  double tail_bound() const;

  /// Applies f to every representative.
  template <class F>
  BHolElement map(F&& f) const {
    std::vector<TruncatedSeries> out;
    out.reserve(reps_.size());
    for (const auto& s : reps_) out.push_back(f(s));
    return BHolElement(space_, level_, std::move(out));
  }

 private:
  GermSpacePtr space_;
  int level_;
  std::vector<TruncatedSeries> reps_;
  double norm_upper_ = 0.0;
  double coherence_residual_ = 0.0;
};

/// The bonding map iota_{m,n}: restriction from level m to a level n >= m.
BHolElement bond(const BHolElement& e, int level);

/// Bonds both elements to the deeper of their levels and applies f per anchor.
template <class F>
BHolElement combine(const BHolElement& a, const BHolElement& b, F&& f);

/// A germ around K, represented by an element at some level.
class Germ {
 public:
  explicit Germ(BHolElement element) : element_(std::move(element)) {}
  int level() const { return element_.level(); }
  const BHolElement& element() const { return element_; }
  Germ bonded(int level) const { return Germ(bond(element_, level)); }
  Coeff eval(const Point& x) const { return element_.eval(x); }

 private:
  BHolElement element_;
};

/// Largest scaled coefficient difference max_k ‖c_k - c'_k‖ rho_n^|k| at the common deeper level n.
double germ_distance(const Germ& a, const Germ& b);
bool germs_equal(const Germ& a, const Germ& b, double tol = 1e-9);

/// Random coherent element with norm_upper equal to `majorant`.
BHolElement random_element(const GermSpacePtr& space, int level, Rng& rng, double majorant,
                           double decay = 1.0);

// ---------------------------------------------------------------------------
// Factorization through Cauchy extraction.

struct FactorizeOptions {
  int quadrature_points = 256;
  /// Degree of the recovered series; -1 uses the space default.
  int degree = -1;
  /// Known bound for sup ||f|| on the level balls; sampled when absent.
  std::optional<double> sup_bound;
  /// Interior test points lie within this fraction of rho_n.
  double sample_fraction = 0.5;
  int samples = 100;
  /// Relative tolerance for the Cauchy bound and the consistency residual.
  double holomorphy_tolerance = 1e-8;
  std::uint64_t seed = 0;
};

struct FactorizeResult {
  BHolElement element;
  double reconstruction_error = 0.0;  ///< max ||P(x) - f(x)|| at interior samples
  double isometry_gap = 0.0;          ///< |max ||P|| - max ||f||| on the same samples
  double worst_bound_excess = 0.0;
  double consistency_residual = 0.0;
  double sampled_sup = 0.0;
};

/// Recovers a level-n element from an evaluator bounded and holomorphic on U_n.
/// Throws DomainError "not boundedly holomorphic at claimed radius" when the
/// Cauchy bounds or the two-circle consistency fail.
FactorizeResult factorize(const GermSpacePtr& space, int level, const Evaluator& f,
                          const FactorizeOptions& options = {});

// ---------------------------------------------------------------------------
// Coefficient sups and the estimates built on them.

struct DerivativeSups {
  double radius = 0.0;         ///< ball radius of the family
  std::vector<double> s;       ///< s_0 .. s_N, tails included
  double beyond_scale = 0.0;   ///< s_k <= beyond_scale / radius^k for k > N

  /// sum_k s_k t^k with the certified remainder beyond N; infinite for t >= radius
  /// unless the family has no remainder.
  double weighted_sum(double t) const;
  /// Certified bound for sum_{k > j} s_k t^k.
  double tail_sum(int j, double t) const;
};

/// s_k = sup over the family and the anchors of ||gamma^(k)(a)|| / k!.
/// Exact from coefficients for d = 1; for d = 2 the bound sum_{|alpha| = k} ||c_alpha||.
DerivativeSups derivative_sups(const std::vector<BHolElement>& family);

struct SupEstimateResult {
  double lhs = 0.0;         ///< certified upper bound of sum_k s_k r^k
  double sup_lower = 0.0;   ///< sampled lower bound of sup ||gamma|| over the family
  double factor = 0.0;      ///< R / (R - 2 e r)
  double rhs = 0.0;         ///< factor * sup_lower
  bool precondition_ok = false;
  bool passed = false;
  double margin = 0.0;      ///< lhs - rhs
};

/// The family must live on balls of radius >= R; they are restricted to R.
/// Throws PreconditionError for r >= R / (2e) unless enforce_precondition is false.
SupEstimateResult sup_estimate_check(const std::vector<BHolElement>& family, double big_r, double r,
                            bool enforce_precondition = true, double tol = 1e-12);

struct CompactRegularityOptions {
  int trials = 1000;
  std::uint64_t seed = 0;
  /// Random family members next to the monomials (z - a)^k / rho_n^k.
  int family_size = 32;
  int sup_samples = 512;
};

/// Worst element for the ball inclusion among single-anchor polynomials
/// sum_k t_k ((z - a) / rho_n)^k with t >= 0: maximizes the level-m sup subject
/// to the level-n and level-l ball constraints. The maximizer is exact, so
/// value > eps is a certified counterexample.
struct ExtremalWitness {
  double value = 0.0;  ///< sup over U_m
  std::vector<std::pair<int, double>> terms;  ///< (k, t_k)
};
ExtremalWitness extremal_inclusion_witness(double ratio, int n, int l, int m, double delta,
                                           int degree);

/// Whether e (a level-n element) satisfies ||e||_n <= 1 and ||e||_l <= delta,
/// both certified by majorants.
bool in_hypothesis_set(const BHolElement& e, int l, double delta);

/// Ball inclusion B_1(E_n) cap B_delta(E_l) within B_eps(E_{n+1}) with
/// delta = (1 - 2 e r) r^k0 eps / 2.
CheckReport compact_regularity_check(const GermSpacePtr& space, int n, int l, double eps,
                                     const CompactRegularityOptions& options = {});

struct GlueResult {
  bool ok = false;
  double overlap_residual = 0.0;
  std::optional<BHolElement> element;  ///< on the union of the anchor sets
};

/// Glues elements over K' and K'' (same rho_0, r, level) into one over K' cup K''.
GlueResult glue(const BHolElement& a, const BHolElement& b, double tol = 1e-9);

struct UnionStrategyOptions {
  int trials = 20;
  int samples = 50;
  std::uint64_t seed = 0;
};

/// Generates compatible test functions on K' and K'' at level n, checks
/// agreement on overlaps, glues, and compares the glued element with the source.
/// Also runs an incompatible pair as a negative control.
CheckReport union_strategy_check(const GermSpacePtr& k1, const GermSpacePtr& k2, int level,
                                 const UnionStrategyOptions& options = {});

// ---------------------------------------------------------------------------

template <class F>
BHolElement combine(const BHolElement& a, const BHolElement& b, F&& f) {
  if (!(*a.germ_space() == *b.germ_space())) {
    throw StructuralError("elements live over different germ spaces");
  }
  const int level = std::max(a.level(), b.level());
  const BHolElement ab = bond(a, level);
  const BHolElement bb = bond(b, level);
  std::vector<TruncatedSeries> out;
  out.reserve(ab.reps().size());
  for (std::size_t i = 0; i < ab.reps().size(); ++i) out.push_back(f(ab.reps()[i], bb.reps()[i]));
  return BHolElement(a.germ_space(), level, std::move(out));
}

}  // namespace germlie
