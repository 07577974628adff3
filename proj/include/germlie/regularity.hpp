#pragma once

#include <functional>
#include <ostream>
#include <vector>

#include "germlie/germ_group.hpp"

namespace germlie {

/// alpha a + beta b at the common level.
BHolElement element_linear(const BHolElement& a, const BHolElement& b, cplx alpha, cplx beta);

/// A continuous piecewise polynomial curve [0, 1] -> Germ(K, gl(m)).
///
/// Segment i lives on [t_i, t_{i+1}] and stores up to four germ coefficients
/// c_0..c_3, so that gamma(t) = sum_j c_j (t - t_i)^j.
class LieCurve {
 public:
  LieCurve(std::vector<double> breakpoints, std::vector<std::vector<BHolElement>> segments);

  static LieCurve constant(const BHolElement& xi);
  static LieCurve zero(const GermSpacePtr& space, int level);

  const GermSpacePtr& space() const { return space_; }
  int level() const { return level_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  int segment_count() const { return static_cast<int>(segments_.size()); }
  const std::vector<BHolElement>& segment(int i) const { return segments_.at(static_cast<std::size_t>(i)); }
  /// Segment containing t; t = t_{i+1} belongs to segment i + 1 except at t = 1.
  int segment_index(double t) const;

  BHolElement value(double t) const;
  /// gamma(t)(x) from the stored polynomials.
  Coeff eval(double t, const Point& x) const;

  /// Largest scaled coefficient jump at interior breakpoints.
  double continuity_residual() const { return continuity_residual_; }
  bool continuous(double tol = 1e-12) const { return continuity_residual_ <= tol; }
  /// Upper bound for sup_t norm_upper(gamma(t)).
  double norm_bound() const { return norm_bound_; }

  /// The piece on [a, b] (both breakpoints) reparametrized to [0, 1]:
  /// t -> (b - a) gamma(a + (b - a) t).
  LieCurve rescaled_piece(double a, double b) const;

 private:
  GermSpacePtr space_;
  int level_ = 0;
  std::vector<double> breakpoints_;
  std::vector<std::vector<BHolElement>> segments_;
  double continuity_residual_ = 0.0;
  double norm_bound_ = 0.0;
};

/// a + s b; both curves need the same breakpoints.
LieCurve curve_axpy(const LieCurve& a, const LieCurve& b, double s);

/// Random continuous cubic spline with `pieces` equal segments and norm_bound <= majorant.
LieCurve random_lie_curve(const GermSpacePtr& space, int level, Rng& rng, int pieces, double majorant);

/// Any germ-valued curve that is smooth between its breakpoints.
struct CurveFunction {
  GermSpacePtr space;
  int level = 0;
  std::vector<double> breakpoints{0.0, 1.0};
  std::function<BHolElement(double)> value;
};

CurveFunction as_function(const LieCurve& c);

struct EvolOptions {
  int steps = 64;
  /// Repeat with 2 steps and report the endpoint drift.
  bool estimate_error = true;
};

struct EvolutionResult {
  GermGroupElement endpoint;
  std::vector<double> times;
  std::vector<GermGroupElement> trajectory;  ///< eta(times[i]), starting with the identity
  int step_count = 0;
  double error_estimate = 0.0;  ///< germ_distance of the endpoints for steps and 2 steps
};

/// Left evolution eta' = eta gamma, eta(0) = 1, by the fourth-order Magnus
/// step eta <- eta EXP(h/2 (A1 + A2) + sqrt(3) h^2 / 12 [A1, A2]) with A1, A2
/// at the Gauss nodes. The step grid contains every breakpoint.
/// Throws PreconditionError for steps < 4 and DomainError, naming t, when a
/// step leaves the budget.
EvolutionResult evol(const CurveFunction& gamma, const EvolOptions& options = {});
/// Also requires norm_bound below the Omega budget.
EvolutionResult evol(const LieCurve& gamma, const EvolOptions& options = {});

/// A Lie-algebra valued curve known at finitely many times.
struct SampledLieCurve {
  std::vector<double> times;
  std::vector<BHolElement> values;
};

/// A piecewise polynomial curve of invertible germs; coefficients per
/// segment in powers of local time, any degree.
class GroupPolyCurve {
 public:
  GroupPolyCurve(std::vector<double> breakpoints, std::vector<std::vector<BHolElement>> segments);

  const GermSpacePtr& space() const { return space_; }
  int level() const { return level_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<BHolElement>& segment(int i) const { return segments_.at(static_cast<std::size_t>(i)); }
  int segment_count() const { return static_cast<int>(segments_.size()); }

  /// Throws DomainError when the invertibility certificate fails at t.
  GermGroupElement value(double t) const;
  BHolElement derivative(double t) const;

  friend GroupPolyCurve operator*(const GroupPolyCurve& a, const GroupPolyCurve& b);

 private:
  int segment_index(double t) const;

  GermSpacePtr space_;
  int level_ = 0;
  std::vector<double> breakpoints_;
  std::vector<std::vector<BHolElement>> segments_;
};

/// Single-segment eta(t) = 1 + sum_{j=1..degree} B_j t^j with random B_j, so eta(0) = 1.
GroupPolyCurve random_group_curve(const GermSpacePtr& space, int level, Rng& rng, int degree,
                                  double majorant);

/// (delta^l eta)(t) = eta(t)^{-1} eta'(t) by series inversion and the formal t-derivative.
BHolElement left_log_derivative(const GroupPolyCurve& eta, double t);
SampledLieCurve left_log_derivative(const GroupPolyCurve& eta, const std::vector<double>& times);
CurveFunction left_log_derivative_curve(const GroupPolyCurve& eta);

/// delta^l of a sampled trajectory: seven-point difference quotients taken
/// inside each segment of `breakpoints`, which must lie on the time grid.
SampledLieCurve left_log_derivative(const EvolutionResult& eta, const std::vector<double>& breakpoints);

// ---------------------------------------------------------------------------

/// max ||a(x) - b(x)|| over x; the points must lie in both levels' sets.
double pointwise_distance(const BHolElement& a, const BHolElement& b, const std::vector<Point>& points);
/// Random points in U_{n+1}, n = `level`, which keeps truncation tails negligible.
std::vector<Point> evaluation_points(const GermSpace& s, int level, Rng& rng, int count);

struct RegularityOptions {
  int steps = 64;
  int points = 20;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
};

/// delta^l(evol trajectory of gamma) against gamma at the grid times.
CheckReport roundtrip_check(const LieCurve& gamma, const RegularityOptions& options = {});
/// evol(delta^l eta) against eta(1); eta(0) must be the identity.
CheckReport roundtrip_check(const GroupPolyCurve& eta, const RegularityOptions& options = {});

struct SmoothnessOptions {
  int steps = 32;
  /// Geometric sequence s, s q, s q^2 of difference scales.
  std::vector<double> scales{0.08, 0.04, 0.02};
  double min_order = 1.9;
  double max_order = 2.1;
};

/// Central quotients Q(s) = [evol(gamma + s h) - evol(gamma - s h)] / 2s and the
/// observed order log(|Q(s1) - Q(s2)| / |Q(s2) - Q(s3)|) / log(s1 / s2).
/// Finite differences only evidence differentiability; they do not prove smoothness.
CheckReport smoothness_check(const LieCurve& gamma, const LieCurve& h, const SmoothnessOptions& options = {});

/// Rows t, point, then re/im of every matrix entry in row-major order.
void write_trajectory_csv(std::ostream& out, const EvolutionResult& r, const std::vector<Point>& points);

}  // namespace germlie
