#pragma once

#include <array>
#include <span>
#include <vector>

#include "germlie/coefficient.hpp"

namespace germlie {

/// Multi-index k = (k1, k2); for d = 1 only k1 is used.
using MultiIndex = std::array<int, 2>;

/// Number of multi-indices with |k| <= degree in dimension `dim`.
int term_count(int dim, int degree);
/// Graded ordering: all indices of total degree 0, then 1, and so on.
/// Within a degree n (d = 2) the order is (n,0), (n-1,1), ..., (0,n).
MultiIndex multi_index_at(int dim, int flat);
int flat_index(int dim, const MultiIndex& k);
inline int total_degree(const MultiIndex& k) { return k[0] + k[1]; }

/// A degree-bounded power series around `anchor` standing in for a bounded
/// holomorphic function on the ball B(anchor, radius).
///
/// The represented function is f = P + T + F where P is the stored polynomial,
/// T is an unknown remainder vanishing to order degree_bound + 1 at the anchor
/// with sup_{B(anchor, radius)} ||T|| <= high_order_tail(), and F is an unknown
/// remainder of arbitrary shape with sup ||F|| <= flat_tail(). Restriction to a
/// smaller radius rho' shrinks the first part by (rho'/rho)^(N+1) (Schwarz lemma
/// along complex lines through the anchor) and leaves the second unchanged.
///
/// Values are immutable; every operation returns a new series.
class TruncatedSeries {
 public:
  /// The zero series.
  TruncatedSeries(CoefficientSpace space, Point anchor, int degree_bound, double radius);

  /// `coeffs` is in graded order and may be shorter than term_count (missing
  /// entries are zero) but not longer.
  TruncatedSeries(CoefficientSpace space, Point anchor, int degree_bound, double radius,
                  std::vector<Coeff> coeffs, double high_order_tail = 0.0,
                  double flat_tail = 0.0);

  static TruncatedSeries constant(CoefficientSpace space, Point anchor, int degree_bound,
                                  double radius, const Coeff& value);

  const CoefficientSpace& space() const { return space_; }
  int dim() const { return static_cast<int>(anchor_.size()); }
  const Point& anchor() const { return anchor_; }
  int degree_bound() const { return degree_; }
  double radius() const { return radius_; }

  double tail_bound() const { return high_tail_ + flat_tail_; }
  double high_order_tail() const { return high_tail_; }
  double flat_tail() const { return flat_tail_; }

  std::span<const Coeff> coeffs() const { return coeffs_; }
  const Coeff& coeff(int flat) const { return coeffs_.at(static_cast<std::size_t>(flat)); }
  const Coeff& coeff(const MultiIndex& k) const { return coeff(flat_index(dim(), k)); }

  /// Value of the stored polynomial at x.
  Coeff eval(const Point& x) const;
  /// Convenience for d = 1.
  Coeff eval(cplx z) const;

  /// Sum over k of ||c_k|| rho^|k|.
  double polynomial_majorant(double rho) const;
  /// Bound for the sup of the omitted remainder on the radius-rho ball.
  double tail_at(double rho) const;

  /// Same function seen on the smaller ball B(anchor, rho), rho <= radius.
  TruncatedSeries restricted(double rho) const;

  TruncatedSeries with_tails(double high_order_tail, double flat_tail) const;

  bool is_zero_polynomial() const;

 private:
  CoefficientSpace space_;
  Point anchor_;
  int degree_ = 0;
  double radius_ = 1.0;
  std::vector<Coeff> coeffs_;
  double high_tail_ = 0.0;
  double flat_tail_ = 0.0;
};

/// Re-expand a series around a new anchor whose ball lies inside the old one.
/// Exact for the polynomial part; the old remainder becomes a flat remainder.
TruncatedSeries reexpand(const TruncatedSeries& a, const Point& new_anchor, double new_radius);

/// alpha a + beta b on the smaller of the two balls.
TruncatedSeries series_linear(const TruncatedSeries& a, const TruncatedSeries& b, cplx alpha,
                              cplx beta);
TruncatedSeries series_scale(const TruncatedSeries& a, cplx alpha);
inline TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b) {
  return series_linear(a, b, 1.0, 1.0);
}
inline TruncatedSeries series_sub(const TruncatedSeries& a, const TruncatedSeries& b) {
  return series_linear(a, b, 1.0, -1.0);
}

/// Truncated Cauchy product. Degree overflow moves into the high-order tail.
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);
/// a b - b a for matrix-valued series.
TruncatedSeries series_bracket(const TruncatedSeries& a, const TruncatedSeries& b);

/// Constant factors on either side; exact apart from scaling the tails.
TruncatedSeries series_left_mul(const Coeff& c, const TruncatedSeries& a);
TruncatedSeries series_right_mul(const TruncatedSeries& a, const Coeff& c);

/// Data deciding whether the Neumann series for a^{-1} converges on the ball.
struct NeumannCertificate {
  bool constant_invertible = false;
  double inverse_constant_norm = 0.0;  ///< ||a_0^{-1}||
  double variable_majorant = 0.0;      ///< majorant of a - a_0, tails included
  double budget = 0.0;                 ///< ||a_0^{-1}|| * variable_majorant
  double ratio = 0.0;                  ///< c * majorant(a_0^{-1}(a - a_0)), the contraction used
  bool ok() const { return constant_invertible && budget < 1.0 && ratio < 1.0; }
};

NeumannCertificate neumann_certificate(const TruncatedSeries& a);

struct InvertOptions {
  /// Permit shrinking the radius when the budget fails on the full ball.
  bool allow_shrink = true;
  /// Smallest radius the shrink may reach.
  double min_radius = 0.0;
  /// Budget aimed for when shrinking.
  double shrink_target = 0.5;
};

/// Series s with a s = identity up to truncation. May shrink the radius.
TruncatedSeries series_invert(const TruncatedSeries& a, const InvertOptions& options = {});

enum class EntireMap { Exp, Log };

struct ComposeOptions {
  /// Truncation order is chosen so that the series remainder is below
  /// rel_tol * majorant(argument).
  double rel_tol = 1e-14;
  int max_terms = 400;
};

/// Postcomposition with exp or the principal log.
TruncatedSeries series_compose_entire(const TruncatedSeries& a, EntireMap which,
                                      const ComposeOptions& options = {});
inline TruncatedSeries series_exp(const TruncatedSeries& a, const ComposeOptions& o = {}) {
  return series_compose_entire(a, EntireMap::Exp, o);
}
inline TruncatedSeries series_log(const TruncatedSeries& a, const ComposeOptions& o = {}) {
  return series_compose_entire(a, EntireMap::Log, o);
}

/// Upper bound for sup_{|x - anchor| <= rho} ||f(x)||.
double majorant_norm(const TruncatedSeries& a, double rho);
inline double majorant_norm(const TruncatedSeries& a) { return majorant_norm(a, a.radius()); }

/// Lower bound for the same sup, from n boundary samples minus the tail.
double sample_sup(const TruncatedSeries& a, double rho, int n);

/// Largest coefficientwise difference ||a_k - b_k|| rho^|k| (tails ignored).
double coefficient_distance(const TruncatedSeries& a, const TruncatedSeries& b, double rho);

bool same_anchor(const TruncatedSeries& a, const TruncatedSeries& b);

}  // namespace germlie
