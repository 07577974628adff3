#pragma once

#include <string>

#include "germlie/germ_space.hpp"
#include "germlie/json_io.hpp"
#include "germlie/liegroup.hpp"

namespace germlie {

/// The germ groups built on a matrix-valued germ space: the local group
/// (Omega, *) in Germ(K, gl(m)) and the group Germ(K, GL(m)).
class GermGroup {
 public:
  explicit GermGroup(GermSpacePtr space, int bch_order = 8);

  const GermSpacePtr& space() const { return space_; }
  const MatrixLieBackend& lie() const { return lie_; }

  /// Omega: majorant norm below the BCH radius.
  double omega_budget() const { return lie_.bch_radius(); }
  /// Omega_1: pairs whose BCH product stays inside Omega_2.
  double omega1_budget() const { return 0.25 * MatrixLieBackend::kLn2; }
  /// Omega_2: values on K within this distance of 0.
  double omega2_eps() const { return 0.5; }

  bool in_omega(const BHolElement& e) const { return e.norm_upper() < omega_budget(); }
  bool in_omega1(const BHolElement& e) const { return e.norm_upper() < omega1_budget(); }
  /// Every anchor value has norm below omega2_eps.
  bool in_omega2(const BHolElement& e) const;

 private:
  GermSpacePtr space_;
  MatrixLieBackend lie_;
};

struct Certificate {
  std::string kind;
  double budget = 0.0;
  double margin = 0.0;
  json to_json() const { return {{"kind", kind}, {"budget", budget}, {"margin", margin}}; }
};

/// An element of Omega, certified by its majorant norm.
class LocalGermElement {
 public:
  /// Throws DomainError when norm_upper >= budget.
  static LocalGermElement certify(const BHolElement& e, double budget);

  const BHolElement& element() const { return element_; }
  int level() const { return element_.level(); }
  const Certificate& certificate() const { return certificate_; }

 private:
  LocalGermElement(BHolElement e, Certificate c) : element_(std::move(e)), certificate_(std::move(c)) {}
  BHolElement element_;
  Certificate certificate_;
};

/// An invertible-matrix-valued germ: every anchor series has an invertible
/// constant term and satisfies the Neumann budget on its ball.
class GermGroupElement {
 public:
  /// Throws DomainError when the certificate fails at the element's level.
  static GermGroupElement certify(const BHolElement& e);
  /// Certifies at the first level >= e.level() where the certificate holds.
  static GermGroupElement certify_deepening(const BHolElement& e);
  static GermGroupElement identity(const GermSpacePtr& space, int level);

  const BHolElement& element() const { return element_; }
  int level() const { return element_.level(); }
  const Certificate& certificate() const { return certificate_; }
  Coeff eval(const Point& x) const { return element_.eval(x); }

 private:
  GermGroupElement(BHolElement e, Certificate c) : element_(std::move(e)), certificate_(std::move(c)) {}
  BHolElement element_;
  Certificate certificate_;
};

GermGroupElement bond(const GermGroupElement& g, int level);

struct BchGerm {
  BHolElement value;
  double remainder = 0.0;  ///< pointwise bound for the omitted BCH orders
};

/// Pointwise BCH product of Lie-algebra valued germs at their common level.
/// Throws DomainError when norm_upper(x) + norm_upper(y) >= bch radius.
BchGerm germ_bch(const GermGroup& g, const BHolElement& x, const BHolElement& y);
inline BchGerm germ_bch(const GermGroup& g, const LocalGermElement& x, const LocalGermElement& y) {
  return germ_bch(g, x.element(), y.element());
}

/// [eta] -> [exp o eta]; deepens the level if the result needs it for its certificate.
GermGroupElement EXP(const GermGroup& g, const BHolElement& eta);
/// Principal log; bonds to the first level where ||gamma - 1|| < 1 on every ball.
/// Throws DomainError when no available level satisfies the branch budget.
BHolElement LOG(const GermGroup& g, const GermGroupElement& gamma);

GermGroupElement group_mul(const GermGroup& g, const GermGroupElement& a, const GermGroupElement& b);
/// Neumann inversion; bonds deeper rather than shrinking radii.
GermGroupElement group_inv(const GermGroup& g, const GermGroupElement& a);
GermGroupElement group_pow(const GermGroup& g, const GermGroupElement& a, int n);

struct AdResult {
  BHolElement value;
  /// R = M(gamma) M(gamma^{-1}) / 4 at the common level, so that
  /// norm_upper(value) <= R norm_upper(eta).
  double bound = 0.0;
  double eta_norm = 0.0;  ///< norm_upper(eta) at the common level
};

/// Pointwise adjoint action gamma eta gamma^{-1}.
AdResult AD(const GermGroup& g, const GermGroupElement& gamma, const BHolElement& eta);

// ---------------------------------------------------------------------------
// Fixtures: series JSON per anchor plus {level, certificate}.

json germ_space_to_json(const GermSpace& s);
GermSpacePtr germ_space_from_json(const json& j);

json element_to_json(const BHolElement& e);
BHolElement element_from_json(const GermSpacePtr& space, const json& j);

json fixture_to_json(const GermGroupElement& g);
json fixture_to_json(const LocalGermElement& x);
/// Re-certifies on load; throws DomainError when the stored certificate no longer holds.
GermGroupElement group_fixture_from_json(const GermSpacePtr& space, const json& j);
LocalGermElement local_fixture_from_json(const GermSpacePtr& space, const json& j);

}  // namespace germlie
