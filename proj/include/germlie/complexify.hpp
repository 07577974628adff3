#pragma once

#include <optional>
#include <vector>

#include "germlie/json_io.hpp"
#include "germlie/report.hpp"
#include "germlie/series.hpp"

namespace germlie {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo < x && x < hi; }
  double mid() const { return 0.5 * (lo + hi); }
  double half_width() const { return 0.5 * (hi - lo); }
};

/// Chart coordinates T', with nested subintervals V' in U' in T'.
struct Chart {
  Interval T;
  Interval U;
  Interval V;
};

/// One overlap component of the real transition phi_j o phi_i^{-1}, given as
/// a scalar d = 1 series in the coordinate of chart i.
struct Transition {
  int i = 0;
  int j = 0;
  Interval overlap;  ///< in chart i coordinates
  TruncatedSeries series;
};

/// A finite real-analytic atlas of a one-dimensional manifold.
class RealAtlas {
 public:
  /// Throws StructuralError unless V'_i, U'_i, T'_i nest with positive margins
  /// and every transition is a real scalar series on an overlap inside T'_i.
  RealAtlas(std::vector<Chart> charts, std::vector<Transition> transitions);

  const std::vector<Chart>& charts() const { return charts_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  int chart_count() const { return static_cast<int>(charts_.size()); }

  /// max |phi_ji(phi_ij(x)) - x| over real grid points of every overlap.
  double real_inverse_residual(int grid = 200) const;

  json to_json() const;
  static RealAtlas from_json(const json& j);

 private:
  std::vector<Chart> charts_;
  std::vector<Transition> transitions_;
};

/// Circle S^1 with charts of angle coordinates centered at 2 pi k / n.
/// U' and V' have 0.9 and 0.8 times the half width.
RealAtlas circle_atlas(int charts = 3, double half_width = 2.2);
/// Two charts of an interval with identity transitions.
RealAtlas interval_atlas();
/// Chart x on (-1.2, 0.6) and chart tan(x) for x in (-0.4, 1.2); transitions
/// tan and arctan as Taylor series of the given degree.
RealAtlas tan_atlas(int degree = 80);

/// Cauchy-Hadamard radius from the upper half of the coefficients, times 0.8,
/// capped by the series radius. A series with zero tail bound is an exact
/// polynomial and gets its series radius.
double convergence_radius_estimate(const TruncatedSeries& s);

/// psi_ij on the rectangle overlap x (-height, height).
struct ExtendedTransition {
  Transition real;
  double height = 0.0;
  double radius_estimate = 0.0;
  std::vector<cplx> coeffs;

  bool contains(cplx z) const { return real.overlap.contains(z.real()) && std::abs(z.imag()) < height; }
  cplx operator()(cplx z) const;
};

/// Slack of the closed rectangle over {x in V'_i cap overlap : psi(x) in V'_j}
/// with half height inside the open transition rectangle.
struct MarginEntry {
  int i = 0;
  int j = 0;
  int component = 0;
  double slack = 0.0;
  bool vacuous = false;
};

class ComplexAtlas {
 public:
  ComplexAtlas(RealAtlas real, std::vector<ExtendedTransition> transitions, double requested_height);

  const RealAtlas& real() const { return real_; }
  const std::vector<ExtendedTransition>& transitions() const { return transitions_; }
  double requested_height() const { return requested_height_; }
  const std::vector<MarginEntry>& margins() const { return margins_; }
  bool margins_positive() const;

  /// The component of psi_ij whose rectangle contains z; psi_ii is the identity.
  const ExtendedTransition* find(int i, int j, cplx z) const;
  std::optional<cplx> apply(int i, int j, cplx z) const;

  /// Adds delta to the constant term of every component of psi_ij.
  ComplexAtlas perturbed(int i, int j, double delta) const;

  json to_json() const;

 private:
  RealAtlas real_;
  std::vector<ExtendedTransition> transitions_;
  double requested_height_;
  std::vector<MarginEntry> margins_;
};

struct ExtendOptions {
  int grid = 20;
  double tolerance = 1e-10;
  int max_halvings = 30;
};

/// Evaluates the real transition series at complex arguments on rectangles of
/// the given height, halving per component until the corner lies inside the
/// estimated convergence disk and psi_ji o psi_ij = id holds on a grid.
/// Throws DomainError naming the transition when no positive height works.
ComplexAtlas extend_transitions(const RealAtlas& atlas, double height, const ExtendOptions& options = {});

/// Points of a grid x grid lattice strictly inside the rectangle of t.
std::vector<cplx> rectangle_grid(const ExtendedTransition& t, int grid);

struct CocycleOptions {
  int grid = 20;
  double tolerance = 1e-9;
};

/// psi_ii = id, psi_ji o psi_ij = id and psi_kj o psi_ik = psi_ij on sampled
/// triple overlaps; details list the worst residual per triple.
CheckReport certify_cocycles(const ComplexAtlas& ca, const CocycleOptions& options = {});

struct UniquenessOptions {
  int grid = 20;
  double real_tolerance = 1e-12;
  double complex_tolerance = 1e-9;
  int max_halvings = 30;
};

/// Two complexifications of one real atlas. The map is the identity in every
/// chart; it is certified on real points and, through the transitions of both
/// atlases, as h o g = id on complex grids of the common domain, which is
/// shrunk until the tolerance holds or reported inconclusive.
CheckReport uniqueness_biholomorphism(const ComplexAtlas& ca1, const ComplexAtlas& ca2,
                                      const UniquenessOptions& options = {});

struct AnnulusOptions {
  int grid = 20;
  double tolerance = 1e-8;          ///< exp(i psi_ij(z)) against exp(i z)
  double real_tolerance = 1e-12;
  double inverse_tolerance = 1e-9;  ///< h o g = id
};

/// For a circle atlas: g(z) = exp(i z) into the annulus model. Checks that g is
/// well defined across transitions, maps real points onto the unit circle, and
/// that the branch-wise inverse h satisfies h o g = id.
CheckReport annulus_comparison(const ComplexAtlas& circle, const AnnulusOptions& options = {});

}  // namespace germlie
