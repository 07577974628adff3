#pragma once

#include <functional>
#include <vector>

#include "germlie/coefficient.hpp"

namespace germlie {

/// A Z-valued function on (a subset of) C^d.
using Evaluator = std::function<Coeff(const Point&)>;

struct CauchyExtraction {
  std::vector<Coeff> coeffs;  ///< beta_0 .. beta_kmax
  double quadrature_radius = 0.0;
  double sample_sup = 0.0;  ///< max ||f|| over the quadrature nodes
  /// max_k (||beta_k|| - sample_sup / r_q^k) / max(1, sample_sup); nonpositive up to rounding.
  double worst_bound_excess = 0.0;
  /// Coefficients recomputed on the circle of half the quadrature radius,
  /// max_k ||beta_k - beta'_k|| (r_q/2)^k / max(1, sup). Small iff f is
  /// holomorphic on the whole disc.
  double consistency_residual = 0.0;
};

/// Taylor coefficients of t -> f(a + t v) by the trapezoid rule on |t| = r_q,
/// r_q = radius_fraction * r. Requires quadrature_points >= 4 k_max.
CauchyExtraction cauchy_extract(const Evaluator& f, const Point& a, const Point& v, double r,
                                int k_max, int quadrature_points = 256,
                                double radius_fraction = 0.8);

struct TorusExtraction {
  std::vector<Coeff> coeffs;  ///< graded order, |k| <= degree
  double quadrature_radius = 0.0;  ///< per-coordinate circle radius
  double sample_sup = 0.0;
};

/// Two-variable version on the torus |t1| = |t2| = radius_fraction * r / sqrt(2),
/// which lies inside the ball of radius r around a.
TorusExtraction cauchy_extract_torus(const Evaluator& f, const Point& a, double r, int degree,
                                     int quadrature_points = 64, double radius_fraction = 0.8);

}  // namespace germlie
