#include "germlie/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "germlie/errors.hpp"
#include "germlie/series.hpp"

namespace germlie {

namespace {

void require_finite(const Coeff& c) {
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (!std::isfinite(c.data()[i].real()) || !std::isfinite(c.data()[i].imag())) {
      throw EvaluationError("evaluator returned a non-finite sample");
    }
  }
}

struct CircleCoefficients {
  std::vector<Coeff> coeffs;
  double sup = 0.0;
  double norm_scale = 0.0;
};

CircleCoefficients circle_coefficients(const Evaluator& f, const Point& a, const Point& v,
                                       double radius, int k_max, int q) {
  std::vector<Coeff> samples;
  samples.reserve(static_cast<std::size_t>(q));
  double sup = 0.0;
  for (int j = 0; j < q; ++j) {
    const cplx t = std::polar(radius, 2.0 * std::numbers::pi * j / q);
    Coeff value = f(Point(a + t * v));
    require_finite(value);
    sup = std::max(sup, value.norm());
    samples.push_back(std::move(value));
  }
  CircleCoefficients out;
  out.sup = sup;
  out.coeffs.reserve(static_cast<std::size_t>(k_max + 1));
  for (int k = 0; k <= k_max; ++k) {
    Coeff acc = Coeff::Zero(samples[0].rows(), samples[0].cols());
    for (int j = 0; j < q; ++j) {
      // exp(-2 pi i j k / q), index reduced to keep the angle small
      const int idx = static_cast<int>((static_cast<long long>(j) * k) % q);
      acc += samples[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * std::numbers::pi * idx / q);
    }
    out.coeffs.push_back(acc / (q * std::pow(radius, k)));
  }
  return out;
}

}  // namespace

CauchyExtraction cauchy_extract(const Evaluator& f, const Point& a, const Point& v, double r,
                                int k_max, int quadrature_points, double radius_fraction) {
  if (k_max < 0) throw PreconditionError("k_max must be nonnegative");
  if (quadrature_points < 4 * std::max(k_max, 1)) {
    throw PreconditionError("quadrature needs at least 4 k_max points");
  }
  if (!(r > 0.0) || !(radius_fraction > 0.0 && radius_fraction < 1.0)) {
    throw PreconditionError("quadrature radius must lie strictly inside the disc");
  }
  if (a.size() != v.size()) throw StructuralError("point and direction dimensions differ");

  const double rq = radius_fraction * r;
  CircleCoefficients main = circle_coefficients(f, a, v, rq, k_max, quadrature_points);
  const double scale = std::max(1.0, main.sup);

  CauchyExtraction out;
  out.quadrature_radius = rq;
  out.sample_sup = main.sup;
  out.worst_bound_excess = -1.0;
  // Norms here are Frobenius/Euclidean so the triangle inequality applies
  // entrywise to the quadrature sum.
  for (int k = 0; k <= k_max; ++k) {
    const double excess =
        (main.coeffs[static_cast<std::size_t>(k)].norm() - main.sup / std::pow(rq, k)) * std::pow(rq, k);
    out.worst_bound_excess = std::max(out.worst_bound_excess, excess / scale);
  }

  const double rs = 0.5 * rq;
  CircleCoefficients inner = circle_coefficients(f, a, v, rs, k_max, quadrature_points);
  double residual = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    const double d = (main.coeffs[static_cast<std::size_t>(k)] - inner.coeffs[static_cast<std::size_t>(k)]).norm() *
                     std::pow(rs, k);
    residual = std::max(residual, d / scale);
  }
  out.consistency_residual = residual;
  out.coeffs = std::move(main.coeffs);
  return out;
}

TorusExtraction cauchy_extract_torus(const Evaluator& f, const Point& a, double r, int degree,
                                     int quadrature_points, double radius_fraction) {
  if (a.size() != 2) throw StructuralError("torus extraction needs d = 2");
  if (degree < 0) throw PreconditionError("degree must be nonnegative");
  const int q = quadrature_points;
  if (q < 4 * std::max(degree, 1)) throw PreconditionError("quadrature needs at least 4 degree points");
  const double rq = radius_fraction * r / std::numbers::sqrt2;

  std::vector<cplx> roots(static_cast<std::size_t>(q));
  for (int j = 0; j < q; ++j) roots[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * std::numbers::pi * j / q);

  std::vector<Coeff> samples;
  samples.reserve(static_cast<std::size_t>(q * q));
  double sup = 0.0;
  for (int j1 = 0; j1 < q; ++j1) {
    for (int j2 = 0; j2 < q; ++j2) {
      Point x(2);
      x(0) = a(0) + rq * roots[static_cast<std::size_t>(j1)];
      x(1) = a(1) + rq * roots[static_cast<std::size_t>(j2)];
      Coeff value = f(x);
      require_finite(value);
      sup = std::max(sup, value.norm());
      samples.push_back(std::move(value));
    }
  }
  TorusExtraction out;
  out.quadrature_radius = rq;
  out.sample_sup = sup;
  const int count = term_count(2, degree);
  out.coeffs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const MultiIndex k = multi_index_at(2, i);
    Coeff acc = Coeff::Zero(samples[0].rows(), samples[0].cols());
    for (int j1 = 0; j1 < q; ++j1) {
      const cplx w1 = std::conj(roots[static_cast<std::size_t>((j1 * k[0]) % q)]);
      for (int j2 = 0; j2 < q; ++j2) {
        const cplx w2 = std::conj(roots[static_cast<std::size_t>((j2 * k[1]) % q)]);
        acc += samples[static_cast<std::size_t>(j1 * q + j2)] * (w1 * w2);
      }
    }
    out.coeffs.push_back(acc / (static_cast<double>(q) * q * std::pow(rq, total_degree(k))));
  }
  return out;
}

}  // namespace germlie
