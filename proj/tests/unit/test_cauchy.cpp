#include <cmath>

#include "doctest.h"

#include "germlie/cauchy.hpp"
#include "germlie/errors.hpp"
#include "germlie/random.hpp"

using namespace germlie;

namespace {

Coeff scalar(cplx v) {
  Coeff c(1, 1);
  c(0, 0) = v;
  return c;
}

Point p1(cplx z) {
  Point p(1);
  p(0) = z;
  return p;
}

}  // namespace

TEST_CASE("monomial z^2") {
  const auto out = cauchy_extract([](const Point& x) { return scalar(x(0) * x(0)); }, p1(0.0),
                                  p1(1.0), 1.0, 8);
  for (int k = 0; k <= 8; ++k) {
    CHECK(std::abs(out.coeffs[static_cast<std::size_t>(k)](0, 0) - (k == 2 ? 1.0 : 0.0)) < 1e-12);
  }
}

TEST_CASE("constant matrix") {
  Coeff c(2, 2);
  c << cplx(1, 2), cplx(3, 0), cplx(0, -1), cplx(0.5, 0.5);
  const auto out = cauchy_extract([&](const Point&) { return c; }, p1(0.3), p1(1.0), 0.5, 6);
  CHECK((out.coeffs[0] - c).norm() < 1e-14);
  for (int k = 1; k <= 6; ++k) CHECK(out.coeffs[static_cast<std::size_t>(k)].norm() < 1e-12);
}

TEST_CASE("random degree 8 polynomial") {
  Rng rng = substream(11, 0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> c;
    for (int k = 0; k <= 8; ++k) c.push_back(random_coeff(rng, CoefficientSpace::scalar())(0, 0));
    const cplx a(0.2, -0.4);
    auto f = [&](const Point& x) {
      cplx acc = 0.0;
      for (int k = 8; k >= 0; --k) acc = acc * (x(0) - a) + c[static_cast<std::size_t>(k)];
      return scalar(acc);
    };
    const auto out = cauchy_extract(f, p1(a), p1(1.0), 1.0, 8, 256);
    for (int k = 0; k <= 8; ++k) {
      CHECK(std::abs(out.coeffs[static_cast<std::size_t>(k)](0, 0) - c[static_cast<std::size_t>(k)]) < 1e-10);
      CHECK(out.coeffs[static_cast<std::size_t>(k)].norm() <=
            out.sample_sup / std::pow(out.quadrature_radius, k) + 1e-12);
    }
    CHECK(out.worst_bound_excess <= 1e-12);
    CHECK(out.consistency_residual < 1e-10);
  }
}

TEST_CASE("exp along a direction") {
  const cplx v(0.6, 0.8);
  const auto out = cauchy_extract([](const Point& x) { return scalar(std::exp(x(0))); }, p1(0.0),
                                  p1(v), 1.0, 12, 256);
  double fact = 1.0;
  for (int k = 0; k <= 12; ++k) {
    if (k > 0) fact *= k;
    CHECK(std::abs(out.coeffs[static_cast<std::size_t>(k)](0, 0) - std::pow(v, k) / fact) < 1e-12);
  }
}

TEST_CASE("a pole inside the disc breaks consistency") {
  const auto out = cauchy_extract([](const Point& x) { return scalar(1.0 / (x(0) - 0.6)); },
                                  p1(0.0), p1(1.0), 1.0, 8, 256);
  CHECK(out.consistency_residual > 1e-3);
}

TEST_CASE("errors") {
  auto f = [](const Point& x) { return scalar(x(0)); };
  CHECK_THROWS_AS(cauchy_extract(f, p1(0.0), p1(1.0), 1.0, 8, 16), PreconditionError);
  auto bad = [](const Point&) { return scalar(std::nan("")); };
  CHECK_THROWS_AS(cauchy_extract(bad, p1(0.0), p1(1.0), 1.0, 4), EvaluationError);
}

TEST_CASE("torus extraction in two variables") {
  Point a(2);
  a << cplx(0.1), cplx(0.0, 0.2);
  auto f = [&](const Point& x) {
    const cplx u = x(0) - a(0), w = x(1) - a(1);
    return scalar(1.0 + 2.0 * u - 3.0 * w + u * w + 0.5 * w * w * u);
  };
  const auto out = cauchy_extract_torus(f, a, 1.0, 4, 64);
  CHECK(std::abs(out.coeffs[static_cast<std::size_t>(flat_index(2, {0, 0}))](0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(out.coeffs[static_cast<std::size_t>(flat_index(2, {1, 0}))](0, 0) - 2.0) < 1e-12);
  CHECK(std::abs(out.coeffs[static_cast<std::size_t>(flat_index(2, {0, 1}))](0, 0) + 3.0) < 1e-12);
  CHECK(std::abs(out.coeffs[static_cast<std::size_t>(flat_index(2, {1, 1}))](0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(out.coeffs[static_cast<std::size_t>(flat_index(2, {1, 2}))](0, 0) - 0.5) < 1e-11);
  CHECK(std::abs(out.coeffs[static_cast<std::size_t>(flat_index(2, {2, 0}))](0, 0)) < 1e-12);
}
