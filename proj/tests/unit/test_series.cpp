#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

#include "germlie/errors.hpp"
#include "germlie/json_io.hpp"
#include "germlie/random.hpp"
#include "germlie/series.hpp"

using namespace germlie;

namespace {

Point origin() { return Point::Zero(1); }

Coeff scalar(cplx v) {
  Coeff c(1, 1);
  c(0, 0) = v;
  return c;
}

TruncatedSeries scalar_poly(std::vector<cplx> c, int degree, double radius) {
  std::vector<Coeff> coeffs;
  for (cplx v : c) coeffs.push_back(scalar(v));
  return TruncatedSeries(CoefficientSpace::scalar(), origin(), degree, radius, coeffs);
}

// Direct term-by-term evaluation, independent of the Horner path.
Coeff direct_eval(const TruncatedSeries& s, const Point& x) {
  Coeff acc = s.space().zero();
  for (int i = 0; i < static_cast<int>(s.coeffs().size()); ++i) {
    const MultiIndex k = multi_index_at(s.dim(), i);
    cplx mono = std::pow(x(0) - s.anchor()(0), k[0]);
    if (s.dim() == 2) mono *= std::pow(x(1) - s.anchor()(1), k[1]);
    acc += s.coeff(i) * mono;
  }
  return acc;
}

}  // namespace

TEST_CASE("multi-index ordering is graded and invertible") {
  CHECK(term_count(1, 12) == 13);
  CHECK(term_count(2, 3) == 10);
  for (int i = 0; i < term_count(2, 6); ++i) CHECK(flat_index(2, multi_index_at(2, i)) == i);
  CHECK(multi_index_at(2, 1) == MultiIndex{1, 0});
  CHECK(multi_index_at(2, 2) == MultiIndex{0, 1});
}

TEST_CASE("linear combinations") {
  Rng rng = substream(1, 1);
  const auto space = CoefficientSpace::matrix(2);
  const TruncatedSeries s = random_series(rng, space, origin(), 12, 0.5, 1.0).with_tails(1e-3, 0.0);

  SUBCASE("s - s is the zero series with doubled tail") {
    const TruncatedSeries d = series_sub(s, s);
    CHECK(d.is_zero_polynomial());
    CHECK(d.tail_bound() == doctest::Approx(2e-3));
  }
  SUBCASE("s + 0 s") {
    const TruncatedSeries z(space, origin(), 12, 0.5);
    const TruncatedSeries r = series_linear(s, z, 1.0, 0.0);
    CHECK(coefficient_distance(r, s, 0.5) == 0.0);
  }
  SUBCASE("pointwise") {
    const TruncatedSeries t = random_series(rng, space, origin(), 12, 0.5, 1.0);
    const TruncatedSeries r = series_linear(s, t, 2.0, 3.0);
    for (int i = 0; i < 20; ++i) {
      const Point x = random_point_in_ball(rng, origin(), 0.5);
      const Coeff expect = 2.0 * direct_eval(s, x) + 3.0 * direct_eval(t, x);
      CHECK((r.eval(x) - expect).norm() < 1e-12);
    }
  }
  SUBCASE("anchor mismatch") {
    Point other(1);
    other(0) = 0.1;
    const TruncatedSeries t(space, other, 12, 0.5);
    CHECK_THROWS_AS(series_add(s, t), StructuralError);
  }
  SUBCASE("coefficient space mismatch") {
    const TruncatedSeries t(CoefficientSpace::matrix(3), origin(), 12, 0.5);
    CHECK_THROWS_AS(series_add(s, t), StructuralError);
  }
}

TEST_CASE("products") {
  SUBCASE("(1 + z)(1 - z) = 1 - z^2") {
    const auto p = series_mul(scalar_poly({1.0, 1.0}, 4, 0.5), scalar_poly({1.0, -1.0}, 4, 0.5));
    CHECK(p.coeff(0)(0, 0) == cplx(1.0));
    CHECK(p.coeff(1)(0, 0) == cplx(0.0));
    CHECK(p.coeff(2)(0, 0) == cplx(-1.0));
    CHECK(p.tail_bound() == 0.0);
  }
  SUBCASE("identity is a unit") {
    Rng rng = substream(2, 1);
    const auto space = CoefficientSpace::matrix(3);
    const auto b = random_series(rng, space, origin(), 10, 0.4, 2.0);
    const auto one = TruncatedSeries::constant(space, origin(), 10, 0.4, space.identity());
    CHECK(coefficient_distance(series_mul(one, b), b, 0.4) < 1e-15);
    CHECK(coefficient_distance(series_mul(b, one), b, 0.4) < 1e-15);
  }
  SUBCASE("matrix product against pointwise evaluation") {
    Rng rng = substream(2, 2);
    const auto space = CoefficientSpace::matrix(2);
    const auto a = random_series(rng, space, origin(), 12, 0.5, 1.0, 0.3);
    const auto b = random_series(rng, space, origin(), 12, 0.5, 1.0, 0.3);
    const auto p = series_mul(a, b);
    for (int i = 0; i < 20; ++i) {
      const Point x = random_point_in_ball(rng, origin(), 0.5);
      const Coeff expect = direct_eval(a, x) * direct_eval(b, x);
      CHECK((p.eval(x) - expect).norm() <= p.tail_bound() + 1e-10);
    }
  }
  SUBCASE("associativity up to truncation") {
    Rng rng = substream(2, 3);
    const auto space = CoefficientSpace::matrix(2);
    for (int trial = 0; trial < 10; ++trial) {
      const auto a = random_series(rng, space, origin(), 12, 0.5, 1.0, 0.2);
      const auto b = random_series(rng, space, origin(), 12, 0.5, 1.0, 0.2);
      const auto c = random_series(rng, space, origin(), 12, 0.5, 1.0, 0.2);
      const auto l = series_mul(series_mul(a, b), c);
      const auto r = series_mul(a, series_mul(b, c));
      for (int i = 0; i < 20; ++i) {
        const Point x = random_point_in_ball(rng, origin(), 0.5);
        const Coeff expect = direct_eval(a, x) * direct_eval(b, x) * direct_eval(c, x);
        CHECK((l.eval(x) - r.eval(x)).norm() < 1e-10 + l.tail_bound() + r.tail_bound());
        CHECK((l.eval(x) - expect).norm() <= l.tail_bound() + 1e-10);
      }
    }
  }
  SUBCASE("d = 2 product against evaluation") {
    Rng rng = substream(2, 4);
    const auto space = CoefficientSpace::scalar();
    const Point a0 = Point::Zero(2);
    const auto a = random_series(rng, space, a0, 8, 0.5, 1.0, 0.5);
    const auto b = random_series(rng, space, a0, 8, 0.5, 1.0, 0.5);
    const auto p = series_mul(a, b);
    for (int i = 0; i < 20; ++i) {
      const Point x = random_point_in_ball(rng, a0, 0.5);
      CHECK((p.eval(x) - direct_eval(a, x) * direct_eval(b, x)).norm() <= p.tail_bound() + 1e-12);
    }
  }
}

TEST_CASE("inversion") {
  SUBCASE("constants") {
    Coeff c(2, 2);
    c << cplx(2.0), cplx(1.0), cplx(0.0, 1.0), cplx(3.0);
    const auto s = TruncatedSeries::constant(CoefficientSpace::matrix(2), origin(), 6, 1.0, c);
    const auto inv = series_invert(s);
    CHECK((inv.coeff(0) - c.inverse()).norm() < 1e-14);
    for (int k = 1; k <= 6; ++k) CHECK(inv.coeff(k).norm() == 0.0);
    CHECK(inv.radius() == 1.0);
  }
  SUBCASE("geometric series") {
    const int n = 12;
    const auto inv = series_invert(scalar_poly({1.0, -1.0}, n, 0.5));
    for (int k = 0; k <= n; ++k) CHECK(inv.coeff(k)(0, 0).real() == doctest::Approx(1.0));
    CHECK(inv.radius() == 0.5);
    CHECK(inv.tail_bound() <= std::pow(0.5, n + 1) / 0.5 * (1 + 1e-12));
  }
  SUBCASE("matrix series near identity") {
    Rng rng = substream(3, 1);
    const auto space = CoefficientSpace::matrix(2);
    for (int trial = 0; trial < 10; ++trial) {
      auto a = random_series(rng, space, origin(), 12, 0.5, 0.3, 0.3);
      a = series_add(a, TruncatedSeries::constant(space, origin(), 12, 0.5, space.identity()));
      const auto inv = series_invert(a);
      const auto prod = series_mul(a, inv);
      for (int i = 0; i < 20; ++i) {
        const Point x = random_point_in_ball(rng, origin(), inv.radius());
        CHECK((prod.eval(x) - space.identity()).norm() < 1e-9);
      }
    }
  }
  SUBCASE("singular constant") {
    const auto s = scalar_poly({0.0, 1.0}, 4, 0.5);
    CHECK_THROWS_AS(series_invert(s), DomainError);
  }
  SUBCASE("unattainable budget reports the radius") {
    const auto s = scalar_poly({1.0, -4.0}, 4, 1.0);
    InvertOptions opt;
    opt.min_radius = 0.5;
    try {
      series_invert(s, opt);
      FAIL("expected a domain error");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("radius") != std::string::npos);
    }
  }
  SUBCASE("shrinking is recorded in the radius") {
    const auto inv = series_invert(scalar_poly({1.0, -4.0}, 8, 1.0));
    CHECK(inv.radius() < 0.25);
  }
}

TEST_CASE("composition with exp and log") {
  SUBCASE("exp(0) = 1") {
    const auto space = CoefficientSpace::matrix(2);
    const auto e = series_exp(TruncatedSeries(space, origin(), 8, 1.0));
    CHECK((e.coeff(0) - space.identity()).norm() == 0.0);
    for (int k = 1; k <= 8; ++k) CHECK(e.coeff(k).norm() == 0.0);
  }
  SUBCASE("exp(z) has coefficients 1/k!") {
    const auto e = series_exp(scalar_poly({0.0, 1.0}, 12, 1.0));
    double fact = 1.0;
    for (int k = 0; k <= 12; ++k) {
      if (k > 0) fact *= k;
      CHECK(std::abs(e.coeff(k)(0, 0) - 1.0 / fact) < 1e-15);
    }
    // the omitted part is sum_{k > 12} 1/k!
    CHECK(e.tail_bound() >= 1.0 / 6227020800.0 / 13.0);
  }
  SUBCASE("log(exp(a)) = a with a pointwise oracle") {
    Rng rng = substream(4, 1);
    const auto space = CoefficientSpace::matrix(2);
    for (int trial = 0; trial < 10; ++trial) {
      const auto a = random_series(rng, space, origin(), 12, 0.5, 0.2, 0.3);
      const auto e = series_exp(a);
      const auto back = series_log(e);
      CHECK(coefficient_distance(back, a, 1.0) < 1e-9);
      for (int i = 0; i < 5; ++i) {
        const Point x = random_point_in_ball(rng, origin(), 0.5);
        const oracle::CMat ax = direct_eval(a, x);
        CHECK((oracle::CMat(e.eval(x)) - oracle::expm(ax)).norm() <= e.tail_bound() + 1e-12);
      }
    }
  }
  SUBCASE("log branch budget") {
    const auto s = scalar_poly({1.0, 1.2}, 4, 1.0);
    CHECK_THROWS_AS(series_log(s), DomainError);
  }
}

TEST_CASE("norm surrogates") {
  SUBCASE("constants") {
    Coeff c(2, 1);
    c << cplx(3.0), cplx(0.0, 4.0);
    const auto s = TruncatedSeries::constant(CoefficientSpace::vector(2), origin(), 4, 1.0, c);
    CHECK(majorant_norm(s, 1.0) == doctest::Approx(5.0));
    CHECK(sample_sup(s, 1.0, 50) == doctest::Approx(5.0));
  }
  SUBCASE("monomial") {
    const auto s = scalar_poly({0.0, 1.0}, 4, 0.7);
    CHECK(majorant_norm(s, 0.7) == doctest::Approx(0.7));
    CHECK(sample_sup(s, 0.7, 64) == doctest::Approx(0.7));
  }
  SUBCASE("sampling lower bound, majorant upper bound") {
    Rng rng = substream(5, 1);
    for (int trial = 0; trial < 20; ++trial) {
      const auto space = trial % 2 == 0 ? CoefficientSpace::scalar() : CoefficientSpace::matrix(2);
      const Point a = trial % 4 < 2 ? origin() : Point::Zero(2);
      const auto s = random_series(rng, space, a, 8, 1.0, 1.0);
      CHECK(sample_sup(s, 1.0, 10000) <= majorant_norm(s, 1.0) + 1e-12);
      for (int i = 0; i < 50; ++i) {
        const Point x = random_point_in_ball(rng, a, 0.8);
        CHECK(space.norm(s.eval(x)) <= majorant_norm(s, 0.8) + 1e-12);
      }
      CHECK(majorant_norm(s, 0.5) <= majorant_norm(s, 0.8));
    }
  }
  SUBCASE("radius guard") {
    const auto s = scalar_poly({1.0}, 2, 0.5);
    CHECK_THROWS_AS(majorant_norm(s, 0.6), DomainError);
  }
  SUBCASE("restriction never increases the tail") {
    const auto s = scalar_poly({1.0, 1.0}, 4, 1.0).with_tails(1e-2, 1e-3);
    double previous = s.tail_bound();
    for (double rho : {0.9, 0.5, 0.1}) {
      const auto r = s.restricted(rho);
      CHECK(r.tail_bound() <= previous);
      previous = r.tail_bound();
    }
    CHECK(s.restricted(0.1).tail_bound() == doctest::Approx(1e-2 * 1e-5 + 1e-3));
  }
}

TEST_CASE("re-expansion around a new anchor") {
  Rng rng = substream(6, 1);
  const auto space = CoefficientSpace::scalar();
  const auto s = random_series(rng, space, origin(), 10, 1.0, 1.0);
  Point b(1);
  b(0) = cplx(0.2, -0.1);
  const auto t = reexpand(s, b, 0.5);
  for (int i = 0; i < 20; ++i) {
    const Point x = random_point_in_ball(rng, b, 0.5);
    CHECK((t.eval(x) - s.eval(x)).norm() < 1e-12);
  }
}

TEST_CASE("json round trip is exact") {
  Rng rng = substream(7, 1);
  for (const auto& space : {CoefficientSpace::scalar(), CoefficientSpace::vector(3),
                            CoefficientSpace::matrix(2)}) {
    Point a(2);
    a << cplx(0.1, std::numbers::pi), cplx(-1.0 / 3.0, 0.0);
    const auto s = random_series(rng, space, a, 5, 0.3, 1.7).with_tails(1.0 / 7.0, 1e-17);
    const auto back = parse_series(dump_series(s));
    CHECK(back.space() == s.space());
    CHECK(back.anchor() == s.anchor());
    CHECK(back.radius() == s.radius());
    CHECK(back.high_order_tail() == s.high_order_tail());
    CHECK(back.flat_tail() == s.flat_tail());
    for (int i = 0; i < static_cast<int>(s.coeffs().size()); ++i) CHECK(back.coeff(i) == s.coeff(i));
  }
  SUBCASE("empty coefficient map is the zero series") {
    const auto z = parse_series(
        R"({"anchor": [[0, 0]], "degree_bound": 3, "coeffs": [], "radius": 1.0, "tail_bound": 0.0})");
    CHECK(z.is_zero_polynomial());
    CHECK(z.tail_bound() == 0.0);
  }
  SUBCASE("multi-index beyond the degree bound") {
    CHECK_THROWS_AS(parse_series(R"({"anchor": [[0, 0]], "degree_bound": 1,
        "coeffs": [[[2], [[1, 0]]]], "radius": 1.0, "tail_bound": 0.0})"),
                    StructuralError);
  }
}

TEST_CASE("bracket compatibility of the matrix norm") {
  Rng rng = substream(8, 1);
  const auto space = CoefficientSpace::matrix(3);
  for (int i = 0; i < 1000; ++i) {
    const Coeff x = random_coeff(rng, space);
    const Coeff y = random_coeff(rng, space);
    CHECK(space.norm(x * y - y * x) <= space.norm(x) * space.norm(y) * (1 + 1e-12));
    CHECK(space.norm(x * y) <= 0.5 * space.norm(x) * space.norm(y) * (1 + 1e-12));
  }
}
