#include <cmath>

#include "doctest.h"

#include "germlie/errors.hpp"
#include "germlie/germ_group.hpp"
#include "oracles.hpp"

using namespace germlie;

namespace {

Point p1(cplx z) {
  Point p(1);
  p(0) = z;
  return p;
}

GermSpacePtr two_anchor_space() {
  return make_germ_space({p1(0.0), p1(0.05)}, 1.0, 0.1, 5, CoefficientSpace::matrix(2));
}

double max_pointwise(const std::function<Coeff(const Point&)>& f, const std::function<Coeff(const Point&)>& g,
                     const GermSpace& s, int level, Rng& rng, int points = 20) {
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const Point x = s.random_point(rng, level, 0.3);
    worst = std::max(worst, (f(x) - g(x)).norm());
  }
  return worst;
}

BHolElement neg(const BHolElement& e) {
  return e.map([](const TruncatedSeries& s) { return series_scale(s, -1.0); });
}

}  // namespace

TEST_CASE("local group axioms") {
  const auto s = two_anchor_space();
  const GermGroup g(s);
  Rng rng = substream(5, 0);
  for (int t = 0; t < 10; ++t) {
    const auto x = random_element(s, 1, rng, 0.12, 0.5);
    const auto y = random_element(s, 1, rng, 0.12, 0.5);
    const auto z = random_element(s, 1, rng, 0.12, 0.5);
    CHECK(g.in_omega(x));

    const auto xy = germ_bch(g, x, y);
    const auto yz = germ_bch(g, y, z);
    const auto left = germ_bch(g, xy.value, z);
    const auto right = germ_bch(g, x, yz.value);
    const double tol = xy.remainder + yz.remainder + left.remainder + right.remainder + 1e-9;
    CHECK(germ_distance(Germ(left.value), Germ(right.value)) <= tol);

    CHECK(germ_distance(Germ(germ_bch(g, x, BHolElement::zero(s, 1)).value), Germ(x)) <= 1e-15);
    CHECK(germ_distance(Germ(germ_bch(g, x, neg(x)).value), Germ(BHolElement::zero(s, 1))) <= 1e-15);
    const auto lhs4 = germ_bch(g, neg(y), neg(x)).value;
    CHECK(germ_distance(Germ(lhs4), Germ(neg(xy.value))) <= 1e-14);
  }
}

TEST_CASE("germ bch agrees with the pointwise product") {
  const auto s = two_anchor_space();
  const GermGroup g(s);
  Rng rng = substream(5, 1);
  for (int t = 0; t < 5; ++t) {
    const auto x = random_element(s, 1, rng, 0.1, 0.5);
    const auto y = random_element(s, 1, rng, 0.1, 0.5);
    const auto z = germ_bch(g, x, y);
    const double err = max_pointwise(
        [&](const Point& p) { return z.value.eval(p); },
        [&](const Point& p) { return oracle::logm(oracle::expm(x.eval(p)) * oracle::expm(y.eval(p))); },
        *s, 1, rng);
    CHECK(err <= 1e-9);
  }
  SUBCASE("commuting germs add") {
    Coeff d1 = Coeff::Zero(2, 2), d2 = Coeff::Zero(2, 2);
    d1(0, 0) = 0.1;
    d2(1, 1) = -0.2;
    const auto a = BHolElement::constant(s, 1, d1);
    const auto b = BHolElement::constant(s, 1, d2);
    CHECK(germ_distance(Germ(germ_bch(g, a, b).value), Germ(BHolElement::constant(s, 1, d1 + d2))) <= 1e-15);
  }
  SUBCASE("budget") {
    const auto x = random_element(s, 1, rng, 0.4);
    CHECK_THROWS_AS(germ_bch(g, x, x), DomainError);
    CHECK_THROWS_AS(LocalGermElement::certify(x, 0.3), DomainError);
  }
}

TEST_CASE("EXP and LOG") {
  const auto s = two_anchor_space();
  const GermGroup g(s);
  Rng rng = substream(5, 2);

  const auto one = EXP(g, BHolElement::zero(s, 1));
  CHECK(germ_distance(Germ(one.element()), Germ(GermGroupElement::identity(s, 1).element())) == 0.0);

  for (int t = 0; t < 10; ++t) {
    const auto x = random_element(s, 1, rng, 0.45, 0.5);
    REQUIRE(g.in_omega2(x));
    const auto back = LOG(g, EXP(g, x));
    CHECK(germ_distance(Germ(back), Germ(x)) <= 1e-9);
  }

  SUBCASE("power law") {
    for (int t = 0; t < 5; ++t) {
      const auto x = random_element(s, 1, rng, 0.1, 0.5);
      for (int n = 2; n <= 4; ++n) {
        const auto nx = x.map([&](const TruncatedSeries& a) { return series_scale(a, n); });
        const auto lhs = EXP(g, nx);
        const auto rhs = group_pow(g, EXP(g, x), n);
        CHECK(max_pointwise([&](const Point& p) { return lhs.eval(p); },
                            [&](const Point& p) { return rhs.eval(p); }, *s, 2, rng) <= 1e-9);
      }
    }
  }
  SUBCASE("homomorphism on Omega_1") {
    for (int t = 0; t < 5; ++t) {
      const auto x = random_element(s, 1, rng, 0.99 * g.omega1_budget(), 0.5);
      const auto y = random_element(s, 1, rng, 0.99 * g.omega1_budget(), 0.5);
      const auto lhs = EXP(g, germ_bch(g, x, y).value);
      const auto rhs = group_mul(g, EXP(g, x), EXP(g, y));
      CHECK(max_pointwise([&](const Point& p) { return lhs.eval(p); },
                          [&](const Point& p) { return rhs.eval(p); }, *s, 2, rng) <= 1e-9);
    }
  }
  SUBCASE("LOG branch violation") {
    Coeff c = Coeff::Identity(2, 2);
    c(0, 0) = -1.0;
    const auto gamma = GermGroupElement::certify(BHolElement::constant(s, 1, c));
    CHECK_THROWS_AS(LOG(g, gamma), DomainError);
  }
}

TEST_CASE("group operations") {
  const auto s = two_anchor_space();
  const GermGroup g(s);
  Rng rng = substream(5, 3);
  const auto id = GermGroupElement::identity(s, 1);
  for (int t = 0; t < 5; ++t) {
    const auto a = EXP(g, random_element(s, 1, rng, 0.5, 0.5));
    const auto b = EXP(g, random_element(s, 1, rng, 0.5, 0.5));
    const auto c = EXP(g, random_element(s, 1, rng, 0.5, 0.5));
    const auto prod = group_mul(g, a, group_inv(g, a));
    CHECK(max_pointwise([&](const Point& p) { return prod.eval(p); },
                        [&](const Point& p) { return id.eval(p); }, *s, prod.level(), rng) <= 1e-9);
    CHECK(germ_distance(Germ(group_mul(g, id, a).element()), Germ(a.element())) <= 1e-15);
    CHECK(germ_distance(Germ(group_mul(g, a, id).element()), Germ(a.element())) <= 1e-15);
    const auto l = group_mul(g, group_mul(g, a, b), c);
    const auto r = group_mul(g, a, group_mul(g, b, c));
    CHECK(max_pointwise([&](const Point& p) { return l.eval(p); }, [&](const Point& p) { return r.eval(p); },
                        *s, std::max(l.level(), r.level()), rng) <= 1e-9);
  }
  SUBCASE("singular constant term") {
    Coeff c = Coeff::Zero(2, 2);
    c(0, 0) = 1.0;
    CHECK_THROWS_AS(GermGroupElement::certify(BHolElement::constant(s, 1, c)), DomainError);
  }
}

TEST_CASE("adjoint action") {
  const auto s = two_anchor_space();
  const GermGroup g(s);
  Rng rng = substream(5, 4);
  const auto id = GermGroupElement::identity(s, 1);
  const auto eta = random_element(s, 1, rng, 0.3, 0.5);
  CHECK(germ_distance(Germ(AD(g, id, eta).value), Germ(eta)) <= 1e-15);

  SUBCASE("constant gamma") {
    Coeff c(2, 2);
    c << 1.0, 0.2, cplx(0.0, 0.1), 0.9;
    const auto gamma = GermGroupElement::certify(BHolElement::constant(s, 1, c));
    const auto ad = AD(g, gamma, eta);
    const Coeff ci = c.inverse();
    CHECK(max_pointwise([&](const Point& p) { return ad.value.eval(p); },
                        [&](const Point& p) { return Coeff(c * eta.eval(p) * ci); }, *s, ad.value.level(),
                        rng) <= 1e-12);
  }
  SUBCASE("conjugation identity") {
    for (int t = 0; t < 5; ++t) {
      const auto gamma = EXP(g, random_element(s, 1, rng, 0.5, 0.5));
      const auto x = random_element(s, 1, rng, 0.3, 0.5);
      const auto ad = AD(g, gamma, x);
      const auto lhs = group_mul(g, group_mul(g, gamma, EXP(g, x)), group_inv(g, gamma));
      const auto rhs = EXP(g, ad.value);
      CHECK(max_pointwise([&](const Point& p) { return lhs.eval(p); },
                          [&](const Point& p) { return rhs.eval(p); }, *s,
                          std::max(lhs.level(), rhs.level()), rng) <= 1e-9);
    }
  }
  SUBCASE("linear, bounded and an action") {
    const auto gamma = EXP(g, random_element(s, 1, rng, 0.6, 0.5));
    const auto delta = EXP(g, random_element(s, 1, rng, 0.6, 0.5));
    for (int t = 0; t < 20; ++t) {
      const auto u = random_element(s, 1, rng, 1.0);
      const auto v = random_element(s, 1, rng, 2.0);
      const auto uv = combine(u, v, [](const TruncatedSeries& a, const TruncatedSeries& b) {
        return series_linear(a, b, 0.3, cplx(-1.0, 0.5));
      });
      const auto adu = AD(g, gamma, u);
      CHECK(adu.value.norm_upper() <= adu.bound * adu.eta_norm * (1 + 1e-12));
      const auto lin = combine(adu.value, AD(g, gamma, v).value,
                               [](const TruncatedSeries& a, const TruncatedSeries& b) {
                                 return series_linear(a, b, 0.3, cplx(-1.0, 0.5));
                               });
      CHECK(germ_distance(Germ(AD(g, gamma, uv).value), Germ(lin)) <= 1e-10);
      const auto composed = AD(g, gamma, AD(g, delta, u).value).value;
      const auto direct = AD(g, group_mul(g, gamma, delta), u).value;
      CHECK(max_pointwise([&](const Point& p) { return composed.eval(p); },
                          [&](const Point& p) { return direct.eval(p); }, *s,
                          std::max(composed.level(), direct.level()), rng) <= 1e-9);
    }
  }
}

TEST_CASE("fixture round trip") {
  const auto s = two_anchor_space();
  const GermGroup g(s);
  Rng rng = substream(5, 5);
  const auto gamma = EXP(g, random_element(s, 1, rng, 0.5, 0.5));
  const json j = fixture_to_json(gamma);
  CHECK(j.at("certificate").at("kind") == "neumann");
  const auto back = group_fixture_from_json(germ_space_from_json(germ_space_to_json(*s)), j);
  CHECK(germ_distance(Germ(back.element()), Germ(gamma.element())) == 0.0);
  CHECK(back.certificate().budget == gamma.certificate().budget);

  const auto x = LocalGermElement::certify(random_element(s, 1, rng, 0.2), g.omega_budget());
  const auto xb = local_fixture_from_json(s, json::parse(fixture_to_json(x).dump()));
  CHECK(xb.certificate().margin == doctest::Approx(x.certificate().margin));
  CHECK_THROWS_AS(group_fixture_from_json(s, fixture_to_json(x)), StructuralError);
}
