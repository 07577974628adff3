#include <cmath>
#include <numbers>

#include "doctest.h"

#include "germlie/complexify.hpp"
#include "germlie/errors.hpp"

using namespace germlie;

TEST_CASE("real atlases") {
  const auto circle = circle_atlas(3, 2.2);
  CHECK(circle.chart_count() == 3);
  // every ordered pair of the three charts meets in two arcs
  CHECK(circle.transitions().size() == 12);
  CHECK(circle.real_inverse_residual() <= 1e-14);

  const auto tan = tan_atlas();
  CHECK(tan.real_inverse_residual() <= 1e-12);
  for (double x : {-0.35, 0.0, 0.2, 0.55}) {
    const auto& t = tan.transitions()[0];
    CHECK(std::abs(t.series.eval(cplx(x, 0.0))(0, 0) - std::tan(x)) <= 1e-12);
  }

  const auto back = RealAtlas::from_json(json::parse(tan.to_json().dump()));
  CHECK(back.to_json() == tan.to_json());

  std::vector<Chart> bad{{{0.0, 1.0}, {0.1, 0.9}, {0.0, 0.5}}};
  CHECK_THROWS_AS(RealAtlas(bad, {}), StructuralError);
  CHECK_THROWS_AS(circle_atlas(3, 1.0), PreconditionError);
}

TEST_CASE("extension") {
  SUBCASE("identity transitions") {
    for (double h : {0.1, 1.0, 2.0}) {
      const auto ca = extend_transitions(interval_atlas(), h);
      for (const auto& t : ca.transitions()) {
        CHECK(t.height == h);
        CHECK(t(cplx(0.2, 0.3 * h)) == cplx(0.2, 0.3 * h));
      }
    }
  }
  SUBCASE("circle translations are exact") {
    const auto ca = extend_transitions(circle_atlas(2, 2.2), 0.5);
    CHECK(ca.transitions().size() == 4);
    for (const auto& t : ca.transitions()) {
      CHECK(t.height == 0.5);
      const cplx z(t.real.overlap.mid(), 0.2);
      const cplx d = t(z) - z;
      CHECK(std::abs(d.imag()) <= 1e-15);
      CHECK(std::abs(std::remainder(d.real(), 2 * std::numbers::pi)) <= 1e-14);
    }
    CHECK(ca.margins_positive());
  }
  SUBCASE("tan pair") {
    const auto ca = extend_transitions(tan_atlas(), 0.25);
    const auto& t = ca.transitions()[0];
    double worst = 0.0;
    for (cplx z : rectangle_grid(t, 20)) {
      worst = std::max(worst, std::abs(std::atan(std::tan(z)) - z));
      CHECK(std::abs(t(z) - std::tan(z)) <= 1e-10);
      const auto back = ca.apply(1, 0, t(z));
      if (back) CHECK(std::abs(*back - z) <= 1e-10);
    }
    CHECK(worst <= 1e-14);
    for (const auto& e : ca.transitions()) {
      for (double x : {e.real.overlap.lo + 0.01, e.real.overlap.mid()}) {
        CHECK(std::abs(e(x) - e.real.series.eval(cplx(x, 0.0))(0, 0)) <= 1e-12);
      }
    }
    CHECK(ca.margins_positive());
  }
  SUBCASE("radius estimate and failure") {
    CHECK(convergence_radius_estimate(tan_atlas().transitions()[0].series) ==
          doctest::Approx(0.8 * (std::numbers::pi / 2 - 0.1)).epsilon(0.1));
    const auto wide = extend_transitions(tan_atlas(), 5.0);
    CHECK(wide.transitions()[0].height < 5.0);
    // arctan around 0 on an overlap reaching past the poles at +-i
    std::vector<Chart> cs{{{-3.0, 3.0}, {-2.9, 2.9}, {-2.8, 2.8}}, {{-3.0, 3.0}, {-2.9, 2.9}, {-2.8, 2.8}}};
    const auto src = tan_atlas().transitions()[1].series;
    std::vector<Transition> ts{{0, 1, {-2.0, 2.5}, src}, {1, 0, {-2.0, 2.5}, src}};
    CHECK_THROWS_AS(extend_transitions(RealAtlas(cs, ts), 0.1), DomainError);
  }
}

TEST_CASE("cocycles") {
  SUBCASE("two charts") {
    const auto rep = certify_cocycles(extend_transitions(circle_atlas(2, 2.2), 0.5));
    CHECK(rep.passed);
    CHECK(rep.details["triple_check_vacuous"].get<bool>());
  }
  SUBCASE("three charts of the circle") {
    const auto ca = extend_transitions(circle_atlas(3, 2.2), 0.5);
    const auto rep = certify_cocycles(ca, {20, 1e-10});
    CHECK(rep.passed);
    CHECK(rep.details["triples"].size() == 6);
    for (const auto& t : rep.details["triples"]) CHECK(t["worst"].get<double>() <= 1e-10);

    const auto bad = certify_cocycles(ca.perturbed(1, 2, 1e-6));
    CHECK_FALSE(bad.passed);
    CHECK(bad.worst_margin + 1e-9 == doctest::Approx(1e-6).epsilon(1e-3));
  }
  SUBCASE("tan pair") { CHECK(certify_cocycles(extend_transitions(tan_atlas(), 0.25)).passed); }
}

TEST_CASE("uniqueness") {
  const auto tan = tan_atlas();
  const auto a = extend_transitions(tan, 0.1);
  const auto b = extend_transitions(tan, 0.05);
  CHECK(uniqueness_biholomorphism(a, a).passed);
  const auto rep = uniqueness_biholomorphism(a, b);
  CHECK(rep.passed);
  CHECK(rep.details["status"] == "certified");
  CHECK_THROWS_AS(uniqueness_biholomorphism(a, extend_transitions(circle_atlas(), 0.1)), PreconditionError);

  const auto circle = extend_transitions(circle_atlas(3, 2.2), 0.5);
  const auto ann = annulus_comparison(circle);
  CHECK(ann.passed);
  CHECK(ann.details["well_defined_worst"].get<double>() <= 1e-8);
  CHECK_FALSE(annulus_comparison(circle.perturbed(0, 1, 1e-6)).passed);
}
