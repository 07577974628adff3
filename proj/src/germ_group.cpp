#include "germlie/germ_group.hpp"

#include <algorithm>
#include <sstream>

#include "germlie/errors.hpp"

namespace germlie {

namespace {

struct SeriesOps {
  TruncatedSeries bracket(const TruncatedSeries& a, const TruncatedSeries& b) const {
    return series_bracket(a, b);
  }
  TruncatedSeries add(const TruncatedSeries& acc, const TruncatedSeries& v, double c) const {
    return series_linear(acc, v, 1.0, c);
  }
  TruncatedSeries zero_like(const TruncatedSeries& a) const {
    return TruncatedSeries(a.space(), a.anchor(), a.degree_bound(), a.radius());
  }
};

TruncatedSeries identity_series(const TruncatedSeries& like) {
  return TruncatedSeries::constant(like.space(), like.anchor(), like.degree_bound(), like.radius(),
                                   like.space().identity());
}

std::optional<Certificate> neumann_for(const BHolElement& e) {
  Certificate c{"neumann", 0.0, 0.0};
  for (const auto& s : e.reps()) {
    const NeumannCertificate n = neumann_certificate(s);
    if (!n.ok()) return std::nullopt;
    c.budget = std::max({c.budget, n.budget, n.ratio});
  }
  c.margin = 1.0 - c.budget;
  return c;
}

void require_matrix(const GermSpace& s) {
  if (s.space().kind() != CoeffKind::Matrix) {
    throw StructuralError("germ groups need a matrix coefficient space");
  }
}

}  // namespace

GermGroup::GermGroup(GermSpacePtr space, int bch_order)
    : space_(std::move(space)), lie_(space_->space().m(), bch_order) {
  require_matrix(*space_);
}

bool GermGroup::in_omega2(const BHolElement& e) const {
  for (const auto& s : e.reps()) {
    if (!(lie_.norm(s.coeff(0)) < omega2_eps())) return false;
  }
  return true;
}

LocalGermElement LocalGermElement::certify(const BHolElement& e, double budget) {
  const double n = e.norm_upper();
  if (!(n < budget)) {
    std::ostringstream msg;
    msg << "germ outside Omega: majorant norm " << n << " >= budget " << budget;
    throw DomainError(msg.str());
  }
  return LocalGermElement(e, Certificate{"omega", budget, budget - n});
}

GermGroupElement GermGroupElement::certify(const BHolElement& e) {
  require_matrix(*e.germ_space());
  auto c = neumann_for(e);
  if (!c) {
    throw DomainError("invertibility certificate fails at level " + std::to_string(e.level()));
  }
  return GermGroupElement(e, *c);
}

GermGroupElement GermGroupElement::certify_deepening(const BHolElement& e) {
  require_matrix(*e.germ_space());
  for (int n = e.level(); n < e.germ_space()->levels(); ++n) {
    const BHolElement b = bond(e, n);
    if (auto c = neumann_for(b)) return GermGroupElement(b, *c);
  }
  throw DomainError("invertibility certificate fails at every available level");
}

GermGroupElement GermGroupElement::identity(const GermSpacePtr& space, int level) {
  return certify(BHolElement::constant(space, level, space->space().identity()));
}

GermGroupElement bond(const GermGroupElement& g, int level) {
  return GermGroupElement::certify(bond(g.element(), level));
}

BchGerm germ_bch(const GermGroup& g, const BHolElement& x, const BHolElement& y) {
  const int level = std::max(x.level(), y.level());
  const BHolElement xb = bond(x, level);
  const BHolElement yb = bond(y, level);
  const double s = xb.norm_upper() + yb.norm_upper();
  if (!(s < g.lie().bch_radius())) {
    std::ostringstream msg;
    msg << "germ BCH budget exceeded: ||x|| + ||y|| = " << s << " >= " << g.lie().bch_radius();
    throw DomainError(msg.str());
  }
  const DynkinTable& table = g.lie().table();
  const BHolElement value = combine(xb, yb, [&](const TruncatedSeries& a, const TruncatedSeries& b) {
    return table.evaluate(a, b, SeriesOps{});
  });
  return {value, table.remainder(s)};
}

GermGroupElement EXP(const GermGroup& g, const BHolElement& eta) {
  (void)g;
  return GermGroupElement::certify_deepening(
      eta.map([](const TruncatedSeries& s) { return series_exp(s); }));
}

BHolElement LOG(const GermGroup& g, const GermGroupElement& gamma) {
  (void)g;
  const BHolElement& e = gamma.element();
  for (int n = e.level(); n < e.germ_space()->levels(); ++n) {
    const BHolElement b = bond(e, n);
    bool inside = true;
    for (const auto& s : b.reps()) {
      inside = inside && majorant_norm(series_sub(s, identity_series(s))) < 1.0;
    }
    if (inside) return b.map([](const TruncatedSeries& s) { return series_log(s); });
  }
  throw DomainError("LOG branch budget ||gamma - 1|| < 1 fails at every available level");
}

GermGroupElement group_mul(const GermGroup& g, const GermGroupElement& a, const GermGroupElement& b) {
  (void)g;
  return GermGroupElement::certify_deepening(
      combine(a.element(), b.element(), [](const TruncatedSeries& x, const TruncatedSeries& y) {
        return series_mul(x, y);
      }));
}

GermGroupElement group_inv(const GermGroup& g, const GermGroupElement& a) {
  (void)g;
  InvertOptions no_shrink;
  no_shrink.allow_shrink = false;
  const BHolElement& e = a.element();
  for (int n = e.level(); n < e.germ_space()->levels(); ++n) {
    try {
      const BHolElement inv =
          bond(e, n).map([&](const TruncatedSeries& s) { return series_invert(s, no_shrink); });
      return GermGroupElement::certify_deepening(inv);
    } catch (const DomainError&) {
      // next level
    }
  }
  throw DomainError("group inversion fails at every available level");
}

GermGroupElement group_pow(const GermGroup& g, const GermGroupElement& a, int n) {
  if (n < 0) return group_pow(g, group_inv(g, a), -n);
  GermGroupElement acc = GermGroupElement::identity(a.element().germ_space(), a.level());
  for (int i = 0; i < n; ++i) acc = group_mul(g, acc, a);
  return acc;
}

AdResult AD(const GermGroup& g, const GermGroupElement& gamma, const BHolElement& eta) {
  const GermGroupElement inv = group_inv(g, gamma);
  const int level = std::max({gamma.level(), inv.level(), eta.level()});
  const BHolElement gb = bond(gamma.element(), level);
  const BHolElement ib = bond(inv.element(), level);
  const BHolElement eb = bond(eta, level);
  const BHolElement left = combine(gb, eb, [](const TruncatedSeries& a, const TruncatedSeries& b) {
    return series_mul(a, b);
  });
  const BHolElement value = combine(left, ib, [](const TruncatedSeries& a, const TruncatedSeries& b) {
    return series_mul(a, b);
  });
  return {value, gb.norm_upper() * ib.norm_upper() / 4.0, eb.norm_upper()};
}

// ---------------------------------------------------------------------------

json germ_space_to_json(const GermSpace& s) {
  json anchors = json::array();
  for (const auto& a : s.anchors()) anchors.push_back(point_to_json(a));
  return {{"anchors", anchors},
          {"rho0", s.base_radius()},
          {"r", s.ratio()},
          {"levels", s.levels()},
          {"space", {{"kind", to_string(s.space().kind())}, {"m", s.space().m()}}},
          {"degree", s.degree()}};
}

GermSpacePtr germ_space_from_json(const json& j) {
  std::vector<Point> anchors;
  for (const auto& a : j.at("anchors")) anchors.push_back(point_from_json(a));
  const CoeffKind kind = coeff_kind_from_string(j.at("space").at("kind").get<std::string>());
  const int m = j.at("space").value("m", 1);
  const CoefficientSpace cs = kind == CoeffKind::Matrix   ? CoefficientSpace::matrix(m)
                              : kind == CoeffKind::Vector ? CoefficientSpace::vector(m)
                                                          : CoefficientSpace::scalar();
  return make_germ_space(std::move(anchors), j.at("rho0").get<double>(), j.at("r").get<double>(),
                         j.at("levels").get<int>(), cs, j.at("degree").get<int>());
}

json element_to_json(const BHolElement& e) {
  json reps = json::array();
  for (const auto& s : e.reps()) reps.push_back(series_to_json(s));
  return {{"level", e.level()}, {"reps", reps}};
}

BHolElement element_from_json(const GermSpacePtr& space, const json& j) {
  std::vector<TruncatedSeries> reps;
  for (const auto& r : j.at("reps")) reps.push_back(series_from_json(r));
  return BHolElement(space, j.at("level").get<int>(), std::move(reps));
}

json fixture_to_json(const GermGroupElement& g) {
  json out = element_to_json(g.element());
  out["certificate"] = g.certificate().to_json();
  return out;
}

json fixture_to_json(const LocalGermElement& x) {
  json out = element_to_json(x.element());
  out["certificate"] = x.certificate().to_json();
  return out;
}

GermGroupElement group_fixture_from_json(const GermSpacePtr& space, const json& j) {
  const std::string kind = j.at("certificate").at("kind").get<std::string>();
  if (kind != "neumann") throw StructuralError("expected a neumann certificate, got " + kind);
  return GermGroupElement::certify(element_from_json(space, j));
}

LocalGermElement local_fixture_from_json(const GermSpacePtr& space, const json& j) {
  const json& c = j.at("certificate");
  if (c.at("kind").get<std::string>() != "omega") throw StructuralError("expected an omega certificate");
  return LocalGermElement::certify(element_from_json(space, j), c.at("budget").get<double>());
}

}  // namespace germlie
