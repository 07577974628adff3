#include "germlie/suites.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "germlie/complexify.hpp"
#include "germlie/errors.hpp"
#include "germlie/germ_group.hpp"
#include "germlie/regularity.hpp"

namespace germlie {

namespace {

Point p1(cplx z) {
  Point p(1);
  p(0) = z;
  return p;
}

Rng stream(const RunConfig& c, const char* name) { return substream(c.seed, stream_tag(name)); }

/// Two anchors 0 and rho0 / 20, matrix coefficients.
GermSpacePtr group_space(const RunConfig& c, int levels = 5) {
  return make_germ_space({p1(0.0), p1(0.05 * c.rho0)}, c.rho0, c.r, levels, CoefficientSpace::matrix(c.dim),
                         c.degree);
}

GermSpacePtr scalar_space(double rho0, double r, int levels, int degree) {
  return make_germ_space({p1(0.0)}, rho0, r, levels, CoefficientSpace::scalar(), degree);
}

Coeff scalar(cplx v) {
  Coeff c(1, 1);
  c(0, 0) = v;
  return c;
}

BHolElement neg(const BHolElement& e) {
  return e.map([](const TruncatedSeries& s) { return series_scale(s, -1.0); });
}

BHolElement scaled(const BHolElement& e, cplx f) {
  return e.map([&](const TruncatedSeries& s) { return series_scale(s, f); });
}

double germ_gap(const BHolElement& a, const BHolElement& b) { return germ_distance(Germ(a), Germ(b)); }

double pointwise_gap(const GermSpace& s, const GermGroupElement& a, const GermGroupElement& b, Rng& rng,
                     int points = 20) {
  return pointwise_distance(a.element(), b.element(),
                            evaluation_points(s, std::max(a.level(), b.level()), rng, points));
}

/// Classical RK4 for Y' = Y A(t), Y(0) = 1.
Coeff rk4_right(const std::function<Coeff(double)>& a, int m, int steps) {
  Coeff y = Coeff::Identity(m, m);
  const double h = 1.0 / steps;
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    const Coeff k1 = y * a(t);
    const Coeff k2 = (y + 0.5 * h * k1) * a(t + 0.5 * h);
    const Coeff k3 = (y + 0.5 * h * k2) * a(t + 0.5 * h);
    const Coeff k4 = (y + h * k3) * a(t + h);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

std::string num(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  std::ostringstream o;
  o << std::setprecision(17) << v;
  return o.str();
}

}  // namespace

// ---------------------------------------------------------------------------

void RunConfig::validate() const {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw PreconditionError("unknown suite '" + suite + "'");
  }
  if (!(r > 0.0 && r < GermSpace::kRatioLimit)) {
    throw PreconditionError("r = " + num(r) + " must lie in (0, 1/(2e)) = (0, 0.18394)");
  }
  if (!(rho0 > 0.0) || !std::isfinite(rho0)) throw PreconditionError("rho0 must be positive");
  if (trials && *trials < 1) throw PreconditionError("trials must be at least 1");
  if (degree < 2 || degree > 40) throw PreconditionError("degree must lie in [2, 40]");
  if (bch_order < 1 || bch_order > 12) throw PreconditionError("bch-order must lie in [1, 12]");
  if (steps < 4) throw PreconditionError("steps must be at least 4");
  if (dim < 1 || dim > 8) throw PreconditionError("dim must lie in [1, 8]");
}

json RunConfig::to_json() const {
  return {{"suite", suite},   {"seed", seed},           {"trials", trials ? json(*trials) : json(nullptr)},
          {"r", r},           {"rho0", rho0},           {"degree", degree},
          {"bch_order", bch_order}, {"steps", steps},   {"dim", dim}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"germ-space", "lie-local", "lie-global", "regularity",
                                              "complexify", "all"};
  return names;
}

// ---------------------------------------------------------------------------
// lie-local

CheckReport check_bch_pairs(const RunConfig& c) {
  const int trials = c.trials_or(1000);
  const double tol = 1e-9;
  const double budget = 0.3;
  CheckReport report("bch_pairs", {{"trials", trials}, {"sum_norm", budget}, {"tolerance", tol},
                                   {"bch_order", c.bch_order}, {"dim", c.dim}});
  const MatrixLieBackend lie(c.dim, c.bch_order);
  Rng rng = stream(c, "bch_pairs");
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  double worst_err = 0.0;
  double remainder_excess = -1.0;
  for (int t = 0; t < trials; ++t) {
    const double s = budget * unif(rng);
    const double split = unif(rng);
    const Mat x = random_coeff_with_norm(rng, lie.space(), s * split);
    const Mat y = random_coeff_with_norm(rng, lie.space(), s * (1.0 - split));
    const auto z = lie.bch_with_remainder(x, y);
    const Mat ref = log_mat(exp_mat(x) * exp_mat(y));
    const double err = lie.norm(z.value - ref);
    worst_err = std::max(worst_err, err);
    remainder_excess = std::max(remainder_excess, err - z.remainder);
    report.record(err - tol, {{"trial", t}, {"residual", err}, {"s", s}});
  }
  report.details["worst_residual"] = worst_err;
  report.details["worst_excess_over_remainder_bound"] = remainder_excess;
  return report;
}

CheckReport check_local_axioms(const RunConfig& c) {
  const int trials = c.trials_or(500);
  const double assoc_tol = 1e-8;
  const double exact_tol = 1e-12;
  CheckReport report("local_axioms", {{"trials", trials}, {"points", 20}, {"associativity_tolerance", assoc_tol},
                                      {"identity_tolerance", exact_tol}});
  const auto s = group_space(c);
  const GermGroup g(s, c.bch_order);
  Rng rng = stream(c, "local_axioms");
  std::uniform_real_distribution<double> unif(0.25, 1.0);
  for (int t = 0; t < trials; ++t) {
    const auto x = random_element(s, 1, rng, 0.12 * unif(rng), 0.5);
    const auto y = random_element(s, 1, rng, 0.12 * unif(rng), 0.5);
    const auto z = random_element(s, 1, rng, 0.12 * unif(rng), 0.5);
    const auto xy = germ_bch(g, x, y);
    const auto left = germ_bch(g, xy.value, z).value;
    const auto right = germ_bch(g, x, germ_bch(g, y, z).value).value;
    const double assoc = pointwise_distance(left, right, evaluation_points(*s, 1, rng, 20));
    const double unit = std::max(germ_gap(germ_bch(g, x, BHolElement::zero(s, 1)).value, x),
                                 germ_gap(germ_bch(g, BHolElement::zero(s, 1), x).value, x));
    const double inverse = germ_gap(germ_bch(g, x, neg(x)).value, BHolElement::zero(s, 1));
    const double reversal = germ_gap(germ_bch(g, neg(y), neg(x)).value, neg(xy.value));
    const double margin = std::max(assoc - assoc_tol, std::max({unit, inverse, reversal}) - exact_tol);
    report.record(margin, {{"trial", t}, {"associativity", assoc}, {"unit", unit}, {"inverse", inverse},
                           {"reversal", reversal}});
  }
  return report;
}

// ---------------------------------------------------------------------------
// germ-space

CheckReport check_sup_estimate(const RunConfig& c) {
  const int trials = c.trials_or(1000);
  const double big_r = 1.0;
  CheckReport report("sup_estimate", {{"trials", trials}, {"R", big_r}, {"r", c.r}, {"family_size", 5},
                                 {"degree", c.degree}});
  const auto s = scalar_space(big_r, c.r, 2, c.degree);
  Rng rng = stream(c, "sup_estimate");
  for (int t = 0; t < trials; ++t) {
    std::vector<BHolElement> family;
    for (int j = 0; j < 5; ++j) family.push_back(random_element(s, 0, rng, 1.0 + j));
    const auto r = sup_estimate_check(family, big_r, c.r);
    report.record(r.passed ? std::min(r.margin, 0.0) : std::max(r.margin, 1e-300),
                  {{"trial", t}, {"lhs", r.lhs}, {"rhs", r.rhs}});
  }

  // Negative control: coefficients growing like (1/r)^k with r beyond R/(2e).
  const double r_bad = 0.5;
  std::vector<BHolElement> growth;
  for (int k = 0; k <= c.degree; ++k) {
    std::vector<Coeff> coeffs(static_cast<std::size_t>(k + 1), scalar(0.0));
    coeffs.back() = scalar(1.0);
    growth.emplace_back(s, 0, std::vector<TruncatedSeries>{
                                  TruncatedSeries(s->space(), p1(0.0), c.degree, big_r, std::move(coeffs))});
  }
  bool guarded = false;
  try {
    sup_estimate_check(growth, big_r, r_bad);
  } catch (const PreconditionError&) {
    guarded = true;
  }
  const auto ctrl = sup_estimate_check(growth, big_r, r_bad, false);
  report.details["negative_control"] = {{"r", r_bad}, {"precondition_rejected", guarded},
                                        {"estimate_failed", !ctrl.passed}, {"lhs", ctrl.lhs},
                                        {"rhs", ctrl.rhs}};
  if (!guarded || ctrl.passed) report.fail({{"negative_control", "accepted"}});
  return report;
}

CheckReport check_compact_regularity(const RunConfig& c) {
  const int trials = c.trials_or(1000);
  CheckReport report("compact_regularity", {{"trials", trials}, {"r", c.r}, {"rho0", c.rho0},
                                            {"degree", c.degree}});
  const auto s = scalar_space(c.rho0, c.r, 6, c.degree);
  json rows = json::array();
  int index = 0;
  for (int n : {1, 2}) {
    for (int l : {3, 4}) {
      for (double eps : {0.5, 0.1}) {
        CompactRegularityOptions opt;
        opt.trials = trials;
        opt.seed = substream(c.seed, stream_tag("compact_regularity"))() + static_cast<std::uint64_t>(index++);
        auto sub = compact_regularity_check(s, n, l, eps, opt);
        const bool tested = sub.details.value("status", "") == "tested";
        if (!tested) sub.fail({{"n", n}, {"l", l}, {"eps", eps}, {"status", sub.details.value("status", "")}});
        json row = {{"n", n},
                    {"l", l},
                    {"eps", eps},
                    {"status", sub.details.value("status", "")},
                    {"k0", tested ? sub.details["k0"] : json(nullptr)},
                    {"delta", tested ? sub.details["delta"] : json(nullptr)},
                    {"trials", sub.trials},
                    {"failures", sub.failure_count},
                    {"worst_margin", std::isfinite(sub.worst_margin) ? json(sub.worst_margin) : json(nullptr)},
                    {"passed", sub.passed}};
        if (tested) {
          row["extremal_sup"] = sub.details["extremal"]["sup_m"];
          row["extremal_exceeds_eps"] = sub.details["extremal"]["exceeds_eps"];
        }
        rows.push_back(row);
        sub.check = "n" + std::to_string(n) + "_l" + std::to_string(l) + "_eps" + (eps == 0.5 ? "0.5" : "0.1");
        report.absorb(sub);
      }
    }
  }
  report.details["rows"] = rows;
  return report;
}

CheckReport check_factorization(const RunConfig& c) {
  const int trials = c.trials_or(200);
  const double coeff_tol = 1e-10;
  const double sup_tol = 1e-8;
  CheckReport report("factorization", {{"trials", trials}, {"max_degree", 8}, {"quadrature_points", 256},
                                       {"coefficient_tolerance", coeff_tol}, {"sup_tolerance", sup_tol}});
  Rng rng = stream(c, "factorization");
  std::uniform_int_distribution<int> deg(1, 8);
  for (int t = 0; t < trials; ++t) {
    const int d = deg(rng);
    const auto s = make_germ_space({p1(0.0)}, c.rho0, c.r, 2, CoefficientSpace::matrix(c.dim), d);
    const auto e = random_element(s, 0, rng, 1.0);
    FactorizeOptions opt;
    opt.quadrature_points = 256;
    opt.seed = static_cast<std::uint64_t>(t);
    const auto r = factorize(s, 0, [&](const Point& x) { return e.rep(0).eval(x); }, opt);
    const double coeff_err = coefficient_distance(r.element.rep(0), e.rep(0), c.rho0);
    const double margin = std::max({coeff_err - coeff_tol, r.isometry_gap - sup_tol,
                                    r.reconstruction_error - sup_tol});
    report.record(margin, {{"trial", t}, {"degree", d}, {"coefficient_error", coeff_err},
                           {"isometry_gap", r.isometry_gap}, {"reconstruction_error", r.reconstruction_error}});
  }
  return report;
}

CheckReport check_union_strategy(const RunConfig& c) {
  UnionStrategyOptions opt;
  opt.trials = c.trials_or(20);
  opt.seed = substream(c.seed, stream_tag("union_strategy"))();
  CheckReport report("union_strategy", {{"trials", opt.trials}});
  const auto cs = CoefficientSpace::matrix(c.dim);
  const double a = c.rho0;
  const auto k1 = make_germ_space({p1(0.0), p1(0.1 * a)}, a, c.r, 3, cs, c.degree);
  const auto k2 = make_germ_space({p1(0.15 * a), p1(0.3 * a)}, a, c.r, 3, cs, c.degree);
  const auto far = make_germ_space({p1(5.0 * a)}, a, c.r, 3, cs, c.degree);
  auto overlap = union_strategy_check(k1, k2, 1, opt);
  overlap.check = "overlapping";
  auto same = union_strategy_check(k1, k1, 1, opt);
  same.check = "same";
  auto disjoint = union_strategy_check(k1, far, 1, opt);
  disjoint.check = "disjoint";
  report.absorb(overlap);
  report.absorb(same);
  report.absorb(disjoint);
  return report;
}

CheckReport check_cross_basis(const RunConfig& c) {
  const int trials = c.trials_or(100);
  const double r2 = 0.5 * c.r;
  CheckReport report("cross_basis", {{"trials", trials}, {"r", c.r}, {"r_prime", r2},
                                     {"scope", "spot check of norm comparisons between the two bases"}});
  const auto cs = CoefficientSpace::matrix(c.dim);
  const auto sa = make_germ_space({p1(0.0), p1(0.02 * c.rho0)}, c.rho0, c.r, 4, cs, c.degree);
  const auto sb = make_germ_space({p1(0.0), p1(0.02 * c.rho0)}, c.rho0, r2, 8, cs, c.degree);
  Rng rng = stream(c, "cross_basis");
  std::uniform_int_distribution<int> lev(0, 2);

  // The level of `to` whose radius first drops to or below rho.
  auto level_below = [](const GermSpace& to, double rho) {
    for (int m = 0; m < to.levels(); ++m) {
      if (to.radius(m) <= rho * (1 + 1e-12)) return m;
    }
    return -1;
  };
  auto transfer = [](const BHolElement& e, const GermSpacePtr& to, int m) {
    std::vector<TruncatedSeries> reps;
    for (const auto& s : e.reps()) reps.push_back(s.restricted(to->radius(m)));
    return BHolElement(to, m, std::move(reps));
  };

  for (int t = 0; t < trials; ++t) {
    const bool forward = t % 2 == 0;
    const auto& from = forward ? sa : sb;
    const auto& to = forward ? sb : sa;
    const int n = lev(rng);
    const auto e = random_element(from, n, rng, 1.0, 0.5);
    const int m = level_below(*to, from->radius(n));
    if (m < 0) {
      report.fail({{"trial", t}, {"reason", "no comparable level"}});
      continue;
    }
    const auto image = transfer(e, to, m);
    double value_gap = 0.0;
    for (const auto& x : evaluation_points(*to, m, rng, 10)) {
      value_gap = std::max(value_gap, (image.eval(x) - e.eval(x)).norm());
    }
    const double norm_gap = image.norm_upper() - e.norm_upper() * (1 + 1e-12);
    report.record(std::max(norm_gap, value_gap - 1e-12),
                  {{"trial", t}, {"from_r", from->ratio()}, {"n", n}, {"m", m},
                   {"norm_from", e.norm_upper()}, {"norm_to", image.norm_upper()}, {"value_gap", value_gap}});
  }
  return report;
}

// ---------------------------------------------------------------------------
// lie-global

CheckReport check_exp_log(const RunConfig& c) {
  const int trials = c.trials_or(500);
  const double tol = 1e-9;
  CheckReport report("exp_log", {{"trials", trials}, {"points", 20}, {"tolerance", tol}, {"max_power", 4}});
  const auto s = group_space(c);
  const GermGroup g(s, c.bch_order);
  Rng rng = stream(c, "exp_log");
  for (int t = 0; t < trials; ++t) {
    const auto x = random_element(s, 1, rng, 0.45, 0.5);
    if (!g.in_omega2(x)) {
      report.fail({{"trial", t}, {"reason", "sample outside Omega_2"}});
      continue;
    }
    const double roundtrip = germ_gap(LOG(g, EXP(g, x)), x);

    const auto p = random_element(s, 1, rng, 0.1, 0.5);
    const auto ep = EXP(g, p);
    double power = 0.0;
    for (int k = 2; k <= 4; ++k) {
      power = std::max(power, pointwise_gap(*s, EXP(g, scaled(p, k)), group_pow(g, ep, k), rng));
    }

    const auto a = random_element(s, 1, rng, 0.99 * g.omega1_budget(), 0.5);
    const auto b = random_element(s, 1, rng, 0.99 * g.omega1_budget(), 0.5);
    const double hom = pointwise_gap(*s, EXP(g, germ_bch(g, a, b).value), group_mul(g, EXP(g, a), EXP(g, b)), rng);

    report.record(std::max({roundtrip, power, hom}) - tol,
                  {{"trial", t}, {"log_exp", roundtrip}, {"power", power}, {"homomorphism", hom}});
  }
  return report;
}

CheckReport check_group_axioms(const RunConfig& c) {
  const int trials = c.trials_or(100);
  const double tol = 1e-9;
  CheckReport report("group_axioms", {{"trials", trials}, {"points", 20}, {"tolerance", tol}});
  const auto s = group_space(c);
  const GermGroup g(s, c.bch_order);
  Rng rng = stream(c, "group_axioms");
  const auto id = GermGroupElement::identity(s, 1);
  for (int t = 0; t < trials; ++t) {
    const auto a = EXP(g, random_element(s, 1, rng, 0.5, 0.5));
    const auto b = EXP(g, random_element(s, 1, rng, 0.5, 0.5));
    const auto d = EXP(g, random_element(s, 1, rng, 0.5, 0.5));
    const double inv = std::max(pointwise_gap(*s, group_mul(g, a, group_inv(g, a)), id, rng),
                                pointwise_gap(*s, group_mul(g, group_inv(g, a), a), id, rng));
    const double unit = std::max(germ_gap(group_mul(g, id, a).element(), a.element()),
                                 germ_gap(group_mul(g, a, id).element(), a.element()));
    const double assoc =
        pointwise_gap(*s, group_mul(g, group_mul(g, a, b), d), group_mul(g, a, group_mul(g, b, d)), rng);
    report.record(std::max({inv, unit, assoc}) - tol,
                  {{"trial", t}, {"inverse", inv}, {"unit", unit}, {"associativity", assoc}});
  }
  return report;
}

CheckReport check_adjoint(const RunConfig& c) {
  const int pairs = c.trials_or(200);
  const int linear = c.trials_or(1000);
  const double tol = 1e-9;
  const double lin_tol = 1e-10;
  CheckReport report("adjoint", {{"conjugation_pairs", pairs}, {"linearity_trials", linear},
                                 {"conjugation_tolerance", tol}, {"linearity_tolerance", lin_tol}});
  const auto s = group_space(c);
  const GermGroup g(s, c.bch_order);
  Rng rng = stream(c, "adjoint");

  CheckReport conj("conjugation", {{"trials", pairs}, {"points", 20}});
  for (int t = 0; t < pairs; ++t) {
    const auto gamma = EXP(g, random_element(s, 1, rng, 0.5, 0.5));
    const auto x = random_element(s, 1, rng, 0.3, 0.5);
    const auto lhs = group_mul(g, group_mul(g, gamma, EXP(g, x)), group_inv(g, gamma));
    const auto rhs = EXP(g, AD(g, gamma, x).value);
    const double gap = pointwise_gap(*s, lhs, rhs, rng);
    conj.record(gap - tol, {{"trial", t}, {"residual", gap}});
  }

  CheckReport bounded("linearity_boundedness", {{"trials", linear}});
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::optional<GermGroupElement> gamma;
  double worst_ratio = 0.0;
  for (int t = 0; t < linear; ++t) {
    if (t % 10 == 0) gamma = EXP(g, random_element(s, 1, rng, 0.6, 0.5));
    const auto u = random_element(s, 1, rng, 1.0 + 2.0 * std::abs(unif(rng)));
    const auto v = random_element(s, 1, rng, 1.0 + 2.0 * std::abs(unif(rng)));
    const cplx alpha(unif(rng), unif(rng));
    const cplx beta(unif(rng), unif(rng));
    const auto adu = AD(g, *gamma, u);
    const auto adv = AD(g, *gamma, v);
    const double lin = germ_gap(AD(g, *gamma, element_linear(u, v, alpha, beta)).value,
                                element_linear(adu.value, adv.value, alpha, beta));
    const double ratio = adu.value.norm_upper() / adu.eta_norm;
    worst_ratio = std::max(worst_ratio, ratio / adu.bound);
    const double bound_margin = ratio - adu.bound * (1 + 1e-12);
    bounded.record(std::max(lin - lin_tol, bound_margin),
                   {{"trial", t}, {"linearity", lin}, {"ratio", ratio}, {"bound", adu.bound}});
  }
  bounded.details["worst_ratio_over_bound"] = worst_ratio;
  report.absorb(conj);
  report.absorb(bounded);
  return report;
}

// ---------------------------------------------------------------------------
// regularity

CheckReport check_evolution(const RunConfig& c) {
  const int constants = c.trials_or(100);
  const int curves = c.trials_or(100);
  const int pairs = c.trials_or(50);
  const int oracle_steps = 10 * c.steps;
  CheckReport report("evolution", {{"constant_curves", constants}, {"spline_curves", curves},
                                   {"smoothness_pairs", pairs}, {"steps", c.steps},
                                   {"oracle_steps", oracle_steps}});
  const auto s = group_space(c);
  const GermGroup g(s, c.bch_order);
  Rng rng = stream(c, "evolution");

  CheckReport constant("constant_curves", {{"trials", constants}, {"tolerance", 1e-8}});
  for (int t = 0; t < constants; ++t) {
    const auto xi = random_element(s, 1, rng, 0.5, 0.5);
    const auto r = evol(LieCurve::constant(xi), EvolOptions{c.steps, false});
    const double gap = germ_gap(r.endpoint.element(), EXP(g, xi).element());
    constant.record(gap - 1e-8, {{"trial", t}, {"residual", gap}});
  }

  CheckReport oracle("rk4_oracle", {{"trials", curves}, {"points", 5}, {"tolerance", 1e-6}});
  for (int t = 0; t < curves; ++t) {
    const auto curve = random_lie_curve(s, 1, rng, 4, 0.6);
    const auto r = evol(curve, EvolOptions{c.steps, false});
    double gap = 0.0;
    for (const auto& x : evaluation_points(*s, r.endpoint.level(), rng, 5)) {
      const Coeff want = rk4_right([&](double u) { return curve.eval(u, x); }, c.dim, oracle_steps);
      gap = std::max(gap, (r.endpoint.eval(x) - want).norm());
    }
    oracle.record(gap - 1e-6, {{"trial", t}, {"residual", gap}});
  }

  CheckReport smooth("smoothness_order", {{"trials", pairs}, {"min_order", 1.9}, {"max_order", 2.1}});
  json orders = json::array();
  for (int t = 0; t < pairs; ++t) {
    const auto gamma = random_lie_curve(s, 1, rng, 2, 0.3);
    const auto h = random_lie_curve(s, 1, rng, 2, 1.0);
    const auto sub = smoothness_check(gamma, h);
    const double order = sub.details.value("order", std::nan(""));
    orders.push_back(std::isfinite(order) ? json(order) : json(nullptr));
    const double margin = std::isfinite(order) ? std::max(1.9 - order, order - 2.1) : 1.0;
    smooth.record(sub.passed ? std::min(margin, 0.0) : std::max(margin, 1e-300), {{"trial", t}, {"order", order}});
  }
  smooth.details["orders"] = orders;

  report.absorb(constant);
  report.absorb(oracle);
  report.absorb(smooth);
  return report;
}

CheckReport check_roundtrips(const RunConfig& c) {
  const int trials = c.trials_or(100);
  CheckReport report("roundtrips", {{"trials", trials}, {"tolerance", 1e-6}, {"product_rule_tolerance", 1e-8},
                                    {"steps", c.steps}});
  const auto s = group_space(c);
  const GermGroup g(s, c.bch_order);
  Rng rng = stream(c, "roundtrips");
  for (int t = 0; t < trials; ++t) {
    const RegularityOptions opt{c.steps, 20, 1e-6, static_cast<std::uint64_t>(t)};
    const auto curve = random_lie_curve(s, 1, rng, 4, 0.6);
    const auto forward = roundtrip_check(curve, opt);
    const auto eta = random_group_curve(s, 1, rng, 3, 0.5);
    const auto backward = roundtrip_check(eta, opt);

    const auto a = random_group_curve(s, 1, rng, 3, 0.4);
    const auto b = random_group_curve(s, 1, rng, 3, 0.4);
    const auto ab = a * b;
    const auto pts = evaluation_points(*s, 2, rng, 10);
    double product = 0.0;
    for (double u : {0.0, 0.3, 0.9}) {
      const auto lhs = left_log_derivative(ab, u);
      const auto rhs = element_linear(AD(g, group_inv(g, b.value(u)), left_log_derivative(a, u)).value,
                                      left_log_derivative(b, u), 1.0, 1.0);
      product = std::max(product, pointwise_distance(lhs, rhs, pts));
    }
    const double fwd = forward.details.value("max_residual", std::nan(""));
    const double bwd = backward.details.value("max_residual", std::nan(""));
    double margin = std::max(product - 1e-8, std::max(forward.worst_margin, backward.worst_margin));
    if (!forward.passed || !backward.passed) margin = std::max(margin, 1e-300);
    report.record(margin, {{"trial", t}, {"evol_then_derivative", fwd}, {"derivative_then_evol", bwd},
                           {"product_rule", product}});
  }
  return report;
}

// ---------------------------------------------------------------------------
// complexify

CheckReport check_complexification(const RunConfig&) {
  CheckReport report("complexification", {{"charts", 3}, {"height", 0.5}, {"cocycle_tolerance", 1e-9},
                                          {"annulus_tolerance", 1e-8}, {"perturbation", 1e-6}});
  const auto circle = extend_transitions(circle_atlas(3, 2.2), 0.5);
  auto margins = CheckReport("margins", {});
  margins.record(circle.margins_positive() ? -1.0 : 1.0, {{"margins_positive", circle.margins_positive()}});

  auto cocycles = certify_cocycles(circle, {20, 1e-9});
  cocycles.check = "circle_cocycles";
  auto annulus = annulus_comparison(circle, {20, 1e-8, 1e-12, 1e-9});
  annulus.check = "annulus_uniqueness";

  CheckReport control("perturbation_control", {{"delta", 1e-6}, {"pair", {1, 2}}});
  const auto bent = circle.perturbed(1, 2, 1e-6);
  const auto bent_cocycles = certify_cocycles(bent, {20, 1e-9});
  const auto bent_annulus = annulus_comparison(bent, {20, 1e-8, 1e-12, 1e-9});
  control.details["cocycles_rejected"] = !bent_cocycles.passed;
  control.details["annulus_rejected"] = !bent_annulus.passed;
  control.details["cocycle_worst_margin"] = bent_cocycles.worst_margin;
  control.record(bent_cocycles.passed ? 1.0 : -1.0, {{"control", "perturbed cocycles accepted"}});

  const auto tan = tan_atlas();
  const auto a = extend_transitions(tan, 0.1);
  const auto b = extend_transitions(tan, 0.05);
  auto tan_cocycles = certify_cocycles(a, {20, 1e-9});
  tan_cocycles.check = "tan_cocycles";
  auto unique = uniqueness_biholomorphism(a, b);
  unique.check = "tan_uniqueness";

  for (const auto* sub : {&margins, &cocycles, &annulus, &control, &tan_cocycles, &unique}) report.absorb(*sub);
  report.details["circle"] = circle.to_json();
  return report;
}

// ---------------------------------------------------------------------------

bool SuiteRun::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second.passed; });
}

SuiteRun run_suite(const RunConfig& c) {
  c.validate();
  SuiteRun run;
  const bool all = c.suite == "all";
  auto want = [&](const char* name) { return all || c.suite == name; };
  auto add = [&](const char* suite, CheckReport r) { run.checks.emplace_back(suite, std::move(r)); };

  if (want("germ-space")) {
    add("germ-space", check_sup_estimate(c));
    auto cr = check_compact_regularity(c);
    std::ostringstream csv;
    csv << "n,l,eps,status,k0,delta,trials,failures,worst_margin,extremal_sup,passed\n";
    for (const auto& row : cr.details["rows"]) {
      auto cell = [](const json& v) { return v.is_null() ? std::string() : v.is_number() ? num(v.get<double>()) : v.dump(); };
      csv << row["n"].get<int>() << ',' << row["l"].get<int>() << ',' << num(row["eps"].get<double>()) << ','
          << row["status"].get<std::string>() << ',' << cell(row["k0"]) << ',' << cell(row["delta"]) << ','
          << row["trials"].get<int>() << ',' << row["failures"].get<int>() << ',' << cell(row["worst_margin"])
          << ',' << cell(row.value("extremal_sup", json(nullptr))) << ','
          << (row["passed"].get<bool>() ? "true" : "false") << '\n';
    }
    run.files.emplace_back("compact_regularity.csv", csv.str());
    add("germ-space", std::move(cr));
    add("germ-space", check_factorization(c));
    add("germ-space", check_union_strategy(c));
    add("germ-space", check_cross_basis(c));
  }
  if (want("lie-local")) {
    add("lie-local", check_bch_pairs(c));
    add("lie-local", check_local_axioms(c));
  }
  if (want("lie-global")) {
    add("lie-global", check_exp_log(c));
    add("lie-global", check_group_axioms(c));
    add("lie-global", check_adjoint(c));
  }
  if (want("regularity")) {
    add("regularity", check_evolution(c));
    add("regularity", check_roundtrips(c));
    const auto s = group_space(c);
    Rng rng = stream(c, "trajectory");
    const auto r = evol(random_lie_curve(s, 1, rng, 4, 0.6), EvolOptions{c.steps, true});
    std::ostringstream traj;
    write_trajectory_csv(traj, r, evaluation_points(*s, r.endpoint.level(), rng, 3));
    run.files.emplace_back("trajectory.csv", traj.str());
    for (auto& [suite, rep] : run.checks) {
      if (rep.check == "evolution") {
        rep.details["trajectory"] = {{"file", "trajectory.csv"}, {"steps", r.step_count},
                                     {"error_estimate", r.error_estimate}};
      }
    }
  }
  if (want("complexify")) add("complexify", check_complexification(c));
  return run;
}

json report_json(const RunConfig& c, const SuiteRun& run) {
  json checks = json::array();
  for (const auto& [suite, r] : run.checks) {
    json j = r.to_json();
    j["suite"] = suite;
    checks.push_back(std::move(j));
  }
  return {{"schema", 1}, {"config", c.to_json()}, {"suite", c.suite}, {"passed", run.passed()}, {"checks", checks}};
}

std::string summary_csv(const SuiteRun& run) {
  std::ostringstream out;
  out << "suite,check,trials,failures,worst_margin,passed\n";
  for (const auto& [suite, r] : run.checks) {
    out << suite << ',' << r.check << ',' << r.trials << ',' << r.failure_count << ','
        << (std::isfinite(r.worst_margin) ? num(r.worst_margin) : std::string()) << ','
        << (r.passed ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace germlie
