#include "germlie/germ_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace germlie {

namespace {

constexpr double kSlack = 1e-12;

// Unit directions used for deterministic overlap samples.
std::vector<Point> sample_directions(int dim) {
  std::vector<Point> out;
  for (int j = 0; j < 8; ++j) {
    const cplx u = std::polar(1.0, 2.0 * std::numbers::pi * j / 8.0 + 0.1);
    Point p = Point::Zero(dim);
    p(0) = u;
    out.push_back(p);
    if (dim == 2) {
      Point q = Point::Zero(2);
      q(1) = u;
      out.push_back(q);
      Point w(2);
      w(0) = u / std::numbers::sqrt2;
      w(1) = std::conj(u) * cplx(0.0, 1.0) / std::numbers::sqrt2;
      out.push_back(w);
    }
  }
  return out;
}

// Points in B(a, rho) cap B(b, rho), which is nonempty when |a - b| < 2 rho.
std::vector<Point> lens_points(const Point& a, const Point& b, double rho) {
  const double d = point_norm(a - b);
  const double h = rho - 0.5 * d;
  std::vector<Point> out;
  if (!(h > 0.0)) return out;
  const Point mid = 0.5 * (a + b);
  out.push_back(mid);
  for (const Point& u : sample_directions(static_cast<int>(a.size()))) {
    for (double s : {0.5, 0.95}) out.push_back(mid + u * (s * h));
  }
  return out;
}

double overlap_residual(const TruncatedSeries& f, const TruncatedSeries& g, double rho) {
  double worst = 0.0;
  const double tails = f.tail_bound() + g.tail_bound();
  for (const Point& x : lens_points(f.anchor(), g.anchor(), rho)) {
    worst = std::max(worst, f.space().norm(f.eval(x) - g.eval(x)) - tails);
  }
  return worst;
}

double degree_bound_norm(const TruncatedSeries& s, int k) {
  if (s.dim() == 1) return s.space().norm(s.coeff(k));
  double total = 0.0;
  for (int j = 0; j <= k; ++j) total += s.space().norm(s.coeff(MultiIndex{k - j, j}));
  return total;
}

DerivativeSups sups_from_reps(const std::vector<TruncatedSeries>& reps, double radius) {
  DerivativeSups out;
  out.radius = radius;
  int degree = 0;
  for (const auto& s : reps) degree = std::max(degree, s.degree_bound());
  out.s.assign(static_cast<std::size_t>(degree + 1), 0.0);
  for (const auto& s : reps) {
    const double flat = s.flat_tail();
    const double high = s.high_order_tail();
    for (int k = 0; k <= degree; ++k) {
      double v = flat / std::pow(radius, k);
      if (k <= s.degree_bound()) {
        v += degree_bound_norm(s, k);
      } else {
        v += high / std::pow(radius, k);
      }
      out.s[static_cast<std::size_t>(k)] = std::max(out.s[static_cast<std::size_t>(k)], v);
    }
    out.beyond_scale = std::max(out.beyond_scale, flat + high);
  }
  return out;
}

Coeff eval_checked(const Evaluator& f, const Point& x) {
  Coeff v = f(x);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v.data()[i].real()) || !std::isfinite(v.data()[i].imag())) {
      throw EvaluationError("evaluator returned a non-finite sample");
    }
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------

GermSpace::GermSpace(std::vector<Point> anchors, double base_radius, double ratio, int levels,
                     CoefficientSpace space, int degree)
    : anchors_(std::move(anchors)),
      base_radius_(base_radius),
      ratio_(ratio),
      levels_(levels),
      space_(space),
      degree_(degree) {
  if (anchors_.empty()) throw StructuralError("the anchor set K must be nonempty");
  const auto d = anchors_.front().size();
  if (d < 1 || d > 2) throw StructuralError("anchors must lie in C^1 or C^2");
  for (const auto& a : anchors_) {
    if (a.size() != d) throw StructuralError("anchors have mixed dimensions");
  }
  if (!(base_radius > 0.0)) throw PreconditionError("base radius must be positive");
  if (!(ratio > 0.0 && ratio < kRatioLimit)) {
    std::ostringstream msg;
    msg << "ratio r = " << ratio << " must lie in (0, 1/(2e)) = (0, " << kRatioLimit << ")";
    throw PreconditionError(msg.str());
  }
  if (levels < 1) throw PreconditionError("at least one level is required");
  if (degree < 0) throw PreconditionError("degree must be nonnegative");
}

GermSpacePtr make_germ_space(std::vector<Point> anchors, double base_radius, double ratio,
                             int levels, CoefficientSpace space, int degree) {
  return std::make_shared<const GermSpace>(std::move(anchors), base_radius, ratio, levels, space,
                                           degree);
}

void GermSpace::require_level(int level) const {
  if (level < 0 || level >= levels_) {
    throw StructuralError("level " + std::to_string(level) + " outside 0.." +
                          std::to_string(levels_ - 1));
  }
}

double GermSpace::radius(int level) const {
  require_level(level);
  return base_radius_ * std::pow(ratio_, level);
}

int GermSpace::anchor_containing(int level, const Point& x) const {
  const double rho = radius(level);
  int best = -1;
  double best_dist = 0.0;
  for (int i = 0; i < anchor_count(); ++i) {
    const double dist = point_norm(x - anchors_[static_cast<std::size_t>(i)]);
    if (dist <= rho * (1.0 + kSlack) && (best < 0 || dist < best_dist)) {
      best = i;
      best_dist = dist;
    }
  }
  return best;
}

std::vector<std::pair<int, int>> GermSpace::overlapping_pairs(int level) const {
  const double rho = radius(level);
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < anchor_count(); ++i) {
    for (int j = i + 1; j < anchor_count(); ++j) {
      if (point_norm(anchors_[static_cast<std::size_t>(i)] - anchors_[static_cast<std::size_t>(j)]) < 2.0 * rho) {
        out.emplace_back(i, j);
      }
    }
  }
  return out;
}

Point GermSpace::random_point(Rng& rng, int level, double fraction) const {
  std::uniform_int_distribution<int> pick(0, anchor_count() - 1);
  const Point& a = anchors_[static_cast<std::size_t>(pick(rng))];
  return random_point_in_ball(rng, a, fraction * radius(level));
}

bool operator==(const GermSpace& a, const GermSpace& b) {
  if (&a == &b) return true;
  return a.anchors_ == b.anchors_ && a.base_radius_ == b.base_radius_ && a.ratio_ == b.ratio_ &&
         a.space_ == b.space_ && a.degree_ == b.degree_;
}

// ---------------------------------------------------------------------------

BHolElement::BHolElement(GermSpacePtr space, int level, std::vector<TruncatedSeries> reps)
    : space_(std::move(space)), level_(level), reps_(std::move(reps)) {
  if (!space_) throw StructuralError("element without a germ space");
  const double rho = space_->radius(level);
  if (static_cast<int>(reps_.size()) != space_->anchor_count()) {
    throw StructuralError("one series per anchor is required");
  }
  for (std::size_t i = 0; i < reps_.size(); ++i) {
    auto& s = reps_[i];
    if (!(s.anchor() == space_->anchors()[i])) throw StructuralError("series anchor differs from K");
    if (!(s.space() == space_->space())) throw StructuralError("series coefficient space differs");
    if (s.radius() < rho * (1.0 - kSlack)) {
      std::ostringstream msg;
      msg << "series radius " << s.radius() << " is below the level radius " << rho;
      throw DomainError(msg.str());
    }
    if (s.radius() > rho) s = s.restricted(rho);
    norm_upper_ = std::max(norm_upper_, majorant_norm(s, s.radius()));
  }
  for (const auto& [i, j] : space_->overlapping_pairs(level)) {
    coherence_residual_ = std::max(
        coherence_residual_,
        overlap_residual(reps_[static_cast<std::size_t>(i)], reps_[static_cast<std::size_t>(j)], rho));
  }
}

BHolElement BHolElement::constant(GermSpacePtr space, int level, const Coeff& value) {
  std::vector<TruncatedSeries> reps;
  for (const auto& a : space->anchors()) {
    reps.push_back(TruncatedSeries::constant(space->space(), a, space->degree(),
                                             space->radius(level), value));
  }
  return BHolElement(std::move(space), level, std::move(reps));
}

BHolElement BHolElement::zero(GermSpacePtr space, int level) {
  const Coeff z = space->space().zero();
  return constant(std::move(space), level, z);
}

BHolElement BHolElement::from_global(GermSpacePtr space, int level, const TruncatedSeries& global) {
  std::vector<TruncatedSeries> reps;
  const double rho = space->radius(level);
  for (const auto& a : space->anchors()) {
    reps.push_back(global.anchor() == a ? global.restricted(std::min(rho, global.radius()))
                                        : reexpand(global, a, rho));
  }
  return BHolElement(std::move(space), level, std::move(reps));
}

double BHolElement::norm_lower(int samples) const {
  double best = 0.0;
  for (const auto& s : reps_) best = std::max(best, sample_sup(s, s.radius(), samples));
  return best;
}

Coeff BHolElement::eval(const Point& x) const {
  const int i = space_->anchor_containing(level_, x);
  if (i < 0) throw DomainError("point lies outside U_" + std::to_string(level_));
  return reps_[static_cast<std::size_t>(i)].eval(x);
}

double BHolElement::tail_bound() const {
  double t = 0.0;
  for (const auto& s : reps_) t = std::max(t, s.tail_bound());
  return t;
}

BHolElement bond(const BHolElement& e, int level) {
  if (level < e.level()) {
    throw StructuralError("bonding goes from a level m to a deeper level n >= m");
  }
  if (level == e.level()) return e;
  const double rho = e.germ_space()->radius(level);
  std::vector<TruncatedSeries> reps;
  for (const auto& s : e.reps()) reps.push_back(s.restricted(rho));
  return BHolElement(e.germ_space(), level, std::move(reps));
}

double germ_distance(const Germ& a, const Germ& b) {
  if (!(*a.element().germ_space() == *b.element().germ_space())) {
    throw StructuralError("germs live over different germ spaces");
  }
  const int level = std::max(a.level(), b.level());
  const BHolElement ea = bond(a.element(), level);
  const BHolElement eb = bond(b.element(), level);
  double worst = 0.0;
  for (std::size_t i = 0; i < ea.reps().size(); ++i) {
    worst = std::max(worst, coefficient_distance(ea.reps()[i], eb.reps()[i], ea.radius()));
  }
  return worst;
}

bool germs_equal(const Germ& a, const Germ& b, double tol) { return germ_distance(a, b) <= tol; }

BHolElement random_element(const GermSpacePtr& space, int level, Rng& rng, double majorant,
                           double decay) {
  const double rho = space->radius(level);
  const Point& a0 = space->anchors().front();
  double reach = 0.0;
  for (const auto& a : space->anchors()) reach = std::max(reach, point_norm(a - a0));
  const TruncatedSeries global =
      random_series(rng, space->space(), a0, space->degree(), rho + reach, 1.0, decay);
  const BHolElement raw = BHolElement::from_global(space, level, global);
  const double n = raw.norm_upper();
  if (n == 0.0) return raw;
  return raw.map([&](const TruncatedSeries& s) { return series_scale(s, majorant / n); });
}

// ---------------------------------------------------------------------------

FactorizeResult factorize(const GermSpacePtr& space, int level, const Evaluator& f,
                          const FactorizeOptions& options) {
  const double rho = space->radius(level);
  const int degree = options.degree < 0 ? space->degree() : options.degree;
  const int dim = space->dim();
  const auto& cs = space->space();
  double worst_excess = -1.0;
  double consistency = 0.0;
  double boundary_sup = 0.0;
  std::vector<TruncatedSeries> reps;

  for (const auto& a : space->anchors()) {
    std::vector<Coeff> coeffs;
    if (dim == 1) {
      const int q = std::max(options.quadrature_points, 4 * std::max(degree, 1));
      const CauchyExtraction ex = cauchy_extract(f, a, Point::Ones(1), rho, degree, q);
      worst_excess = std::max(worst_excess, ex.worst_bound_excess);
      consistency = std::max(consistency, ex.consistency_residual);
      coeffs = ex.coeffs;
      for (int j = 0; j < q; ++j) {
        Point x(1);
        x(0) = a(0) + std::polar(rho * (1.0 - 1e-9), 2.0 * std::numbers::pi * j / q);
        boundary_sup = std::max(boundary_sup, cs.norm(eval_checked(f, x)));
      }
    } else {
      const int q = std::max(64, 4 * std::max(degree, 1));
      const TorusExtraction outer = cauchy_extract_torus(f, a, rho, degree, q, 0.8);
      const TorusExtraction inner = cauchy_extract_torus(f, a, rho, degree, q, 0.4);
      const double scale = std::max(1.0, outer.sample_sup);
      for (int i = 0; i < static_cast<int>(outer.coeffs.size()); ++i) {
        const int k = total_degree(multi_index_at(2, i));
        const double rq = outer.quadrature_radius;
        const Coeff& c = outer.coeffs[static_cast<std::size_t>(i)];
        worst_excess = std::max(worst_excess,
                                (c.norm() * std::pow(rq, k) - outer.sample_sup) / scale);
        consistency = std::max(consistency, (c - inner.coeffs[static_cast<std::size_t>(i)]).norm() *
                                                std::pow(inner.quadrature_radius, k) / scale);
      }
      coeffs = outer.coeffs;
      Rng rng = substream(options.seed, 0xb0da);
      for (int j = 0; j < 512; ++j) {
        Point u = random_point_in_ball(rng, Point::Zero(2), 1.0);
        u /= point_norm(u);
        boundary_sup = std::max(boundary_sup, cs.norm(eval_checked(f, Point(a + u * (rho * (1.0 - 1e-9))))));
      }
    }
    if (worst_excess > options.holomorphy_tolerance || consistency > options.holomorphy_tolerance) {
      std::ostringstream msg;
      msg << "not boundedly holomorphic at claimed radius " << rho << " (Cauchy bound excess "
          << worst_excess << ", two-circle residual " << consistency << ")";
      throw DomainError(msg.str());
    }
    TruncatedSeries poly(cs, a, degree, rho, std::move(coeffs));
    const double sup = options.sup_bound.value_or(1.01 * boundary_sup);
    reps.push_back(poly.with_tails(sup + poly.polynomial_majorant(rho), 0.0));
  }

  FactorizeResult out{BHolElement(space, level, std::move(reps))};
  out.worst_bound_excess = worst_excess;
  out.consistency_residual = consistency;
  out.sampled_sup = boundary_sup;
  Rng rng = substream(options.seed, 0xfac7);
  double sup_p = 0.0;
  double sup_f = 0.0;
  for (int i = 0; i < options.samples; ++i) {
    const Point x = space->random_point(rng, level, options.sample_fraction);
    const Coeff fx = eval_checked(f, x);
    const Coeff px = out.element.eval(x);
    out.reconstruction_error = std::max(out.reconstruction_error, cs.norm(px - fx));
    sup_p = std::max(sup_p, cs.norm(px));
    sup_f = std::max(sup_f, cs.norm(fx));
  }
  out.isometry_gap = std::abs(sup_p - sup_f);
  return out;
}

// ---------------------------------------------------------------------------

double DerivativeSups::weighted_sum(double t) const { return tail_sum(-1, t); }

double DerivativeSups::tail_sum(int j, double t) const {
  if (!(t >= 0.0)) throw PreconditionError("evaluation point must be nonnegative");
  const int n = static_cast<int>(s.size()) - 1;
  double total = 0.0;
  for (int k = std::max(j + 1, 0); k <= n; ++k) total += s[static_cast<std::size_t>(k)] * std::pow(t, k);
  if (beyond_scale == 0.0) return total;
  const double q = t / radius;
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  total += beyond_scale * std::pow(q, std::max(n, j) + 1) / (1.0 - q);
  return total;
}

DerivativeSups derivative_sups(const std::vector<BHolElement>& family) {
  if (family.empty()) throw StructuralError("derivative sups need a nonempty family");
  int level = 0;
  for (const auto& e : family) level = std::max(level, e.level());
  std::vector<TruncatedSeries> reps;
  for (const auto& e : family) {
    const BHolElement b = bond(e, level);
    reps.insert(reps.end(), b.reps().begin(), b.reps().end());
  }
  return sups_from_reps(reps, family.front().germ_space()->radius(level));
}

SupEstimateResult sup_estimate_check(const std::vector<BHolElement>& family, double big_r, double r,
                            bool enforce_precondition, double tol) {
  if (family.empty()) throw StructuralError("lemma check needs a nonempty family");
  SupEstimateResult out;
  out.precondition_ok = r < big_r / (2.0 * std::numbers::e);
  if (!out.precondition_ok && enforce_precondition) {
    std::ostringstream msg;
    msg << "r = " << r << " must be below R/(2e) = " << big_r / (2.0 * std::numbers::e);
    throw PreconditionError(msg.str());
  }
  std::vector<TruncatedSeries> reps;
  for (const auto& e : family) {
    for (const auto& s : e.reps()) {
      if (s.radius() < big_r * (1.0 - kSlack)) {
        throw PreconditionError("family members must be bounded on the radius-R balls");
      }
      const TruncatedSeries sr = s.restricted(std::min(big_r, s.radius()));
      out.sup_lower = std::max(out.sup_lower, sample_sup(sr, sr.radius(), 1024));
      reps.push_back(sr);
    }
  }
  const DerivativeSups sups = sups_from_reps(reps, big_r);
  out.lhs = sups.weighted_sum(r);
  const double denom = big_r - 2.0 * std::numbers::e * r;
  out.factor = denom > 0.0 ? big_r / denom : -std::numeric_limits<double>::infinity();
  out.rhs = denom > 0.0 ? out.factor * out.sup_lower : -std::numeric_limits<double>::infinity();
  out.margin = out.lhs - out.rhs;
  out.passed = out.precondition_ok && out.lhs <= out.rhs + tol * std::max(1.0, out.rhs);
  return out;
}

// ---------------------------------------------------------------------------

ExtremalWitness extremal_inclusion_witness(double ratio, int n, int l, int m, double delta,
                                           int degree) {
  std::vector<double> a(static_cast<std::size_t>(degree + 1));
  std::vector<double> b(static_cast<std::size_t>(degree + 1));
  for (int k = 0; k <= degree; ++k) {
    a[static_cast<std::size_t>(k)] = std::pow(ratio, (l - n) * k);
    b[static_cast<std::size_t>(k)] = std::pow(ratio, (m - n) * k);
  }
  ExtremalWitness best;
  auto consider = [&](std::vector<std::pair<int, double>> terms) {
    double v = 0.0;
    for (const auto& [k, t] : terms) v += t * b[static_cast<std::size_t>(k)];
    if (v > best.value) best = {v, std::move(terms)};
  };
  for (int k = 0; k <= degree; ++k) {
    consider({{k, std::min(1.0, delta / a[static_cast<std::size_t>(k)])}});
  }
  for (int j = 0; j <= degree; ++j) {
    for (int k = j + 1; k <= degree; ++k) {
      // t_j + t_k = 1, t_j a_j + t_k a_k = delta
      const double aj = a[static_cast<std::size_t>(j)];
      const double ak = a[static_cast<std::size_t>(k)];
      const double tk = (aj - delta) / (aj - ak);
      if (tk >= 0.0 && tk <= 1.0) consider({{j, 1.0 - tk}, {k, tk}});
    }
  }
  return best;
}

bool in_hypothesis_set(const BHolElement& e, int l, double delta) {
  return e.norm_upper() <= 1.0 && bond(e, l).norm_upper() <= delta;
}

CheckReport compact_regularity_check(const GermSpacePtr& space, int n, int l, double eps,
                                     const CompactRegularityOptions& options) {
  const double r = space->ratio();
  const int m = n + 1;
  const int degree = space->degree();
  CheckReport report("compact_regularity",
                     {{"n", n}, {"l", l}, {"m", m}, {"eps", eps}, {"r", r},
                      {"rho0", space->base_radius()}, {"degree", degree},
                      {"trials", options.trials}, {"seed", options.seed}});
  if (l < n + 1) throw PreconditionError("compact regularity needs l >= n + 1");
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  space->require_level(l);

  Rng rng = substream(options.seed, stream_tag("compact_regularity") ^ static_cast<std::uint64_t>(n * 131 + l * 17));
  const double rho_n = space->radius(n);

  // Norm-one test family: monomials around the first anchor plus random members.
  std::vector<BHolElement> family;
  const Point& a0 = space->anchors().front();
  double reach = 0.0;
  for (const auto& a : space->anchors()) reach = std::max(reach, point_norm(a - a0));
  const auto& cs = space->space();
  Coeff unit = cs.zero();
  unit(0, 0) = 1.0;
  for (int i = 0; i < term_count(space->dim(), degree); ++i) {
    std::vector<Coeff> c(static_cast<std::size_t>(i + 1), cs.zero());
    c.back() = unit;
    const TruncatedSeries mono(cs, a0, degree, rho_n + reach, std::move(c));
    BHolElement e = BHolElement::from_global(space, n, mono);
    const double nu = e.norm_upper();
    family.push_back(e.map([&](const TruncatedSeries& s) { return series_scale(s, 1.0 / nu); }));
  }
  for (int i = 0; i < options.family_size; ++i) family.push_back(random_element(space, n, rng, 1.0));

  // Normalized sups: coefficient k measured against rho_n^k. Beyond the degree
  // bound every member of the unit ball obeys the Cauchy estimate s_k <= 1.
  const DerivativeSups sups = derivative_sups(family);
  const double t = r * rho_n;
  const double ball_tail = std::pow(r, degree + 1) / (1.0 - r);
  int k0 = -1;
  double tail_at_k0 = 0.0;
  for (int j = 0; j <= degree; ++j) {
    const double tail = sups.tail_sum(j, t) + ball_tail;
    if (tail <= 0.5 * eps) {
      k0 = j;
      tail_at_k0 = tail;
      break;
    }
  }
  report.details["s_k_normalized"] = json::array();
  for (int k = 0; k <= degree; ++k) {
    report.details["s_k_normalized"].push_back(sups.s[static_cast<std::size_t>(k)] * std::pow(rho_n, k));
  }
  if (k0 < 0) {
    report.details["status"] = "inconclusive at this truncation";
    return report;
  }
  const double delta = (1.0 - 2.0 * std::numbers::e * r) * std::pow(r, k0) * eps / 2.0;
  report.details["status"] = "tested";
  report.details["k0"] = k0;
  report.details["tail_at_k0"] = tail_at_k0;
  report.details["delta"] = delta;

  const ExtremalWitness w = extremal_inclusion_witness(r, n, l, m, delta, degree);
  json terms = json::array();
  for (const auto& [k, tk] : w.terms) terms.push_back({k, tk});
  report.details["extremal"] = {{"sup_m", w.value},
                                {"terms", terms},
                                {"exceeds_eps", w.value > eps},
                                {"scope", "single-anchor polynomials, informational"}};

  const double rho_l = space->radius(l);
  const double rho_m = space->radius(m);
  std::uniform_real_distribution<double> unif;
  std::exponential_distribution<double> expo;
  int certified = 0;
  for (int trial = 0; trial < options.trials; ++trial) {
    // Nonconstant part with random degree profile, constant part below delta.
    const double spike = unif(rng) < 0.5 ? 1.0 : 4.0;
    std::vector<Coeff> qc(static_cast<std::size_t>(term_count(space->dim(), degree)), cs.zero());
    for (int i = 1; i < static_cast<int>(qc.size()); ++i) {
      const int k = total_degree(multi_index_at(space->dim(), i));
      qc[static_cast<std::size_t>(i)] = random_coeff_with_norm(rng, cs, std::pow(expo(rng), spike) / std::pow(rho_n + reach, k));
    }
    const TruncatedSeries q_global(cs, a0, degree, rho_n + reach, std::move(qc));
    const BHolElement q = BHolElement::from_global(space, n, q_global);
    const Coeff c0 = random_coeff_with_norm(rng, cs, unif(rng) * std::min(delta, 1.0));
    const BHolElement base = BHolElement::constant(space, n, c0);
    auto build = [&](double amp) {
      return combine(base, q, [&](const TruncatedSeries& x, const TruncatedSeries& y) {
        return series_linear(x, y, 1.0, amp);
      });
    };
    double lo = 0.0;
    double hi = 1.0;
    while (in_hypothesis_set(build(hi), l, delta) && hi < 1e12) hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (in_hypothesis_set(build(mid), l, delta) ? lo : hi) = mid;
    }
    const double amp = lo * (unif(rng) < 0.5 ? 1.0 : unif(rng));
    const BHolElement e = build(amp);
    if (!in_hypothesis_set(e, l, delta)) {
      report.fail({{"trial", trial}, {"reason", "generator left the hypothesis set"}});
      continue;
    }
    const BHolElement em = bond(e, m);
    const double lower = em.norm_lower(options.sup_samples);
    const double upper = em.norm_upper();
    if (upper <= eps) ++certified;
    report.record(lower - eps, {{"trial", trial},
                                {"sup_m_lower", lower},
                                {"sup_m_upper", upper},
                                {"sup_l_upper", bond(e, l).norm_upper()},
                                {"rho_l", rho_l},
                                {"rho_m", rho_m}});
  }
  report.details["certified_trials"] = certified;
  return report;
}

// ---------------------------------------------------------------------------

GlueResult glue(const BHolElement& a, const BHolElement& b, double tol) {
  const auto& sa = *a.germ_space();
  const auto& sb = *b.germ_space();
  if (sa.base_radius() != sb.base_radius() || sa.ratio() != sb.ratio() || !(sa.space() == sb.space()) ||
      sa.dim() != sb.dim() || sa.degree() != sb.degree()) {
    throw StructuralError("glued elements need the same rho_0, r, degree and coefficient space");
  }
  if (a.level() != b.level()) throw StructuralError("glued elements must share a level");
  const double rho = a.radius();
  GlueResult out;
  std::vector<Point> anchors = sa.anchors();
  std::vector<TruncatedSeries> reps = a.reps();
  for (int j = 0; j < sb.anchor_count(); ++j) {
    const Point& bj = sb.anchors()[static_cast<std::size_t>(j)];
    bool duplicate = false;
    for (int i = 0; i < sa.anchor_count(); ++i) {
      const Point& ai = sa.anchors()[static_cast<std::size_t>(i)];
      if (point_norm(ai - bj) < 2.0 * rho) {
        out.overlap_residual = std::max(out.overlap_residual, overlap_residual(a.rep(i), b.rep(j), rho));
      }
      if (ai == bj) duplicate = true;
    }
    if (!duplicate) {
      anchors.push_back(bj);
      reps.push_back(b.rep(j));
    }
  }
  out.ok = out.overlap_residual <= tol;
  if (!out.ok) return out;
  auto joint = make_germ_space(std::move(anchors), sa.base_radius(), sa.ratio(),
                               std::max(sa.levels(), sb.levels()), sa.space(), sa.degree());
  out.element = BHolElement(std::move(joint), a.level(), std::move(reps));
  return out;
}

CheckReport union_strategy_check(const GermSpacePtr& k1, const GermSpacePtr& k2, int level,
                                 const UnionStrategyOptions& options) {
  CheckReport report("union_strategy", {{"level", level},
                                        {"anchors_1", k1->anchor_count()},
                                        {"anchors_2", k2->anchor_count()},
                                        {"trials", options.trials},
                                        {"seed", options.seed}});
  const double rho = k1->radius(level);
  Point center = Point::Zero(k1->dim());
  std::vector<Point> all = k1->anchors();
  all.insert(all.end(), k2->anchors().begin(), k2->anchors().end());
  for (const auto& p : all) center += p;
  center /= static_cast<double>(all.size());
  double reach = 0.0;
  for (const auto& p : all) reach = std::max(reach, point_norm(p - center));
  bool overlapping = false;
  for (const auto& p : k1->anchors()) {
    for (const auto& q : k2->anchors()) overlapping = overlapping || point_norm(p - q) < 2.0 * rho;
  }
  report.details["overlapping"] = overlapping;

  Rng rng = substream(options.seed, stream_tag("union_strategy"));
  const auto& cs = k1->space();
  for (int trial = 0; trial < options.trials; ++trial) {
    const TruncatedSeries global = random_series(rng, cs, center, k1->degree(), rho + reach, 1.0);
    const BHolElement e1 = BHolElement::from_global(k1, level, global);
    const BHolElement e2 = BHolElement::from_global(k2, level, global);
    const GlueResult g = glue(e1, e2);
    if (!report.record(g.overlap_residual - 1e-9, {{"trial", trial}, {"overlap_residual", g.overlap_residual}})) {
      continue;
    }
    double worst = 0.0;
    const auto& joint = *g.element->germ_space();
    for (int i = 0; i < options.samples; ++i) {
      const Point x = joint.random_point(rng, level);
      worst = std::max(worst, cs.norm(g.element->eval(x) - global.eval(x)));
    }
    report.record(worst - 1e-10, {{"trial", trial}, {"glued_vs_source", worst}});
  }

  // Incompatible inputs must be refused whenever the pieces overlap.
  const TruncatedSeries f = random_series(rng, cs, center, k1->degree(), rho + reach, 1.0);
  const TruncatedSeries h = random_series(rng, cs, center, k1->degree(), rho + reach, 1.0);
  const GlueResult bad = glue(BHolElement::from_global(k1, level, f), BHolElement::from_global(k2, level, h));
  report.details["negative_control"] = {{"glued", bad.ok}, {"overlap_residual", bad.overlap_residual}};
  if (overlapping && bad.ok) report.fail({{"negative_control", "incompatible pieces were glued"}});
  return report;
}

}  // namespace germlie
