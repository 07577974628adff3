#include "germlie/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <Eigen/Dense>

namespace germlie {

namespace {

constexpr double kBreakTol = 1e-12;
constexpr int kStencil = 7;

void check_breakpoints(const std::vector<double>& b, std::size_t segments) {
  if (b.size() < 2 || b.size() != segments + 1) {
    throw StructuralError("need one more breakpoint than segments");
  }
  if (b.front() != 0.0 || b.back() != 1.0) throw StructuralError("breakpoints must run from 0 to 1");
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    if (!(b[i] < b[i + 1])) throw StructuralError("breakpoints must increase strictly");
  }
}

int locate(const std::vector<double>& b, double t) {
  if (!(t >= -kBreakTol && t <= 1.0 + kBreakTol)) {
    throw DomainError("curve parameter outside [0, 1]: " + std::to_string(t));
  }
  const auto it = std::upper_bound(b.begin(), b.end(), t);
  const int i = static_cast<int>(it - b.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(b.size()) - 2);
}

/// Bonds every coefficient to the deepest level present; returns that level.
int align_levels(std::vector<std::vector<BHolElement>>& segments, GermSpacePtr& space) {
  int level = 0;
  for (const auto& seg : segments) {
    if (seg.empty()) throw StructuralError("empty curve segment");
    for (const auto& c : seg) {
      if (!space) space = c.germ_space();
      if (!(*c.germ_space() == *space)) throw StructuralError("curve coefficients over different germ spaces");
      level = std::max(level, c.level());
    }
  }
  for (auto& seg : segments) {
    for (auto& c : seg) c = bond(c, level);
  }
  return level;
}

BHolElement horner(const std::vector<BHolElement>& c, double u) {
  BHolElement acc = c.back();
  for (auto it = c.rbegin() + 1; it != c.rend(); ++it) acc = element_linear(acc, *it, u, 1.0);
  return acc;
}

BHolElement bracket(const BHolElement& a, const BHolElement& b) {
  return combine(a, b, [](const TruncatedSeries& x, const TruncatedSeries& y) { return series_bracket(x, y); });
}

BHolElement product(const BHolElement& a, const BHolElement& b) {
  return combine(a, b, [](const TruncatedSeries& x, const TruncatedSeries& y) { return series_mul(x, y); });
}

/// Weights w with sum_j w_j f(o_j h) = h f'(0) + O(h^n), n = offsets.size().
std::vector<double> fd_weights(const std::vector<int>& offsets) {
  const int n = static_cast<int>(offsets.size());
  Eigen::MatrixXd v(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(1) = 1.0;
  for (int p = 0; p < n; ++p) {
    for (int j = 0; j < n; ++j) v(p, j) = std::pow(static_cast<double>(offsets[static_cast<std::size_t>(j)]), p);
  }
  const Eigen::VectorXd w = v.fullPivLu().solve(rhs);
  return {w.data(), w.data() + n};
}

int grid_index(const std::vector<double>& times, double t) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (std::abs(times[k] - t) < 1e-12) return static_cast<int>(k);
  }
  std::ostringstream msg;
  msg << "breakpoint " << t << " is not on the time grid";
  throw PreconditionError(msg.str());
}

}  // namespace

BHolElement element_linear(const BHolElement& a, const BHolElement& b, cplx alpha, cplx beta) {
  return combine(a, b, [&](const TruncatedSeries& x, const TruncatedSeries& y) {
    return series_linear(x, y, alpha, beta);
  });
}

// ---------------------------------------------------------------------------

LieCurve::LieCurve(std::vector<double> breakpoints, std::vector<std::vector<BHolElement>> segments)
    : breakpoints_(std::move(breakpoints)), segments_(std::move(segments)) {
  check_breakpoints(breakpoints_, segments_.size());
  for (const auto& seg : segments_) {
    if (seg.size() > 4) throw StructuralError("curve segments have degree at most 3");
  }
  level_ = align_levels(segments_, space_);
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const double h = breakpoints_[i + 1] - breakpoints_[i];
    double bound = 0.0;
    double hp = 1.0;
    for (const auto& c : segments_[i]) {
      bound += c.norm_upper() * hp;
      hp *= h;
    }
    norm_bound_ = std::max(norm_bound_, bound);
    if (i + 1 < segments_.size()) {
      const BHolElement end = horner(segments_[i], h);
      continuity_residual_ =
          std::max(continuity_residual_, germ_distance(Germ(end), Germ(segments_[i + 1].front())));
    }
  }
}

LieCurve LieCurve::constant(const BHolElement& xi) { return LieCurve({0.0, 1.0}, {{xi}}); }

LieCurve LieCurve::zero(const GermSpacePtr& space, int level) {
  return constant(BHolElement::zero(space, level));
}

int LieCurve::segment_index(double t) const { return locate(breakpoints_, t); }

BHolElement LieCurve::value(double t) const {
  const int i = segment_index(t);
  return horner(segment(i), t - breakpoints_[static_cast<std::size_t>(i)]);
}

Coeff LieCurve::eval(double t, const Point& x) const {
  const int i = segment_index(t);
  const double u = t - breakpoints_[static_cast<std::size_t>(i)];
  const auto& c = segment(i);
  Coeff acc = c.back().eval(x);
  for (auto it = c.rbegin() + 1; it != c.rend(); ++it) acc = (acc * u + it->eval(x)).eval();
  return acc;
}

LieCurve LieCurve::rescaled_piece(double a, double b) const {
  const int ia = grid_index(breakpoints_, a);
  const int ib = grid_index(breakpoints_, b);
  if (!(ia < ib)) throw PreconditionError("rescaled_piece needs a < b");
  const double len = b - a;
  std::vector<double> bp;
  std::vector<std::vector<BHolElement>> segs;
  for (int k = ia; k <= ib; ++k) bp.push_back((breakpoints_[static_cast<std::size_t>(k)] - a) / len);
  bp.front() = 0.0;
  bp.back() = 1.0;
  for (int k = ia; k < ib; ++k) {
    std::vector<BHolElement> c;
    double f = len;
    for (const auto& e : segment(k)) {
      c.push_back(e.map([&](const TruncatedSeries& s) { return series_scale(s, f); }));
      f *= len;
    }
    segs.push_back(std::move(c));
  }
  return LieCurve(std::move(bp), std::move(segs));
}

LieCurve curve_axpy(const LieCurve& a, const LieCurve& b, double s) {
  if (a.breakpoints() != b.breakpoints()) throw StructuralError("curve_axpy needs matching breakpoints");
  std::vector<std::vector<BHolElement>> segs;
  for (int i = 0; i < a.segment_count(); ++i) {
    const auto& ca = a.segment(i);
    const auto& cb = b.segment(i);
    const std::size_t n = std::max(ca.size(), cb.size());
    std::vector<BHolElement> c;
    for (std::size_t j = 0; j < n; ++j) {
      const BHolElement x = j < ca.size() ? ca[j] : BHolElement::zero(a.space(), a.level());
      const BHolElement y = j < cb.size() ? cb[j] : BHolElement::zero(b.space(), b.level());
      c.push_back(element_linear(x, y, 1.0, s));
    }
    segs.push_back(std::move(c));
  }
  return LieCurve(a.breakpoints(), std::move(segs));
}

LieCurve random_lie_curve(const GermSpacePtr& space, int level, Rng& rng, int pieces, double majorant) {
  if (pieces < 1) throw PreconditionError("a curve needs at least one piece");
  std::vector<double> bp;
  for (int i = 0; i <= pieces; ++i) bp.push_back(static_cast<double>(i) / pieces);
  bp.back() = 1.0;
  std::vector<BHolElement> knots;
  for (int i = 0; i <= pieces; ++i) knots.push_back(random_element(space, level, rng, 1.0, 0.5));
  std::vector<std::vector<BHolElement>> segs;
  for (int i = 0; i < pieces; ++i) {
    const double h = bp[static_cast<std::size_t>(i + 1)] - bp[static_cast<std::size_t>(i)];
    const BHolElement& c0 = knots[static_cast<std::size_t>(i)];
    const BHolElement c1 = random_element(space, level, rng, 1.0, 0.5);
    const BHolElement c2 = random_element(space, level, rng, 1.0, 0.5);
    // c3 h^3 = v_{i+1} - c0 - c1 h - c2 h^2
    BHolElement rest = element_linear(knots[static_cast<std::size_t>(i + 1)], c0, 1.0, -1.0);
    rest = element_linear(rest, c1, 1.0, -h);
    rest = element_linear(rest, c2, 1.0, -h * h);
    const double inv3 = 1.0 / (h * h * h);
    segs.push_back({c0, c1, c2, rest.map([&](const TruncatedSeries& s) { return series_scale(s, inv3); })});
  }
  const LieCurve raw(bp, segs);
  const double f = majorant / raw.norm_bound();
  for (auto& seg : segs) {
    for (auto& c : seg) c = c.map([&](const TruncatedSeries& s) { return series_scale(s, f); });
  }
  return LieCurve(std::move(bp), std::move(segs));
}

CurveFunction as_function(const LieCurve& c) {
  return {c.space(), c.level(), c.breakpoints(), [c](double t) { return c.value(t); }};
}

// ---------------------------------------------------------------------------

namespace {

struct Run {
  std::vector<double> times;
  std::vector<GermGroupElement> trajectory;
};

Run integrate(const CurveFunction& gamma, const GermGroup& g, int steps) {
  static const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  static const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  static const double k = std::sqrt(3.0) / 12.0;
  Run run;
  run.times.push_back(0.0);
  run.trajectory.push_back(GermGroupElement::identity(gamma.space, gamma.level));
  const auto& bp = gamma.breakpoints;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const int n = std::max(1, static_cast<int>(std::lround(steps * (bp[i + 1] - bp[i]))));
    const double h = (bp[i + 1] - bp[i]) / n;
    for (int j = 0; j < n; ++j) {
      const double t = bp[i] + j * h;
      try {
        const BHolElement a1 = gamma.value(t + c1 * h);
        const BHolElement a2 = gamma.value(t + c2 * h);
        const BHolElement omega = element_linear(element_linear(a1, a2, 0.5 * h, 0.5 * h), bracket(a1, a2), 1.0,
                                                 k * h * h);
        if (!g.in_omega(omega)) {
          std::ostringstream msg;
          msg << "step norm " << omega.norm_upper() << " >= " << g.omega_budget();
          throw DomainError(msg.str());
        }
        run.trajectory.push_back(group_mul(g, run.trajectory.back(), EXP(g, omega)));
      } catch (const DomainError& e) {
        std::ostringstream msg;
        msg << "evol budget violated at t = " << t << ": " << e.what();
        throw DomainError(msg.str());
      }
      run.times.push_back(j + 1 == n ? bp[i + 1] : t + h);
    }
  }
  return run;
}

}  // namespace

EvolutionResult evol(const CurveFunction& gamma, const EvolOptions& options) {
  if (options.steps < 4) throw PreconditionError("evol needs at least 4 steps");
  const GermGroup g(gamma.space);
  Run run = integrate(gamma, g, options.steps);
  EvolutionResult out{run.trajectory.back(), std::move(run.times), std::move(run.trajectory), 0, 0.0};
  out.step_count = static_cast<int>(out.times.size()) - 1;
  if (options.estimate_error) {
    const Run fine = integrate(gamma, g, 2 * options.steps);
    out.error_estimate = germ_distance(Germ(out.endpoint.element()), Germ(fine.trajectory.back().element()));
  }
  return out;
}

EvolutionResult evol(const LieCurve& gamma, const EvolOptions& options) {
  const GermGroup g(gamma.space());
  if (!(gamma.norm_bound() < g.omega_budget())) {
    std::ostringstream msg;
    msg << "curve norm bound " << gamma.norm_bound() << " >= Omega budget " << g.omega_budget();
    throw DomainError(msg.str());
  }
  return evol(as_function(gamma), options);
}

// ---------------------------------------------------------------------------

GroupPolyCurve::GroupPolyCurve(std::vector<double> breakpoints, std::vector<std::vector<BHolElement>> segments)
    : breakpoints_(std::move(breakpoints)), segments_(std::move(segments)) {
  check_breakpoints(breakpoints_, segments_.size());
  level_ = align_levels(segments_, space_);
}

int GroupPolyCurve::segment_index(double t) const { return locate(breakpoints_, t); }

GermGroupElement GroupPolyCurve::value(double t) const {
  const int i = segment_index(t);
  try {
    return GermGroupElement::certify(horner(segment(i), t - breakpoints_[static_cast<std::size_t>(i)]));
  } catch (const DomainError& e) {
    std::ostringstream msg;
    msg << "group curve leaves the certified set at t = " << t << ": " << e.what();
    throw DomainError(msg.str());
  }
}

BHolElement GroupPolyCurve::derivative(double t) const {
  const int i = segment_index(t);
  const auto& c = segment(i);
  if (c.size() == 1) return BHolElement::zero(space_, level_);
  std::vector<BHolElement> d;
  for (std::size_t j = 1; j < c.size(); ++j) {
    const double f = static_cast<double>(j);
    d.push_back(c[j].map([&](const TruncatedSeries& s) { return series_scale(s, f); }));
  }
  return horner(d, t - breakpoints_[static_cast<std::size_t>(i)]);
}

GroupPolyCurve operator*(const GroupPolyCurve& a, const GroupPolyCurve& b) {
  if (a.breakpoints() != b.breakpoints()) throw StructuralError("curve product needs matching breakpoints");
  std::vector<std::vector<BHolElement>> segs;
  for (int i = 0; i < a.segment_count(); ++i) {
    const auto& ca = a.segment(i);
    const auto& cb = b.segment(i);
    std::vector<std::optional<BHolElement>> c(ca.size() + cb.size() - 1);
    for (std::size_t p = 0; p < ca.size(); ++p) {
      for (std::size_t q = 0; q < cb.size(); ++q) {
        const BHolElement term = product(ca[p], cb[q]);
        c[p + q] = c[p + q] ? element_linear(*c[p + q], term, 1.0, 1.0) : term;
      }
    }
    std::vector<BHolElement> seg;
    for (auto& e : c) seg.push_back(std::move(*e));
    segs.push_back(std::move(seg));
  }
  return GroupPolyCurve(a.breakpoints(), std::move(segs));
}

GroupPolyCurve random_group_curve(const GermSpacePtr& space, int level, Rng& rng, int degree, double majorant) {
  std::vector<BHolElement> c{BHolElement::constant(space, level, space->space().identity())};
  for (int j = 1; j <= degree; ++j) c.push_back(random_element(space, level, rng, majorant / degree, 0.5));
  return GroupPolyCurve({0.0, 1.0}, {std::move(c)});
}

BHolElement left_log_derivative(const GroupPolyCurve& eta, double t) {
  const GermGroup g(eta.space());
  return product(group_inv(g, eta.value(t)).element(), eta.derivative(t));
}

SampledLieCurve left_log_derivative(const GroupPolyCurve& eta, const std::vector<double>& times) {
  SampledLieCurve out;
  for (double t : times) {
    out.times.push_back(t);
    out.values.push_back(left_log_derivative(eta, t));
  }
  return out;
}

CurveFunction left_log_derivative_curve(const GroupPolyCurve& eta) {
  return {eta.space(), eta.level(), eta.breakpoints(), [eta](double t) { return left_log_derivative(eta, t); }};
}

SampledLieCurve left_log_derivative(const EvolutionResult& eta, const std::vector<double>& breakpoints) {
  const GermGroup g(eta.endpoint.element().germ_space());
  SampledLieCurve out;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const int k0 = grid_index(eta.times, breakpoints[i]);
    const int k1 = grid_index(eta.times, breakpoints[i + 1]);
    if (k1 - k0 < kStencil - 1) {
      throw PreconditionError("each segment needs at least " + std::to_string(kStencil - 1) +
                              " steps for the difference stencil");
    }
    const double h = (eta.times[static_cast<std::size_t>(k1)] - eta.times[static_cast<std::size_t>(k0)]) / (k1 - k0);
    const int last = i + 2 == breakpoints.size() ? k1 : k1 - 1;
    for (int k = k0; k <= last; ++k) {
      const int s = std::clamp(k - kStencil / 2, k0, k1 - (kStencil - 1));
      std::vector<int> offsets;
      for (int j = s; j < s + kStencil; ++j) offsets.push_back(j - k);
      const std::vector<double> w = fd_weights(offsets);
      // sum_j w_j (eta_j - eta_k), exact when eta is constant
      const BHolElement& center = eta.trajectory[static_cast<std::size_t>(k)].element();
      BHolElement d = BHolElement::zero(center.germ_space(), center.level());
      for (int j = 0; j < kStencil; ++j) {
        if (s + j == k) continue;
        d = element_linear(d, element_linear(eta.trajectory[static_cast<std::size_t>(s + j)].element(), center, 1.0, -1.0),
                           1.0, w[static_cast<std::size_t>(j)] / h);
      }
      const GermGroupElement& at = eta.trajectory[static_cast<std::size_t>(k)];
      out.times.push_back(eta.times[static_cast<std::size_t>(k)]);
      out.values.push_back(product(group_inv(g, at).element(), d));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

double pointwise_distance(const BHolElement& a, const BHolElement& b, const std::vector<Point>& points) {
  const CoefficientSpace& z = a.germ_space()->space();
  double worst = 0.0;
  for (const auto& x : points) worst = std::max(worst, z.norm(a.eval(x) - b.eval(x)));
  return worst;
}

std::vector<Point> evaluation_points(const GermSpace& s, int level, Rng& rng, int count) {
  const int l = std::min(level + 1, s.levels() - 1);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) out.push_back(s.random_point(rng, l));
  return out;
}

CheckReport roundtrip_check(const LieCurve& gamma, const RegularityOptions& options) {
  CheckReport rep("roundtrip_evol_then_dlog",
                  {{"steps", options.steps}, {"points", options.points}, {"tolerance", options.tolerance},
                   {"seed", options.seed}});
  EvolOptions eo;
  eo.steps = options.steps;
  eo.estimate_error = false;
  const EvolutionResult r = evol(gamma, eo);
  const SampledLieCurve d = left_log_derivative(r, gamma.breakpoints());
  int level = gamma.level();
  for (const auto& v : d.values) level = std::max(level, v.level());
  Rng rng = substream(options.seed, stream_tag("roundtrip"));
  const auto points = evaluation_points(*gamma.space(), level, rng, options.points);
  double worst = 0.0;
  for (std::size_t k = 0; k < d.times.size(); ++k) {
    const double err = pointwise_distance(d.values[k], gamma.value(d.times[k]), points);
    worst = std::max(worst, err);
    rep.record(err - options.tolerance, {{"t", d.times[k]}, {"residual", err}});
  }
  rep.details = {{"max_residual", worst}, {"samples", d.times.size()}};
  return rep;
}

CheckReport roundtrip_check(const GroupPolyCurve& eta, const RegularityOptions& options) {
  CheckReport rep("roundtrip_dlog_then_evol",
                  {{"steps", options.steps}, {"points", options.points}, {"tolerance", options.tolerance},
                   {"seed", options.seed}});
  const GermGroupElement start = eta.value(0.0);
  const GermGroupElement one = GermGroupElement::identity(eta.space(), start.level());
  if (germ_distance(Germ(start.element()), Germ(one.element())) > 1e-12) {
    throw PreconditionError("roundtrip needs eta(0) = 1");
  }
  EvolOptions eo;
  eo.steps = options.steps;
  eo.estimate_error = false;
  const EvolutionResult r = evol(left_log_derivative_curve(eta), eo);
  int level = eta.level();
  for (const auto& v : r.trajectory) level = std::max(level, v.level());
  Rng rng = substream(options.seed, stream_tag("roundtrip"));
  const auto points = evaluation_points(*eta.space(), level, rng, options.points);
  double worst = 0.0;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const double err = pointwise_distance(r.trajectory[k].element(), eta.value(r.times[k]).element(), points);
    worst = std::max(worst, err);
    rep.record(err - options.tolerance, {{"t", r.times[k]}, {"residual", err}});
  }
  rep.details = {{"max_residual", worst},
                 {"endpoint_residual",
                  pointwise_distance(r.endpoint.element(), eta.value(1.0).element(), points)}};
  return rep;
}

CheckReport smoothness_check(const LieCurve& gamma, const LieCurve& h, const SmoothnessOptions& options) {
  CheckReport rep("evol_smoothness", {{"steps", options.steps},
                                      {"scales", options.scales},
                                      {"min_order", options.min_order},
                                      {"max_order", options.max_order}});
  const auto& s = options.scales;
  if (s.size() != 3 || !(s[0] > s[1] && s[1] > s[2] && s[2] > 0.0) ||
      std::abs(s[0] / s[1] - s[1] / s[2]) > 1e-12 * (s[0] / s[1])) {
    throw PreconditionError("smoothness_check needs three decreasing scales in geometric progression");
  }
  const GermGroup g(gamma.space());
  if (!(gamma.norm_bound() + s[0] * h.norm_bound() < g.omega_budget())) {
    throw PreconditionError("gamma +- s h leaves the Omega budget");
  }
  EvolOptions eo;
  eo.steps = options.steps;
  eo.estimate_error = false;
  std::vector<BHolElement> q;
  json quotients = json::array();
  for (double si : s) {
    const auto plus = evol(curve_axpy(gamma, h, si), eo).endpoint.element();
    const auto minus = evol(curve_axpy(gamma, h, -si), eo).endpoint.element();
    q.push_back(element_linear(plus, minus, 0.5 / si, -0.5 / si));
    quotients.push_back(q.back().norm_upper());
  }
  const double d1 = germ_distance(Germ(q[0]), Germ(q[1]));
  const double d2 = germ_distance(Germ(q[1]), Germ(q[2]));
  const double order = std::log(d1 / d2) / std::log(s[0] / s[1]);
  const double margin = std::isfinite(order) ? std::max(options.min_order - order, order - options.max_order)
                                             : std::numeric_limits<double>::infinity();
  rep.record(margin, {{"order", order}});
  rep.details = {{"quotient_norms", quotients},
                 {"differences", {d1, d2}},
                 {"order", order},
                 {"note", "finite-difference evidence of differentiability, not a proof of smoothness"}};
  return rep;
}

void write_trajectory_csv(std::ostream& out, const EvolutionResult& r, const std::vector<Point>& points) {
  const int m = r.endpoint.element().germ_space()->space().m();
  out << "t,point";
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) out << ",m" << i << j << "_re,m" << i << j << "_im";
  }
  out << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    for (std::size_t p = 0; p < points.size(); ++p) {
      const Coeff v = r.trajectory[k].eval(points[p]);
      out << r.times[k] << ',' << p;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) out << ',' << v(i, j).real() << ',' << v(i, j).imag();
      }
      out << '\n';
    }
  }
}

}  // namespace germlie
