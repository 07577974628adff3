#include "germlie/complexify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "germlie/errors.hpp"

namespace germlie {

namespace {

constexpr double kPi = std::numbers::pi;
const double kInf = std::numeric_limits<double>::infinity();

json interval_json(const Interval& v) { return json::array({v.lo, v.hi}); }

Interval interval_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

bool strictly_inside(const Interval& inner, const Interval& outer) {
  return outer.lo < inner.lo && inner.hi < outer.hi;
}

std::string pair_name(const Transition& t) {
  return "(" + std::to_string(t.i) + "," + std::to_string(t.j) + ")";
}

Point real_point(double x) {
  Point p(1);
  p(0) = x;
  return p;
}

TruncatedSeries scalar_series(double anchor, const std::vector<double>& c, double radius, double tail) {
  std::vector<Coeff> coeffs;
  for (double v : c) coeffs.push_back(Coeff::Constant(1, 1, cplx(v, 0.0)));
  return TruncatedSeries(CoefficientSpace::scalar(), real_point(anchor), static_cast<int>(c.size()) - 1, radius,
                         std::move(coeffs), tail, 0.0);
}

/// Tail of sum |a_k| rho^k beyond `degree` from an extended coefficient list,
/// closed with a geometric remainder at ratio q.
double extended_tail(const std::vector<double>& a, int degree, double rho, double q) {
  double tail = 0.0;
  for (std::size_t k = static_cast<std::size_t>(degree) + 1; k < a.size(); ++k) tail += std::abs(a[k]) * std::pow(rho, k);
  tail += std::abs(a.back()) * std::pow(rho, a.size() - 1) * q / (1.0 - q);
  return tail;
}

TruncatedSeries tan_series(double u0, int degree) {
  const int ext = 4 * degree;
  std::vector<double> a(static_cast<std::size_t>(ext + 1), 0.0);
  a[0] = std::tan(u0);
  // tan' = 1 + tan^2
  for (int k = 0; k < ext; ++k) {
    double sq = 0.0;
    for (int j = 0; j <= k; ++j) sq += a[static_cast<std::size_t>(j)] * a[static_cast<std::size_t>(k - j)];
    a[static_cast<std::size_t>(k + 1)] = ((k == 0 ? 1.0 : 0.0) + sq) / (k + 1);
  }
  const double radius = 0.9 * (kPi / 2 - std::abs(u0));
  const double tail = extended_tail(a, degree, radius, 0.9);
  a.resize(static_cast<std::size_t>(degree + 1));
  return scalar_series(u0, a, radius, tail);
}

TruncatedSeries atan_series(double v0, int degree) {
  const int ext = 4 * degree;
  // 1 / (1 + (v0 + w)^2) = sum b_k w^k
  const double p0 = 1.0 + v0 * v0;
  const double p1 = 2.0 * v0;
  std::vector<double> b(static_cast<std::size_t>(ext), 0.0);
  for (int k = 0; k < ext; ++k) {
    const double prev1 = k >= 1 ? b[static_cast<std::size_t>(k - 1)] : 0.0;
    const double prev2 = k >= 2 ? b[static_cast<std::size_t>(k - 2)] : 0.0;
    b[static_cast<std::size_t>(k)] = ((k == 0 ? 1.0 : 0.0) - p1 * prev1 - prev2) / p0;
  }
  std::vector<double> a(static_cast<std::size_t>(ext + 1), 0.0);
  a[0] = std::atan(v0);
  for (int k = 0; k < ext; ++k) a[static_cast<std::size_t>(k + 1)] = b[static_cast<std::size_t>(k)] / (k + 1);
  const double radius = 0.9 * std::sqrt(p0);
  const double tail = extended_tail(a, degree, radius, 0.9);
  a.resize(static_cast<std::size_t>(degree + 1));
  return scalar_series(v0, a, radius, tail);
}

cplx horner(const std::vector<cplx>& c, cplx w) {
  cplx acc = c.back();
  for (auto it = c.rbegin() + 1; it != c.rend(); ++it) acc = acc * w + *it;
  return acc;
}

/// psi_ji applied off its rectangle: the component is chosen by the real part,
/// and the point must lie in the estimated convergence disk.
std::optional<cplx> apply_series(const std::vector<ExtendedTransition>& ts, int i, int j, cplx z) {
  if (i == j) return z;
  for (const auto& t : ts) {
    if (t.real.i != i || t.real.j != j || !t.real.overlap.contains(z.real())) continue;
    const double a = t.real.series.anchor()(0).real();
    if (std::abs(z - a) < t.radius_estimate) return t(z);
  }
  return std::nullopt;
}

double inverse_residual(const ExtendedTransition& t, const std::vector<ExtendedTransition>& all, int grid) {
  double worst = 0.0;
  for (cplx z : rectangle_grid(t, grid)) {
    const auto back = apply_series(all, t.real.j, t.real.i, t(z));
    if (!back) return kInf;
    worst = std::max(worst, std::abs(*back - z));
  }
  return worst;
}

}  // namespace

// ---------------------------------------------------------------------------

RealAtlas::RealAtlas(std::vector<Chart> charts, std::vector<Transition> transitions)
    : charts_(std::move(charts)), transitions_(std::move(transitions)) {
  if (charts_.empty()) throw StructuralError("an atlas needs at least one chart");
  for (std::size_t k = 0; k < charts_.size(); ++k) {
    const Chart& c = charts_[k];
    if (!(c.T.lo < c.T.hi) || !strictly_inside(c.U, c.T) || !strictly_inside(c.V, c.U)) {
      throw StructuralError("chart " + std::to_string(k) + " violates V' in U' in T' with positive margins");
    }
  }
  for (const auto& t : transitions_) {
    if (t.i < 0 || t.j < 0 || t.i >= chart_count() || t.j >= chart_count() || t.i == t.j) {
      throw StructuralError("transition " + pair_name(t) + " has bad chart indices");
    }
    const Interval& dom = charts_[static_cast<std::size_t>(t.i)].T;
    if (!(t.overlap.lo < t.overlap.hi) || t.overlap.lo < dom.lo || t.overlap.hi > dom.hi) {
      throw StructuralError("transition " + pair_name(t) + " overlap leaves T'_i");
    }
    const TruncatedSeries& s = t.series;
    if (s.space().kind() != CoeffKind::Scalar || s.dim() != 1) {
      throw StructuralError("transition " + pair_name(t) + " must be a scalar series in one variable");
    }
    if (s.anchor()(0).imag() != 0.0 || !t.overlap.contains(s.anchor()(0).real())) {
      throw StructuralError("transition " + pair_name(t) + " needs a real anchor inside its overlap");
    }
    for (const auto& c : s.coeffs()) {
      if (c(0, 0).imag() != 0.0) throw StructuralError("transition " + pair_name(t) + " has non-real coefficients");
    }
  }
}

double RealAtlas::real_inverse_residual(int grid) const {
  std::vector<ExtendedTransition> ext;
  for (const auto& t : transitions_) {
    ExtendedTransition e{t, 0.0, convergence_radius_estimate(t.series), {}};
    for (const auto& c : t.series.coeffs()) e.coeffs.push_back(c(0, 0));
    ext.push_back(std::move(e));
  }
  double worst = 0.0;
  for (const auto& e : ext) {
    for (int k = 0; k < grid; ++k) {
      const double x = e.real.overlap.lo + (k + 0.5) / grid * (e.real.overlap.hi - e.real.overlap.lo);
      const auto back = apply_series(ext, e.real.j, e.real.i, e(x));
      worst = std::max(worst, back ? std::abs(*back - x) : kInf);
    }
  }
  return worst;
}

json RealAtlas::to_json() const {
  json charts = json::array();
  for (const auto& c : charts_) {
    charts.push_back({{"interval", interval_json(c.T)}, {"U", interval_json(c.U)}, {"V", interval_json(c.V)}});
  }
  json ts = json::array();
  for (const auto& t : transitions_) {
    ts.push_back({{"i", t.i}, {"j", t.j}, {"overlap", interval_json(t.overlap)}, {"series", series_to_json(t.series)}});
  }
  return {{"charts", charts}, {"transitions", ts}};
}

RealAtlas RealAtlas::from_json(const json& j) {
  std::vector<Chart> charts;
  for (const auto& c : j.at("charts")) {
    charts.push_back({interval_from(c.at("interval")), interval_from(c.at("U")), interval_from(c.at("V"))});
  }
  std::vector<Transition> ts;
  for (const auto& t : j.at("transitions")) {
    ts.push_back({t.at("i").get<int>(), t.at("j").get<int>(), interval_from(t.at("overlap")),
                  series_from_json(t.at("series"))});
  }
  return RealAtlas(std::move(charts), std::move(ts));
}

RealAtlas circle_atlas(int charts, double half_width) {
  if (charts < 2) throw PreconditionError("a circle atlas needs at least two charts");
  if (!(half_width * charts > kPi) || !(half_width < kPi)) {
    throw PreconditionError("chart half width must lie in (pi / n, pi)");
  }
  std::vector<Chart> cs;
  std::vector<double> centers;
  for (int k = 0; k < charts; ++k) {
    const double c = 2.0 * kPi * k / charts;
    centers.push_back(c);
    cs.push_back({{c - half_width, c + half_width},
                  {c - 0.9 * half_width, c + 0.9 * half_width},
                  {c - 0.8 * half_width, c + 0.8 * half_width}});
  }
  std::vector<Transition> ts;
  for (int i = 0; i < charts; ++i) {
    for (int j = 0; j < charts; ++j) {
      if (i == j) continue;
      for (int m = -1; m <= 1; ++m) {
        const double shift = 2.0 * kPi * m;
        const double lo = std::max(centers[static_cast<std::size_t>(i)] - half_width,
                                   centers[static_cast<std::size_t>(j)] - half_width + shift);
        const double hi = std::min(centers[static_cast<std::size_t>(i)] + half_width,
                                   centers[static_cast<std::size_t>(j)] + half_width + shift);
        if (!(lo < hi)) continue;
        const double mid = 0.5 * (lo + hi);
        ts.push_back({i, j, {lo, hi}, scalar_series(mid, {mid - shift, 1.0}, half_width + 2.0, 0.0)});
      }
    }
  }
  return RealAtlas(std::move(cs), std::move(ts));
}

RealAtlas interval_atlas() {
  std::vector<Chart> cs{{{-1.0, 0.5}, {-0.9, 0.4}, {-0.8, 0.3}}, {{-0.5, 1.0}, {-0.4, 0.9}, {-0.3, 0.8}}};
  std::vector<Transition> ts{{0, 1, {-0.5, 0.5}, scalar_series(0.0, {0.0, 1.0}, 3.0, 0.0)},
                             {1, 0, {-0.5, 0.5}, scalar_series(0.0, {0.0, 1.0}, 3.0, 0.0)}};
  return RealAtlas(std::move(cs), std::move(ts));
}

RealAtlas tan_atlas(int degree) {
  std::vector<Chart> cs{{{-1.2, 0.6}, {-1.1, 0.5}, {-1.0, 0.4}},
                        {{std::tan(-0.4), std::tan(1.2)}, {std::tan(-0.3), std::tan(1.1)}, {std::tan(-0.2), std::tan(1.0)}}};
  const Interval o01{-0.4, 0.6};
  const Interval o10{std::tan(-0.4), std::tan(0.6)};
  std::vector<Transition> ts{{0, 1, o01, tan_series(o01.mid(), degree)},
                             {1, 0, o10, atan_series(o10.mid(), degree)}};
  return RealAtlas(std::move(cs), std::move(ts));
}

double convergence_radius_estimate(const TruncatedSeries& s) {
  if (s.tail_bound() == 0.0) return s.radius();
  const int n = s.degree_bound();
  double limsup = 0.0;
  for (int k = std::max(1, n / 2); k <= n; ++k) {
    const double a = std::abs(s.coeff(k)(0, 0));
    if (a > 0.0) limsup = std::max(limsup, std::pow(a, 1.0 / k));
  }
  return limsup == 0.0 ? s.radius() : std::min(s.radius(), 0.8 / limsup);
}

cplx ExtendedTransition::operator()(cplx z) const { return horner(coeffs, z - real.series.anchor()(0)); }

std::vector<cplx> rectangle_grid(const ExtendedTransition& t, int grid) {
  std::vector<cplx> out;
  const Interval& o = t.real.overlap;
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; b < grid; ++b) {
      out.emplace_back(o.lo + (a + 0.5) / grid * (o.hi - o.lo), t.height * (2.0 * (b + 0.5) / grid - 1.0));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

ComplexAtlas::ComplexAtlas(RealAtlas real, std::vector<ExtendedTransition> transitions, double requested_height)
    : real_(std::move(real)), transitions_(std::move(transitions)), requested_height_(requested_height) {
  constexpr int kGrid = 2000;
  std::vector<int> component_count(real_.charts().size() * real_.charts().size(), 0);
  for (const auto& t : transitions_) {
    const Interval& o = t.real.overlap;
    const Interval& vi = real_.charts()[static_cast<std::size_t>(t.real.i)].V;
    const Interval& vj = real_.charts()[static_cast<std::size_t>(t.real.j)].V;
    const double dx = (o.hi - o.lo) / kGrid;
    double lo = kInf;
    double hi = -kInf;
    for (int k = 0; k <= kGrid; ++k) {
      const double x = o.lo + k * dx;
      if (vi.contains(x) && vj.contains(t(x).real())) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    }
    MarginEntry m;
    m.i = t.real.i;
    m.j = t.real.j;
    m.component = component_count[static_cast<std::size_t>(t.real.i) * real_.charts().size() +
                                   static_cast<std::size_t>(t.real.j)]++;
    if (lo > hi) {
      m.vacuous = true;
      m.slack = kInf;
    } else {
      m.slack = std::min({lo - dx - o.lo, o.hi - (hi + dx), 0.5 * t.height});
    }
    margins_.push_back(m);
  }
}

bool ComplexAtlas::margins_positive() const {
  return std::all_of(margins_.begin(), margins_.end(), [](const MarginEntry& m) { return m.slack > 0.0; });
}

const ExtendedTransition* ComplexAtlas::find(int i, int j, cplx z) const {
  for (const auto& t : transitions_) {
    if (t.real.i == i && t.real.j == j && t.contains(z)) return &t;
  }
  return nullptr;
}

std::optional<cplx> ComplexAtlas::apply(int i, int j, cplx z) const {
  if (i == j) return z;
  const ExtendedTransition* t = find(i, j, z);
  if (!t) return std::nullopt;
  return (*t)(z);
}

ComplexAtlas ComplexAtlas::perturbed(int i, int j, double delta) const {
  std::vector<ExtendedTransition> ts = transitions_;
  for (auto& t : ts) {
    if (t.real.i == i && t.real.j == j) t.coeffs[0] += delta;
  }
  return ComplexAtlas(real_, std::move(ts), requested_height_);
}

json ComplexAtlas::to_json() const {
  json ts = json::array();
  for (const auto& t : transitions_) {
    json coeffs = json::array();
    for (cplx c : t.coeffs) coeffs.push_back({c.real(), c.imag()});
    ts.push_back({{"i", t.real.i},
                  {"j", t.real.j},
                  {"overlap", interval_json(t.real.overlap)},
                  {"height", t.height},
                  {"radius_estimate", t.radius_estimate},
                  {"anchor", t.real.series.anchor()(0).real()},
                  {"coeffs", coeffs}});
  }
  json margins = json::array();
  for (const auto& m : margins_) {
    margins.push_back({{"i", m.i},
                       {"j", m.j},
                       {"component", m.component},
                       {"slack", m.vacuous ? json(nullptr) : json(m.slack)},
                       {"vacuous", m.vacuous}});
  }
  return {{"real", real_.to_json()},
          {"requested_height", requested_height_},
          {"transitions", ts},
          {"margins", margins}};
}

ComplexAtlas extend_transitions(const RealAtlas& atlas, double height, const ExtendOptions& options) {
  if (!(height > 0.0)) throw PreconditionError("extension height must be positive");
  std::vector<ExtendedTransition> ext;
  for (const auto& t : atlas.transitions()) {
    ExtendedTransition e{t, height, convergence_radius_estimate(t.series), {}};
    for (const auto& c : t.series.coeffs()) e.coeffs.push_back(c(0, 0));
    const double a = t.series.anchor()(0).real();
    const double reach = std::max(a - t.overlap.lo, t.overlap.hi - a);
    if (!(reach < e.radius_estimate)) {
      std::ostringstream msg;
      msg << "extension failure for transition " << pair_name(t) << ": overlap reaches " << reach
          << " but the estimated convergence radius is " << e.radius_estimate;
      throw DomainError(msg.str());
    }
    int halvings = 0;
    while (!(std::hypot(reach, e.height) < e.radius_estimate) && halvings < options.max_halvings) {
      e.height *= 0.5;
      ++halvings;
    }
    ext.push_back(std::move(e));
  }
  for (auto& e : ext) {
    int halvings = 0;
    while (!(inverse_residual(e, ext, options.grid) <= options.tolerance)) {
      if (++halvings > options.max_halvings) {
        throw DomainError("extension failure for transition " + pair_name(e.real) +
                          ": mutual inverse check fails at every height");
      }
      e.height *= 0.5;
    }
  }
  return ComplexAtlas(atlas, std::move(ext), height);
}

// ---------------------------------------------------------------------------

CheckReport certify_cocycles(const ComplexAtlas& ca, const CocycleOptions& options) {
  CheckReport rep("cocycles", {{"grid", options.grid}, {"tolerance", options.tolerance}});
  const int n = ca.real().chart_count();
  auto witness = [](const char* kind, int i, int j, int k, cplx z, double r) {
    return json{{"kind", kind}, {"i", i}, {"j", j}, {"k", k}, {"z", {z.real(), z.imag()}}, {"residual", r}};
  };

  double identity_worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Interval& T = ca.real().charts()[static_cast<std::size_t>(i)].T;
    for (int a = 0; a < options.grid; ++a) {
      const cplx z(T.lo + (a + 0.5) / options.grid * (T.hi - T.lo), 0.5 * ca.requested_height());
      const double r = std::abs(*ca.apply(i, i, z) - z);
      identity_worst = std::max(identity_worst, r);
      rep.record(r - options.tolerance, witness("identity", i, i, i, z, r));
    }
  }

  json pairs = json::array();
  for (const auto& t : ca.transitions()) {
    double worst = 0.0;
    int points = 0;
    for (cplx z : rectangle_grid(t, options.grid)) {
      const auto back = ca.apply(t.real.j, t.real.i, t(z));
      if (!back) continue;
      const double r = std::abs(*back - z);
      worst = std::max(worst, r);
      ++points;
      rep.record(r - options.tolerance, witness("inverse", t.real.i, t.real.j, t.real.i, z, r));
    }
    pairs.push_back({{"i", t.real.i}, {"j", t.real.j}, {"points", points}, {"worst", worst}});
  }

  json triples = json::array();
  int triple_points = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        double worst = 0.0;
        int points = 0;
        for (const auto& t : ca.transitions()) {
          if (t.real.i != i || t.real.j != j) continue;
          for (cplx z : rectangle_grid(t, options.grid)) {
            const auto w = ca.apply(i, k, z);
            if (!w) continue;
            const auto via = ca.apply(k, j, *w);
            if (!via) continue;
            const double r = std::abs(*via - t(z));
            worst = std::max(worst, r);
            ++points;
            rep.record(r - options.tolerance, witness("cocycle", i, j, k, z, r));
          }
        }
        triple_points += points;
        if (points > 0) triples.push_back({{"i", i}, {"j", j}, {"k", k}, {"points", points}, {"worst", worst}});
      }
    }
  }
  rep.details = {{"identity_worst", identity_worst},
                 {"pairs", pairs},
                 {"triples", triples},
                 {"triple_check_vacuous", triple_points == 0},
                 {"margins_positive", ca.margins_positive()}};
  if (!ca.margins_positive()) rep.fail({{"kind", "margin"}, {"detail", "a margin-table entry is not positive"}});
  return rep;
}

CheckReport uniqueness_biholomorphism(const ComplexAtlas& ca1, const ComplexAtlas& ca2,
                                      const UniquenessOptions& options) {
  if (ca1.real().to_json() != ca2.real().to_json()) {
    throw PreconditionError("both complexifications must extend the same real atlas");
  }
  CheckReport rep("uniqueness_biholomorphism", {{"grid", options.grid},
                                                {"real_tolerance", options.real_tolerance},
                                                {"complex_tolerance", options.complex_tolerance}});
  const auto& t1 = ca1.transitions();
  const auto& t2 = ca2.transitions();
  json components = json::array();
  bool inconclusive = false;
  for (std::size_t c = 0; c < t1.size(); ++c) {
    const Interval& o = t1[c].real.overlap;
    double real_worst = 0.0;
    for (int a = 0; a < options.grid; ++a) {
      const double x = o.lo + (a + 0.5) / options.grid * (o.hi - o.lo);
      const double r = std::abs(t2[c](x) - t1[c](x));
      real_worst = std::max(real_worst, r);
      rep.record(r - options.real_tolerance, {{"kind", "real"}, {"component", c}, {"x", x}, {"residual", r}});
    }
    // h o g through chart j: z -> psi2_ij(z) in atlas 2, back by psi1_ji in atlas 1
    ExtendedTransition common = t1[c];
    common.height = std::min(t1[c].height, t2[c].height);
    double worst = kInf;
    int halvings = 0;
    for (; halvings <= options.max_halvings; ++halvings) {
      worst = 0.0;
      for (cplx z : rectangle_grid(common, options.grid)) {
        const auto back = apply_series(t1, common.real.j, common.real.i, t2[c](z));
        worst = std::max(worst, back ? std::abs(*back - z) : kInf);
      }
      if (worst <= options.complex_tolerance) break;
      common.height *= 0.5;
    }
    const bool ok = worst <= options.complex_tolerance;
    inconclusive = inconclusive || !ok;
    rep.record(ok ? worst - options.complex_tolerance : kInf,
               {{"kind", "complex"}, {"component", c}, {"residual", worst}, {"final_height", common.height}});
    components.push_back({{"i", common.real.i},
                          {"j", common.real.j},
                          {"real_worst", real_worst},
                          {"complex_worst", worst},
                          {"final_height", common.height},
                          {"halvings", std::min(halvings, options.max_halvings)},
                          {"status", ok ? "certified" : "inconclusive"}});
  }
  rep.details = {{"components", components}, {"status", inconclusive ? "inconclusive" : "certified"}};
  return rep;
}

CheckReport annulus_comparison(const ComplexAtlas& circle, const AnnulusOptions& options) {
  CheckReport rep("annulus_comparison", {{"grid", options.grid},
                                         {"tolerance", options.tolerance},
                                         {"real_tolerance", options.real_tolerance},
                                         {"inverse_tolerance", options.inverse_tolerance}});
  const auto& charts = circle.real().charts();
  for (const auto& c : charts) {
    if (!(c.T.half_width() < kPi)) throw PreconditionError("annulus comparison needs chart half widths below pi");
  }
  const cplx I(0.0, 1.0);
  auto g = [&](cplx z) { return std::exp(I * z); };
  auto h = [&](int chart, cplx w) {
    const double c = charts[static_cast<std::size_t>(chart)].T.mid();
    return c - I * std::log(w * std::exp(-I * c));
  };

  double transition_worst = 0.0;
  for (const auto& t : circle.transitions()) {
    for (cplx z : rectangle_grid(t, options.grid)) {
      const double r = std::abs(g(t(z)) - g(z));
      transition_worst = std::max(transition_worst, r);
      rep.record(r - options.tolerance, {{"kind", "well_defined"}, {"i", t.real.i}, {"j", t.real.j}, {"residual", r}});
    }
  }
  double real_worst = 0.0;
  double inverse_worst = 0.0;
  for (int i = 0; i < static_cast<int>(charts.size()); ++i) {
    const Interval& T = charts[static_cast<std::size_t>(i)].T;
    double height = circle.requested_height();
    for (const auto& t : circle.transitions()) {
      if (t.real.i == i) height = std::min(height, t.height);
    }
    for (int a = 0; a < options.grid; ++a) {
      const double x = T.lo + (a + 0.5) / options.grid * (T.hi - T.lo);
      const cplx w = g(x);
      const double r = std::max(std::abs(std::abs(w) - 1.0), std::abs(h(i, w) - x));
      real_worst = std::max(real_worst, r);
      rep.record(r - options.real_tolerance, {{"kind", "real"}, {"chart", i}, {"x", x}, {"residual", r}});
      for (int b = 0; b < options.grid; ++b) {
        const cplx z(x, height * (2.0 * (b + 0.5) / options.grid - 1.0));
        const double e = std::abs(h(i, g(z)) - z);
        inverse_worst = std::max(inverse_worst, e);
        rep.record(e - options.inverse_tolerance, {{"kind", "inverse"}, {"chart", i}, {"residual", e}});
      }
    }
  }
  rep.details = {{"well_defined_worst", transition_worst},
                 {"real_worst", real_worst},
                 {"inverse_worst", inverse_worst}};
  return rep;
}

}  // namespace germlie
