#include "germlie/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/LU>

#include "germlie/errors.hpp"

namespace germlie {

namespace {

constexpr double kRadiusSlack = 1e-12;

bool is_zero(const Coeff& c) {
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (c.data()[i] != cplx(0.0, 0.0)) return false;
  }
  return true;
}

Coeff mul_coeff(const Coeff& a, const Coeff& b) {
  if (a.size() == 1 && b.size() != 1) return a(0, 0) * b;
  if (b.size() == 1 && a.size() != 1) return a * b(0, 0);
  return a * b;
}

CoefficientSpace product_space(const CoefficientSpace& a, const CoefficientSpace& b) {
  if (a == b && a.is_algebra()) return a;
  if (a.kind() == CoeffKind::Scalar) return b;
  if (b.kind() == CoeffKind::Scalar) return a;
  throw StructuralError("cannot multiply series with coefficient spaces " + describe(a) +
                        " and " + describe(b));
}

double product_constant(const CoefficientSpace& a, const CoefficientSpace& b) {
  return (a.kind() == CoeffKind::Matrix && b.kind() == CoeffKind::Matrix) ? 0.5 : 1.0;
}

void require_same_anchor(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (!same_anchor(a, b)) throw StructuralError("series anchors differ");
  if (a.degree_bound() != b.degree_bound()) {
    throw StructuralError("series degree bounds differ");
  }
}

std::vector<int> degrees_of(int dim, int count) {
  std::vector<int> deg(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) deg[static_cast<std::size_t>(i)] = total_degree(multi_index_at(dim, i));
  return deg;
}

// Binomial coefficients up to n.
std::vector<std::vector<double>> binomials(int n) {
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    c[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i + 1), 1.0);
    for (int j = 1; j < i; ++j) {
      c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
          c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
    }
  }
  return c;
}

TruncatedSeries identity_like(const TruncatedSeries& a) {
  return TruncatedSeries::constant(a.space(), a.anchor(), a.degree_bound(), a.radius(),
                                   a.space().identity());
}

}  // namespace

int term_count(int dim, int degree) {
  if (degree < 0) return 0;
  if (dim == 1) return degree + 1;
  return (degree + 1) * (degree + 2) / 2;
}

MultiIndex multi_index_at(int dim, int flat) {
  if (dim == 1) return {flat, 0};
  int n = 0;
  while ((n + 1) * (n + 2) / 2 <= flat) ++n;
  const int offset = flat - n * (n + 1) / 2;
  return {n - offset, offset};
}

int flat_index(int dim, const MultiIndex& k) {
  if (dim == 1) return k[0];
  const int n = k[0] + k[1];
  return n * (n + 1) / 2 + k[1];
}

// ---------------------------------------------------------------------------

TruncatedSeries::TruncatedSeries(CoefficientSpace space, Point anchor, int degree_bound,
                                 double radius)
    : TruncatedSeries(space, std::move(anchor), degree_bound, radius, {}, 0.0, 0.0) {}

TruncatedSeries::TruncatedSeries(CoefficientSpace space, Point anchor, int degree_bound,
                                 double radius, std::vector<Coeff> coeffs, double high_order_tail,
                                 double flat_tail)
    : space_(space),
      anchor_(std::move(anchor)),
      degree_(degree_bound),
      radius_(radius),
      coeffs_(std::move(coeffs)),
      high_tail_(high_order_tail),
      flat_tail_(flat_tail) {
  if (anchor_.size() < 1 || anchor_.size() > 2) {
    throw StructuralError("series anchors must lie in C^1 or C^2");
  }
  if (degree_ < 0) throw StructuralError("degree bound must be nonnegative");
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw DomainError("series radius must be positive and finite");
  }
  if (!(high_tail_ >= 0.0) || !(flat_tail_ >= 0.0) || !std::isfinite(high_tail_) ||
      !std::isfinite(flat_tail_)) {
    throw DomainError("tail bounds must be finite and nonnegative");
  }
  const auto count = static_cast<std::size_t>(term_count(dim(), degree_));
  if (coeffs_.size() > count) {
    throw StructuralError("more coefficients than multi-indices with |k| <= degree bound");
  }
  for (const auto& c : coeffs_) {
    if (!space_.accepts(c)) {
      throw StructuralError("coefficient shape does not match space " + describe(space_));
    }
  }
  coeffs_.resize(count, space_.zero());
}

TruncatedSeries TruncatedSeries::constant(CoefficientSpace space, Point anchor, int degree_bound,
                                          double radius, const Coeff& value) {
  return TruncatedSeries(space, std::move(anchor), degree_bound, radius, {value});
}

Coeff TruncatedSeries::eval(const Point& x) const {
  if (x.size() != anchor_.size()) throw StructuralError("evaluation point has wrong dimension");
  if (dim() == 1) return eval(x(0));
  const cplx u = x(0) - anchor_(0);
  const cplx v = x(1) - anchor_(1);
  Coeff acc = space_.zero();
  // Horner in the total degree: sum_n sum_{j} c_{(n-j, j)} u^{n-j} v^j.
  for (int n = degree_; n >= 0; --n) {
    Coeff layer = space_.zero();
    cplx upow = 1.0;
    std::vector<cplx> upows(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i) {
      upows[static_cast<std::size_t>(i)] = upow;
      upow *= u;
    }
    cplx vpow = 1.0;
    for (int j = 0; j <= n; ++j) {
      layer += coeffs_[static_cast<std::size_t>(n * (n + 1) / 2 + j)] *
               (upows[static_cast<std::size_t>(n - j)] * vpow);
      vpow *= v;
    }
    acc += layer;
  }
  return acc;
}

Coeff TruncatedSeries::eval(cplx z) const {
  if (dim() != 1) throw StructuralError("scalar evaluation requires d = 1");
  const cplx w = z - anchor_(0);
  Coeff acc = coeffs_.back();
  for (int k = degree_ - 1; k >= 0; --k) {
    acc = acc * w + coeffs_[static_cast<std::size_t>(k)];
  }
  return acc;
}

double TruncatedSeries::polynomial_majorant(double rho) const {
  double total = 0.0;
  if (dim() == 1) {
    for (int k = degree_; k >= 0; --k) total = total * rho + space_.norm(coeffs_[static_cast<std::size_t>(k)]);
    return total;
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const int deg = total_degree(multi_index_at(2, static_cast<int>(i)));
    total += space_.norm(coeffs_[i]) * std::pow(rho, deg);
  }
  return total;
}

double TruncatedSeries::tail_at(double rho) const {
  const double ratio = std::min(1.0, rho / radius_);
  return high_tail_ * std::pow(ratio, degree_ + 1) + flat_tail_;
}

TruncatedSeries TruncatedSeries::restricted(double rho) const {
  if (!(rho > 0.0)) throw DomainError("restriction radius must be positive");
  if (rho > radius_ * (1.0 + kRadiusSlack)) {
    throw DomainError("cannot restrict to a larger radius");
  }
  if (rho >= radius_) return *this;
  TruncatedSeries out = *this;
  out.radius_ = rho;
  out.high_tail_ = high_tail_ * std::pow(rho / radius_, degree_ + 1);
  return out;
}

TruncatedSeries TruncatedSeries::with_tails(double high_order_tail, double flat_tail) const {
  return TruncatedSeries(space_, anchor_, degree_, radius_, coeffs_, high_order_tail, flat_tail);
}

bool TruncatedSeries::is_zero_polynomial() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Coeff& c) { return is_zero(c); });
}

// ---------------------------------------------------------------------------

bool same_anchor(const TruncatedSeries& a, const TruncatedSeries& b) {
  return a.anchor().size() == b.anchor().size() && a.anchor() == b.anchor();
}

TruncatedSeries reexpand(const TruncatedSeries& a, const Point& new_anchor, double new_radius) {
  if (new_anchor.size() != a.anchor().size()) {
    throw StructuralError("re-expansion anchor has wrong dimension");
  }
  const Point shift = new_anchor - a.anchor();
  const double reach = point_norm(shift) + new_radius;
  if (reach > a.radius() * (1.0 + kRadiusSlack)) {
    throw DomainError("re-expansion ball is not contained in the validity ball");
  }
  const int dim = a.dim();
  const int n = a.degree_bound();
  const auto binom = binomials(n);
  std::vector<Coeff> out(static_cast<std::size_t>(term_count(dim, n)), a.space().zero());
  if (dim == 1) {
    const cplx d = shift(0);
    for (int k = 0; k <= n; ++k) {
      const Coeff& c = a.coeff(k);
      if (is_zero(c)) continue;
      cplx dpow = 1.0;
      for (int j = k; j >= 0; --j) {
        out[static_cast<std::size_t>(j)] += c * (binom[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] * dpow);
        dpow *= d;
      }
    }
  } else {
    const cplx d1 = shift(0);
    const cplx d2 = shift(1);
    for (int i = 0; i < term_count(2, n); ++i) {
      const Coeff& c = a.coeff(i);
      if (is_zero(c)) continue;
      const MultiIndex k = multi_index_at(2, i);
      for (int j1 = 0; j1 <= k[0]; ++j1) {
        for (int j2 = 0; j2 <= k[1]; ++j2) {
          const double b = binom[static_cast<std::size_t>(k[0])][static_cast<std::size_t>(j1)] *
                           binom[static_cast<std::size_t>(k[1])][static_cast<std::size_t>(j2)];
          const cplx w = b * std::pow(d1, k[0] - j1) * std::pow(d2, k[1] - j2);
          out[static_cast<std::size_t>(flat_index(2, {j1, j2}))] += c * w;
        }
      }
    }
  }
  const double carried =
      a.high_order_tail() * std::pow(std::min(1.0, reach / a.radius()), n + 1) + a.flat_tail();
  return TruncatedSeries(a.space(), new_anchor, n, new_radius, std::move(out), 0.0, carried);
}

TruncatedSeries series_linear(const TruncatedSeries& a, const TruncatedSeries& b, cplx alpha,
                              cplx beta) {
  require_same_anchor(a, b);
  if (!(a.space() == b.space())) throw StructuralError("coefficient spaces differ");
  const double rho = std::min(a.radius(), b.radius());
  const TruncatedSeries ar = a.restricted(rho);
  const TruncatedSeries br = b.restricted(rho);
  std::vector<Coeff> out(ar.coeffs().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = alpha * ar.coeffs()[i] + beta * br.coeffs()[i];
  }
  const double ha = std::abs(alpha);
  const double hb = std::abs(beta);
  return TruncatedSeries(a.space(), a.anchor(), a.degree_bound(), rho, std::move(out),
                         ha * ar.high_order_tail() + hb * br.high_order_tail(),
                         ha * ar.flat_tail() + hb * br.flat_tail());
}

TruncatedSeries series_scale(const TruncatedSeries& a, cplx alpha) {
  std::vector<Coeff> out(a.coeffs().begin(), a.coeffs().end());
  for (auto& c : out) c *= alpha;
  const double h = std::abs(alpha);
  return TruncatedSeries(a.space(), a.anchor(), a.degree_bound(), a.radius(), std::move(out),
                         h * a.high_order_tail(), h * a.flat_tail());
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_anchor(a, b);
  const CoefficientSpace space = product_space(a.space(), b.space());
  const double cst = product_constant(a.space(), b.space());
  const double rho = std::min(a.radius(), b.radius());
  const TruncatedSeries ar = a.restricted(rho);
  const TruncatedSeries br = b.restricted(rho);
  const int dim = a.dim();
  const int n = a.degree_bound();
  const int count = term_count(dim, n);
  const int wide = term_count(dim, 2 * n);

  std::vector<Coeff> out(static_cast<std::size_t>(count), space.zero());
  std::vector<Coeff> overflow(static_cast<std::size_t>(wide - count), space.zero());
  std::vector<int> nz_a;
  std::vector<int> nz_b;
  for (int i = 0; i < count; ++i) {
    if (!is_zero(ar.coeff(i))) nz_a.push_back(i);
    if (!is_zero(br.coeff(i))) nz_b.push_back(i);
  }
  if (dim == 1) {
    for (int i : nz_a) {
      for (int j : nz_b) {
        const int k = i + j;
        const Coeff p = mul_coeff(ar.coeff(i), br.coeff(j));
        if (k <= n) {
          out[static_cast<std::size_t>(k)] += p;
        } else {
          overflow[static_cast<std::size_t>(k - count)] += p;
        }
      }
    }
  } else {
    for (int i : nz_a) {
      const MultiIndex ki = multi_index_at(2, i);
      for (int j : nz_b) {
        const MultiIndex kj = multi_index_at(2, j);
        const MultiIndex k{ki[0] + kj[0], ki[1] + kj[1]};
        const int flat = flat_index(2, k);
        const Coeff p = mul_coeff(ar.coeff(i), br.coeff(j));
        if (flat < count) {
          out[static_cast<std::size_t>(flat)] += p;
        } else {
          overflow[static_cast<std::size_t>(flat - count)] += p;
        }
      }
    }
  }
  double overflow_majorant = 0.0;
  const auto deg = degrees_of(dim, wide);
  for (std::size_t i = 0; i < overflow.size(); ++i) {
    if (is_zero(overflow[i])) continue;
    overflow_majorant += space.norm(overflow[i]) * std::pow(rho, deg[static_cast<std::size_t>(count) + i]);
  }

  const double ma = ar.polynomial_majorant(rho);
  const double mb = br.polynomial_majorant(rho);
  const double ta = ar.high_order_tail();
  const double tb = br.high_order_tail();
  const double fa = ar.flat_tail();
  const double fb = br.flat_tail();
  const double high = overflow_majorant + cst * (ma * tb + ta * mb + ta * tb + ta * fb + fa * tb);
  const double flat = cst * (ma * fb + fa * mb + fa * fb);
  return TruncatedSeries(space, a.anchor(), n, rho, std::move(out), high, flat);
}

TruncatedSeries series_bracket(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.space().kind() != CoeffKind::Matrix || !(a.space() == b.space())) {
    throw StructuralError("brackets are defined for matrix-valued series of equal size");
  }
  return series_sub(series_mul(a, b), series_mul(b, a));
}

TruncatedSeries series_left_mul(const Coeff& c, const TruncatedSeries& a) {
  const TruncatedSeries cs =
      TruncatedSeries::constant(c.size() == 1 ? CoefficientSpace::scalar() : a.space(), a.anchor(),
                                a.degree_bound(), a.radius(), c);
  return series_mul(cs, a);
}

TruncatedSeries series_right_mul(const TruncatedSeries& a, const Coeff& c) {
  const TruncatedSeries cs =
      TruncatedSeries::constant(c.size() == 1 ? CoefficientSpace::scalar() : a.space(), a.anchor(),
                                a.degree_bound(), a.radius(), c);
  return series_mul(a, cs);
}

// ---------------------------------------------------------------------------

namespace {

struct ConstantInverse {
  bool ok = false;
  Coeff value;
};

ConstantInverse invert_constant(const CoefficientSpace& space, const Coeff& a0) {
  ConstantInverse out;
  if (space.kind() == CoeffKind::Scalar) {
    const cplx v = a0(0, 0);
    if (std::abs(v) <= 1e-300) return out;
    out.value = Coeff::Constant(1, 1, 1.0 / v);
    out.ok = true;
    return out;
  }
  Eigen::FullPivLU<Coeff> lu(a0);
  if (!lu.isInvertible()) return out;
  out.value = lu.inverse();
  out.ok = std::isfinite(out.value.norm());
  return out;
}

TruncatedSeries without_constant(const TruncatedSeries& a) {
  std::vector<Coeff> c(a.coeffs().begin(), a.coeffs().end());
  c[0] = a.space().zero();
  return TruncatedSeries(a.space(), a.anchor(), a.degree_bound(), a.radius(), std::move(c),
                         a.high_order_tail(), a.flat_tail());
}

NeumannCertificate certificate_at(const TruncatedSeries& a, const ConstantInverse& inv) {
  NeumannCertificate cert;
  cert.constant_invertible = inv.ok;
  if (!inv.ok) return cert;
  const TruncatedSeries var = without_constant(a);
  cert.inverse_constant_norm = a.space().norm(inv.value);
  cert.variable_majorant = majorant_norm(var);
  cert.budget = cert.inverse_constant_norm * cert.variable_majorant;
  const TruncatedSeries u = series_left_mul(inv.value, var);
  cert.ratio = a.space().product_constant() * majorant_norm(u);
  return cert;
}

}  // namespace

NeumannCertificate neumann_certificate(const TruncatedSeries& a) {
  if (!a.space().is_algebra()) throw StructuralError("inversion needs a scalar or matrix space");
  return certificate_at(a, invert_constant(a.space(), a.coeff(0)));
}

TruncatedSeries series_invert(const TruncatedSeries& a, const InvertOptions& options) {
  if (!a.space().is_algebra()) throw StructuralError("inversion needs a scalar or matrix space");
  const ConstantInverse inv = invert_constant(a.space(), a.coeff(0));
  if (!inv.ok) throw DomainError("constant coefficient is singular");

  TruncatedSeries work = a;
  NeumannCertificate cert = certificate_at(work, inv);
  if (!cert.ok()) {
    const auto fails_at = [&](double rho) { return !certificate_at(a.restricted(rho), inv).ok(); };
    const auto above_target = [&](double rho) {
      const NeumannCertificate c = certificate_at(a.restricted(rho), inv);
      return std::max(c.budget, c.ratio) > options.shrink_target;
    };
    // Largest radius with budget < 1, reported on failure.
    double lo = 0.0;
    double hi = a.radius();
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= 0.0) break;
      (fails_at(mid) ? hi : lo) = mid;
    }
    const double required = lo;
    const double floor_radius = std::max(options.min_radius, 0.0);
    if (!options.allow_shrink || required <= floor_radius || required <= 0.0) {
      std::ostringstream msg;
      msg << "Neumann budget unattainable: needs radius below " << required
          << " (minimum allowed " << floor_radius << ", current " << a.radius() << ")";
      throw DomainError(msg.str());
    }
    lo = 0.0;
    hi = required;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (above_target(mid) ? hi : lo) = mid;
    }
    const double target_radius = std::max(lo, floor_radius);
    work = a.restricted(target_radius);
    cert = certificate_at(work, inv);
    if (!cert.ok()) {
      throw DomainError("Neumann budget unattainable after shrinking");
    }
  }

  // s = (sum_{j<=N} (-u)^j) a_0^{-1} with u = a_0^{-1}(a - a_0), by Horner.
  const TruncatedSeries minus_u = series_scale(series_left_mul(inv.value, without_constant(work)), -1.0);
  const TruncatedSeries one = identity_like(work);
  TruncatedSeries acc = one;
  const int n = work.degree_bound();
  for (int j = 0; j < n; ++j) acc = series_add(one, series_mul(minus_u, acc));
  TruncatedSeries result = series_right_mul(acc, inv.value);
  const double q = cert.ratio;
  const double neumann_rest = cert.inverse_constant_norm * std::pow(q, n + 1) / (1.0 - q);
  return result.with_tails(result.high_order_tail() + neumann_rest, result.flat_tail());
}

TruncatedSeries series_compose_entire(const TruncatedSeries& a, EntireMap which,
                                      const ComposeOptions& options) {
  if (!a.space().is_algebra()) throw StructuralError("exp/log need a scalar or matrix space");
  const TruncatedSeries one = identity_like(a);
  if (which == EntireMap::Exp) {
    const double m = majorant_norm(a);
    if (m == 0.0) return one;
    // remainder after J terms: m^{J+1}/(J+1)! / (1 - m/(J+2))
    int terms = 0;
    double rest = 0.0;
    double power_over_fact = 1.0;  // m^J / J!
    for (int j = 1; j <= options.max_terms; ++j) {
      power_over_fact *= m / j;
      const double next = power_over_fact * m / (j + 1);
      if (m < j + 2) {
        rest = next / (1.0 - m / (j + 2));
        if (rest <= options.rel_tol * m) {
          terms = j;
          break;
        }
      }
    }
    if (terms == 0) throw DomainError("exp truncation order exceeds max_terms");
    TruncatedSeries acc = one;
    for (int j = terms; j >= 1; --j) {
      acc = series_linear(one, series_mul(a, acc), 1.0, 1.0 / j);
    }
    return acc.with_tails(acc.high_order_tail(), acc.flat_tail() + rest);
  }

  const TruncatedSeries w = series_sub(a, one);
  const double m = majorant_norm(w);
  if (!(m < 1.0)) {
    std::ostringstream msg;
    msg << "log branch budget violated: ||a_0 - id|| + majorant(a - a_0) = " << m << " >= 1";
    throw DomainError(msg.str());
  }
  if (m == 0.0) return TruncatedSeries(a.space(), a.anchor(), a.degree_bound(), a.radius());
  const double c = a.space().product_constant();
  const double q = c * m;
  int terms = 0;
  double rest = 0.0;
  for (int j = 1; j <= options.max_terms; ++j) {
    rest = std::pow(q, j + 1) / (c * (j + 1) * (1.0 - q));
    if (rest <= options.rel_tol * m) {
      terms = j;
      break;
    }
  }
  if (terms == 0) throw DomainError("log truncation order exceeds max_terms");
  TruncatedSeries h = series_scale(one, 1.0 / terms);
  for (int j = terms - 1; j >= 1; --j) {
    h = series_linear(one, series_mul(w, h), 1.0 / j, -1.0);
  }
  TruncatedSeries out = series_mul(w, h);
  return out.with_tails(out.high_order_tail(), out.flat_tail() + rest);
}

// ---------------------------------------------------------------------------

double majorant_norm(const TruncatedSeries& a, double rho) {
  if (!(rho >= 0.0)) throw DomainError("majorant radius must be nonnegative");
  if (rho > a.radius() * (1.0 + kRadiusSlack)) {
    throw DomainError("majorant radius exceeds the validity radius");
  }
  return a.polynomial_majorant(rho) + a.tail_at(rho);
}

double sample_sup(const TruncatedSeries& a, double rho, int n) {
  if (rho > a.radius() * (1.0 + kRadiusSlack)) {
    throw DomainError("sampling radius exceeds the validity radius");
  }
  if (n < 1) throw DomainError("sample count must be positive");
  double best = 0.0;
  if (a.dim() == 1) {
    for (int j = 0; j < n; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / n;
      const cplx z = a.anchor()(0) + std::polar(rho, theta);
      best = std::max(best, a.space().norm(a.eval(z)));
    }
  } else {
    std::mt19937_64 rng(0x5eedf00dULL);
    std::normal_distribution<double> g;
    for (int j = 0; j < n; ++j) {
      Point x(2);
      if (j < 2) {
        x(0) = j == 0 ? rho : 0.0;
        x(1) = j == 0 ? 0.0 : rho;
      } else {
        x(0) = cplx(g(rng), g(rng));
        x(1) = cplx(g(rng), g(rng));
        x *= rho / x.norm();
      }
      best = std::max(best, a.space().norm(a.eval(Point(a.anchor() + x))));
    }
  }
  return std::max(0.0, best - a.tail_at(rho));
}

double coefficient_distance(const TruncatedSeries& a, const TruncatedSeries& b, double rho) {
  require_same_anchor(a, b);
  double worst = 0.0;
  for (int i = 0; i < static_cast<int>(a.coeffs().size()); ++i) {
    const int deg = total_degree(multi_index_at(a.dim(), i));
    worst = std::max(worst, a.space().norm(a.coeff(i) - b.coeff(i)) * std::pow(rho, deg));
  }
  return worst;
}

}  // namespace germlie
