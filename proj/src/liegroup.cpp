#include "germlie/liegroup.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include <Eigen/LU>
#include <boost/multiprecision/cpp_int.hpp>

#include "germlie/errors.hpp"

namespace germlie {

namespace {

using Rational = boost::multiprecision::cpp_rational;

// Words over {x = 0, y = 1}: bit i holds the i-th letter.
struct Word {
  int length = 0;
  std::uint32_t bits = 0;
  friend bool operator<(const Word& a, const Word& b) {
    return a.length != b.length ? a.length < b.length : a.bits < b.bits;
  }
};

using FreePoly = std::map<Word, Rational>;

Word concat(const Word& a, const Word& b) {
  return {a.length + b.length, a.bits | (b.bits << a.length)};
}

FreePoly multiply(const FreePoly& a, const FreePoly& b, int order) {
  FreePoly out;
  for (const auto& [wa, ca] : a) {
    for (const auto& [wb, cb] : b) {
      if (wa.length + wb.length > order) continue;
      out[concat(wa, wb)] += ca * cb;
    }
  }
  return out;
}

// log(e^x e^y) in the free associative algebra, truncated at `order`.
FreePoly log_of_exp_product(int order) {
  std::vector<Rational> inv_fact(static_cast<std::size_t>(order + 1));
  inv_fact[0] = 1;
  for (int i = 1; i <= order; ++i) inv_fact[static_cast<std::size_t>(i)] = inv_fact[static_cast<std::size_t>(i - 1)] / i;

  FreePoly e;  // e^x e^y - 1
  for (int p = 0; p <= order; ++p) {
    for (int q = 0; p + q <= order; ++q) {
      if (p + q == 0) continue;
      Word w{p + q, 0};
      for (int i = p; i < p + q; ++i) w.bits |= (1u << i);
      e[w] = inv_fact[static_cast<std::size_t>(p)] * inv_fact[static_cast<std::size_t>(q)];
    }
  }
  FreePoly result;
  FreePoly power = e;
  for (int k = 1; k <= order; ++k) {
    const Rational weight = Rational(k % 2 == 1 ? 1 : -1) / k;
    for (const auto& [w, c] : power) result[w] += weight * c;
    if (k < order) power = multiply(power, e, order);
  }
  return result;
}

std::vector<double> log_two_minus_exp_coefficients(int count) {
  // -log(2 - e^s) = sum_k (e^s - 1)^k / k
  std::vector<double> g(static_cast<std::size_t>(count + 1), 0.0);
  double fact = 1.0;
  for (int j = 1; j <= count; ++j) {
    fact *= j;
    g[static_cast<std::size_t>(j)] = 1.0 / fact;
  }
  std::vector<double> out(static_cast<std::size_t>(count + 1), 0.0);
  std::vector<double> power = g;
  for (int k = 1; k <= count; ++k) {
    for (int n = 0; n <= count; ++n) out[static_cast<std::size_t>(n)] += power[static_cast<std::size_t>(n)] / k;
    std::vector<double> next(static_cast<std::size_t>(count + 1), 0.0);
    for (int a = 1; a <= count; ++a) {
      if (power[static_cast<std::size_t>(a)] == 0.0) continue;
      for (int b = 1; a + b <= count; ++b) {
        next[static_cast<std::size_t>(a + b)] += power[static_cast<std::size_t>(a)] * g[static_cast<std::size_t>(b)];
      }
    }
    power = std::move(next);
  }
  return out;
}

constexpr int kMajorantTerms = 64;

}  // namespace

DynkinTable::DynkinTable(int order) : order_(order) {
  const FreePoly log_series = log_of_exp_product(order);
  std::map<Word, int> node_of;

  // Node for the suffix of `w` starting at position `start`.
  auto node_for = [&](auto&& self, const Word& w, int start) -> int {
    const Word suffix{w.length - start, w.bits >> start};
    if (auto it = node_of.find(suffix); it != node_of.end()) return it->second;
    Node n;
    n.letter = static_cast<int>(suffix.bits & 1u);
    n.child = suffix.length == 1 ? -1 : self(self, w, start + 1);
    nodes_.push_back(n);
    const int id = static_cast<int>(nodes_.size()) - 1;
    node_of.emplace(suffix, id);
    return id;
  };

  for (const auto& [w, c] : log_series) {
    if (c == 0) continue;
    if (w.length >= 2) {
      const unsigned last = (w.bits >> (w.length - 1)) & 1u;
      const unsigned before = (w.bits >> (w.length - 2)) & 1u;
      if (last == before) continue;  // innermost bracket [a, a] = 0
    }
    const Rational weight = c / w.length;
    terms_.push_back({node_for(node_for, w, 0), static_cast<double>(weight), w.length});
  }
  majorant_ = log_two_minus_exp_coefficients(kMajorantTerms);
}

const DynkinTable& DynkinTable::get(int order) {
  if (order < 1 || order > kMaxOrder) {
    throw PreconditionError("BCH order must lie in [1, " + std::to_string(kMaxOrder) + "]");
  }
  static std::array<std::unique_ptr<DynkinTable>, kMaxOrder + 1> tables;
  static std::array<std::once_flag, kMaxOrder + 1> flags;
  const auto idx = static_cast<std::size_t>(order);
  std::call_once(flags[idx], [&] { tables[idx].reset(new DynkinTable(order)); });
  return *tables[idx];
}

double DynkinTable::remainder(double s) const {
  constexpr double ln2 = MatrixLieBackend::kLn2;
  if (!(s >= 0.0)) return 0.0;
  if (s >= ln2) return std::numeric_limits<double>::infinity();
  const double ratio = s / ln2;
  if (ratio <= 0.6) {
    double total = 0.0;
    for (int n = kMajorantTerms; n > order_; --n) total = (total + majorant_[static_cast<std::size_t>(n)]) * s;
    total *= std::pow(s, order_);
    // terms beyond the table decay at least geometrically with ratio s / ln 2
    const double last = majorant_[kMajorantTerms] * std::pow(s, kMajorantTerms);
    return total + last * ratio / (1.0 - ratio);
  }
  double head = 0.0;
  for (int n = order_; n >= 1; --n) head = (head + majorant_[static_cast<std::size_t>(n)]) * s;
  return std::max(0.0, -std::log(2.0 - std::exp(s)) - head);
}

// ---------------------------------------------------------------------------

Mat exp_mat(const Mat& x) {
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;
  const auto n = x.rows();
  const Mat id = Mat::Identity(n, n);
  if ((x * x).isZero(0.0)) return id + x;  // x = 0 and square-zero nilpotents
  const double norm1 = x.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const Mat a = x / std::ldexp(1.0, squarings);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  const Mat u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                     b[3] * a2 + b[1] * id);
  const Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
                b[0] * id;
  Mat r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

namespace {

Mat sqrt_denman_beavers(const Mat& a) {
  Mat y = a;
  Mat z = Mat::Identity(a.rows(), a.cols());
  for (int it = 0; it < 60; ++it) {
    const Mat y_inv = y.inverse();
    const Mat z_inv = z.inverse();
    const Mat y_next = 0.5 * (y + z_inv);
    z = 0.5 * (z + y_inv);
    const double change = (y_next - y).norm();
    y = y_next;
    if (change <= 1e-16 * y.norm()) break;
  }
  return y;
}

}  // namespace

Mat log_mat(const Mat& g) {
  const auto n = g.rows();
  const Mat id = Mat::Identity(n, n);
  const double dist = operator_norm(g - id);
  if (!(dist < 1.0)) {
    std::ostringstream msg;
    msg << "matrix log outside the principal branch budget: ||g - id|| = " << dist;
    throw DomainError(msg.str());
  }
  Mat a = g;
  int roots = 0;
  while ((a - id).cwiseAbs().colwise().sum().maxCoeff() > 0.05 && roots < 40) {
    a = sqrt_denman_beavers(a);
    ++roots;
  }
  // log a = 2 atanh(z), z = (a - id)(a + id)^{-1}
  const Mat z = (a + id).transpose().partialPivLu().solve((a - id).transpose()).transpose();
  const Mat z2 = z * z;
  Mat term = z;
  Mat sum = z;
  for (int k = 3; k < 80; k += 2) {
    term = term * z2;
    const Mat contrib = term / static_cast<double>(k);
    sum += contrib;
    if (contrib.norm() <= 1e-18 * sum.norm()) break;
  }
  return std::ldexp(2.0, roots) * sum;
}

Mat ad_conj(const Mat& g, const Mat& x) {
  // x g^{-1} = (g^{-T} x^T)^T
  const Mat x_ginv = g.transpose().partialPivLu().solve(x.transpose()).transpose();
  return g * x_ginv;
}

// ---------------------------------------------------------------------------

MatrixLieBackend::MatrixLieBackend(int dim, int bch_order, double bch_radius)
    : dim_(dim), bch_order_(bch_order), bch_radius_(bch_radius), table_(&DynkinTable::get(bch_order)) {
  if (dim < 1 || dim > kMaxCoeffDim) throw PreconditionError("matrix size must lie in [1, 4]");
  if (!(bch_radius > 0.0) || bch_radius > kLn2) {
    throw PreconditionError("bch_radius must lie in (0, ln 2]");
  }
}

BchValue MatrixLieBackend::bch_with_remainder(const Mat& x, const Mat& y) const {
  const double s = norm(x) + norm(y);
  if (!(s < bch_radius_)) {
    std::ostringstream msg;
    msg << "BCH budget exceeded: ||x|| + ||y|| = " << s << " >= bch_radius = " << bch_radius_;
    throw DomainError(msg.str());
  }
  struct Ops {
    Mat bracket(const Mat& a, const Mat& b) const { return a * b - b * a; }
    Mat add(const Mat& acc, const Mat& v, double c) const { return acc + c * v; }
    Mat zero_like(const Mat& a) const { return Mat::Zero(a.rows(), a.cols()); }
  };
  return {table_->evaluate(x, y, Ops{}), table_->remainder(s)};
}

}  // namespace germlie
