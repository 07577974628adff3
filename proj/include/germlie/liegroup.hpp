#pragma once

#include <cstdint>
#include <vector>

#include "germlie/coefficient.hpp"

namespace germlie {

using Mat = Coeff;

/// Dynkin's form of the BCH series, tabulated once per truncation order.
///
/// Z(x, y) = sum over words w in {x, y} of coeff(w) [w], where [w] is the
/// right-nested bracket [w1, [w2, [..., wn]]] and coeff(w) is the coefficient
/// of w in log(e^x e^y) divided by |w|.
class DynkinTable {
 public:
  struct Node {
    int letter = 0;   ///< 0 = x, 1 = y
    int child = -1;   ///< node of the remaining suffix, -1 for a single letter
  };
  struct Term {
    int node = 0;
    double coeff = 0.0;
    int length = 0;
  };

  static constexpr int kMaxOrder = 12;

  /// Shared read-only table for the given order (1..kMaxOrder).
  static const DynkinTable& get(int order);

  int order() const { return order_; }
  /// Nodes in evaluation order: every child precedes its parent.
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Term>& terms() const { return terms_; }

  /// Taylor coefficients of s -> -log(2 - e^s), which majorizes
  /// sum_n ||Z_n(x, y)|| with s = ||x|| + ||y|| for a bracket-compatible norm.
  const std::vector<double>& majorant_coefficients() const { return majorant_; }

  /// Bound for sum_{n > order} ||Z_n(x, y)||; requires s < ln 2.
  double remainder(double s) const;

  /// Evaluate with user supplied operations.
  /// ops.bracket(a, b), ops.add(acc, v, c) -> acc + c v, ops.zero_like(x).
  template <class T, class Ops>
  T evaluate(const T& x, const T& y, const Ops& ops) const {
    std::vector<T> values;
    values.reserve(nodes_.size());
    for (const Node& n : nodes_) {
      const T& base = n.letter == 0 ? x : y;
      if (n.child < 0) {
        values.push_back(base);
      } else {
        values.push_back(ops.bracket(base, values[static_cast<std::size_t>(n.child)]));
      }
    }
    T acc = ops.zero_like(x);
    for (const Term& t : terms_) acc = ops.add(acc, values[static_cast<std::size_t>(t.node)], t.coeff);
    return acc;
  }

 private:
  explicit DynkinTable(int order);

  int order_;
  std::vector<Node> nodes_;
  std::vector<Term> terms_;
  std::vector<double> majorant_;
};

/// Matrix exponential by scaling and squaring with a degree-13 Pade core.
Mat exp_mat(const Mat& x);

/// Principal matrix logarithm by inverse scaling and squaring.
/// Throws DomainError unless ||g - id||_2 < 1.
Mat log_mat(const Mat& g);

/// g x g^{-1}.
Mat ad_conj(const Mat& g, const Mat& x);

struct BchValue {
  Mat value;
  double remainder = 0.0;  ///< bound for the omitted orders
};

/// gl(m, C) with the bracket-compatible norm 2 ||.||_2, its BCH local group and
/// the group GL(m, C).
class MatrixLieBackend {
 public:
  explicit MatrixLieBackend(int dim = 2, int bch_order = 8, double bch_radius = kLn2);

  static constexpr double kLn2 = 0.69314718055994530942;

  int dim() const { return dim_; }
  int bch_order() const { return bch_order_; }
  double bch_radius() const { return bch_radius_; }
  CoefficientSpace space() const { return CoefficientSpace::matrix(dim_); }
  const DynkinTable& table() const { return *table_; }

  double norm(const Mat& x) const { return 2.0 * operator_norm(x); }
  Mat bracket(const Mat& a, const Mat& b) const { return a * b - b * a; }
  Mat identity() const { return Mat::Identity(dim_, dim_); }
  Mat zero() const { return Mat::Zero(dim_, dim_); }

  /// Truncated BCH product; throws DomainError if ||x|| + ||y|| >= bch_radius.
  Mat bch(const Mat& x, const Mat& y) const { return bch_with_remainder(x, y).value; }
  BchValue bch_with_remainder(const Mat& x, const Mat& y) const;

  Mat exp(const Mat& x) const { return exp_mat(x); }
  Mat log(const Mat& g) const { return log_mat(g); }
  Mat ad(const Mat& g, const Mat& x) const { return ad_conj(g, x); }

 private:
  int dim_;
  int bch_order_;
  double bch_radius_;
  const DynkinTable* table_;
};

}  // namespace germlie
