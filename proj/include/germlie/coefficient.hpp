#pragma once

#include <complex>
#include <string>

#include <Eigen/Core>

namespace germlie {

using cplx = std::complex<double>;

/// Largest supported matrix / vector size for coefficient spaces.
inline constexpr int kMaxCoeffDim = 4;

/// Coefficient values. Scalars are 1x1, vectors m x 1, matrices m x m; the
/// fixed capacity keeps every coefficient on the stack.
using Coeff = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                            kMaxCoeffDim, kMaxCoeffDim>;

/// Points of the model space C^d with d <= 2.
using Point = Eigen::Matrix<cplx, Eigen::Dynamic, 1, Eigen::ColMajor, 2, 1>;

enum class CoeffKind { Scalar, Vector, Matrix };

std::string to_string(CoeffKind kind);
CoeffKind coeff_kind_from_string(const std::string& s);

/// The Banach space Z in which series take values.
///
/// Scalars and vectors carry the Euclidean norm. Matrices carry twice the
/// operator 2-norm, so that ||[x,y]|| <= ||x|| ||y|| and ||xy|| <= ||x|| ||y|| / 2.
class CoefficientSpace {
 public:
  CoefficientSpace() = default;

  static CoefficientSpace scalar() { return {CoeffKind::Scalar, 1}; }
  static CoefficientSpace vector(int m);
  static CoefficientSpace matrix(int m);

  CoeffKind kind() const { return kind_; }
  int m() const { return m_; }
  int rows() const { return kind_ == CoeffKind::Scalar ? 1 : m_; }
  int cols() const { return kind_ == CoeffKind::Matrix ? m_ : 1; }
  bool is_algebra() const { return kind_ != CoeffKind::Vector; }

  double norm(const Coeff& c) const;

  /// Constant c with ||a b|| <= c ||a|| ||b||; 1 for scalars, 1/2 for matrices.
  double product_constant() const { return kind_ == CoeffKind::Matrix ? 0.5 : 1.0; }

  Coeff zero() const { return Coeff::Zero(rows(), cols()); }
  /// Multiplicative unit. Only defined for scalar and matrix spaces.
  Coeff identity() const;

  bool accepts(const Coeff& c) const { return c.rows() == rows() && c.cols() == cols(); }

  friend bool operator==(const CoefficientSpace&, const CoefficientSpace&) = default;

 private:
  CoefficientSpace(CoeffKind kind, int m) : kind_(kind), m_(m) {}

  CoeffKind kind_ = CoeffKind::Scalar;
  int m_ = 1;
};

std::string describe(const CoefficientSpace& space);

/// Operator 2-norm (largest singular value).
double operator_norm(const Coeff& a);

/// Euclidean norm of a point of C^d.
inline double point_norm(const Point& p) { return p.norm(); }

}  // namespace germlie
