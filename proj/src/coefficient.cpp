#include "germlie/coefficient.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "germlie/errors.hpp"

namespace germlie {

std::string to_string(CoeffKind kind) {
  switch (kind) {
    case CoeffKind::Scalar:
      return "scalar";
    case CoeffKind::Vector:
      return "vector";
    case CoeffKind::Matrix:
      return "matrix";
  }
  return "scalar";
}

CoeffKind coeff_kind_from_string(const std::string& s) {
  if (s == "scalar") return CoeffKind::Scalar;
  if (s == "vector") return CoeffKind::Vector;
  if (s == "matrix") return CoeffKind::Matrix;
  throw StructuralError("unknown coefficient kind '" + s + "'");
}

CoefficientSpace CoefficientSpace::vector(int m) {
  if (m < 1 || m > kMaxCoeffDim) {
    throw StructuralError("vector coefficient dimension must lie in [1, 4]");
  }
  return {CoeffKind::Vector, m};
}

CoefficientSpace CoefficientSpace::matrix(int m) {
  if (m < 1 || m > kMaxCoeffDim) {
    throw StructuralError("matrix coefficient dimension must lie in [1, 4]");
  }
  return {CoeffKind::Matrix, m};
}

double CoefficientSpace::norm(const Coeff& c) const {
  if (kind_ == CoeffKind::Matrix) return 2.0 * operator_norm(c);
  return c.norm();
}

Coeff CoefficientSpace::identity() const {
  if (kind_ == CoeffKind::Vector) {
    throw StructuralError("vector coefficient spaces have no multiplicative unit");
  }
  return Coeff::Identity(rows(), cols());
}

std::string describe(const CoefficientSpace& space) {
  if (space.kind() == CoeffKind::Scalar) return "scalar";
  return to_string(space.kind()) + "(" + std::to_string(space.m()) + ")";
}

double operator_norm(const Coeff& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == 1 || a.cols() == 1) return a.norm();
  if (a.rows() == 2 && a.cols() == 2) {
    // sigma_max^2 = (|A|_F^2 + sqrt(|A|_F^4 - 4 |det A|^2)) / 2
    const double f2 = a.squaredNorm();
    const double det = std::abs(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
    const double disc = std::max(0.0, f2 * f2 - 4.0 * det * det);
    return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
  }
  Eigen::JacobiSVD<Coeff> svd(a);
  return svd.singularValues()(0);
}

}  // namespace germlie
