#pragma once
// Reference implementations kept independent of the library code paths.

#include <complex>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using CMat = Eigen::MatrixXcd;

inline CMat expm(const CMat& x) { return x.exp(); }
inline CMat logm(const CMat& g) { return g.log(); }

inline double opnorm(const CMat& a) {
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues()(0);
}

/// Classical RK4 for Y' = Y A(t) on [t0, t1].
template <class F>
CMat rk4_right(const CMat& y0, F&& a_of_t, double t0, double t1, int steps) {
  CMat y = y0;
  const double h = (t1 - t0) / steps;
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    const CMat k1 = y * a_of_t(t);
    const CMat k2 = (y + 0.5 * h * k1) * a_of_t(t + 0.5 * h);
    const CMat k3 = (y + 0.5 * h * k2) * a_of_t(t + 0.5 * h);
    const CMat k4 = (y + h * k3) * a_of_t(t + h);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

/// Horner evaluation of sum_k c_k z^k.
template <class T>
T horner(const std::vector<T>& c, std::complex<double> z) {
  T acc = c.back();
  for (auto it = c.rbegin() + 1; it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

}  // namespace oracle
