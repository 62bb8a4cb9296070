#ifndef CHAPREL_TESTS_EIGEN_ORACLE_HPP
#define CHAPREL_TESTS_EIGEN_ORACLE_HPP

// Independent eigen-decomposition of the quasilinear pair: eigenvalues
// from the characteristic cubic of A^{-1} B (trigonometric solve),
// eigenvectors as null vectors of B - lambda A via row cross products.
// Only the assembled matrices are shared with the implementation; the
// closed-form spectrum is not used.

#include <algorithm>
#include <array>
#include <cmath>

#include "chaprel/mat3.hpp"

namespace chaprel::testing {

// Real roots of x^3 + p x + q = 0 (three real roots assumed), via the
// trigonometric method.
inline std::array<double, 3> depressed_cubic_roots(double p, double q) {
  const double m = std::sqrt(-4.0 * p / 3.0);
  const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
  const double theta = std::acos(arg) / 3.0;
  std::array<double, 3> r;
  for (int k = 0; k < 3; ++k)
    r[k] = m * std::cos(theta - 2.0 * M_PI * k / 3.0);
  std::sort(r.begin(), r.end());
  return r;
}

// Ascending eigenvalues of a real 3x3 matrix with three real eigenvalues.
inline std::array<double, 3> eigenvalues_3x3(const Mat3& c) {
  const double tr = c(0, 0) + c(1, 1) + c(2, 2);
  // Sum of principal 2x2 minors.
  const double m2 = (c(1, 1) * c(2, 2) - c(1, 2) * c(2, 1)) +
                    (c(0, 0) * c(2, 2) - c(0, 2) * c(2, 0)) +
                    (c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0));
  const double d = det(c);
  // lambda^3 - tr lambda^2 + m2 lambda - det = 0; depress with
  // lambda = x + tr/3.
  const double p = m2 - tr * tr / 3.0;
  const double q = -2.0 * tr * tr * tr / 27.0 + tr * m2 / 3.0 - d;
  auto roots = depressed_cubic_roots(p, q);
  for (auto& r : roots) r += tr / 3.0;
  return roots;
}

// Unit null vector of the (rank-2) matrix B - lambda A: the cross
// product of its two most independent rows.
inline Vec3 generalized_null_vector(const Mat3& a, const Mat3& b, double lambda) {
  const Mat3 m = b - lambda * a;
  const Vec3 r0{m(0, 0), m(0, 1), m(0, 2)};
  const Vec3 r1{m(1, 0), m(1, 1), m(1, 2)};
  const Vec3 r2{m(2, 0), m(2, 1), m(2, 2)};
  const Vec3 c01 = cross(r0, r1);
  const Vec3 c02 = cross(r0, r2);
  const Vec3 c12 = cross(r1, r2);
  const Vec3 best = norm(c01) >= norm(c02)
                        ? (norm(c01) >= norm(c12) ? c01 : c12)
                        : (norm(c02) >= norm(c12) ? c02 : c12);
  return normalized(best);
}

} // namespace chaprel::testing

#endif
