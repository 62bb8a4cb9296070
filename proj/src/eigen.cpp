#include "chaprel/eigen.hpp"

#include <cmath>

#include "chaprel/errors.hpp"

namespace chaprel {

QuasilinearPair assemble_matrices(const PrimitiveState& s, const ModelParams& params) {
  require_physical(s, params);
  const double c = params.c;
  const double c2 = c * c;
  const double n = s.n, rho = s.rho, v = s.v;
  const double one_m = 1.0 - v * v / c2;   // 1 - v^2/c^2
  const double one_p = 1.0 + v * v / c2;   // 1 + v^2/c^2
  const double q = rho - 1.0 / (rho * c2); // p/c^2 + rho

  QuasilinearPair p;
  Mat3& A = p.A;
  Mat3& B = p.B;

  A(0, 0) = 1.0 / std::sqrt(one_m);
  A(0, 1) = 0.0;
  A(0, 2) = n * v / (c2 * std::pow(one_m, 1.5));
  A(1, 0) = 0.0;
  A(1, 1) = (1.0 / (rho * rho * c2) + 1.0) * v / one_m;
  A(1, 2) = q * one_p / (one_m * one_m);
  A(2, 0) = 0.0;
  A(2, 1) = (1.0 + v * v / (rho * rho * c2 * c2)) / one_m;
  A(2, 2) = (2.0 * v / (c2 * c2)) * (-1.0 / rho + rho * c2) / (one_m * one_m);

  B(0, 0) = v / std::sqrt(one_m);
  B(0, 1) = 0.0;
  B(0, 2) = n / std::pow(one_m, 1.5);
  B(1, 0) = 0.0;
  B(1, 1) = (v * v + 1.0 / (rho * rho)) / one_m;
  B(1, 2) = 2.0 * rho * v * (1.0 - 1.0 / (rho * rho * c2)) / (one_m * one_m);
  B(2, 0) = 0.0;
  B(2, 1) = (1.0 / (rho * rho * c2) + 1.0) * v / one_m;
  B(2, 2) = q * one_p / (one_m * one_m);

  return p;
}

std::array<double, 3> eigenvalues(const PrimitiveState& s, const ModelParams& params) {
  require_physical(s, params);
  const double c2 = params.c * params.c;
  const double rho = s.rho, v = s.v;
  return {(v - 1.0 / rho) / (1.0 - v / (rho * c2)), v,
          (v + 1.0 / rho) / (1.0 + v / (rho * c2))};
}

std::array<Vec3, 3> eigenvectors(const PrimitiveState& s, const ModelParams& params) {
  require_physical(s, params);
  const double c2 = params.c * params.c;
  const double n = s.n, rho = s.rho, v = s.v;
  const double one_m = 1.0 - v * v / c2;
  const double q = rho - 1.0 / (rho * c2);

  const Vec3 r1{-n / (q * one_m), -1.0 / one_m, (1.0 / rho) / q};
  const Vec3 r2{1.0, 0.0, 0.0};
  const Vec3 r3{n / (q * one_m), 1.0 / one_m, (1.0 / rho) / q};
  return {r1, r2, r3};
}

EigenTriple eigensystem(const PrimitiveState& s, const ModelParams& params) {
  return {eigenvalues(s, params), eigenvectors(s, params)};
}

std::array<double, 3> degeneracy_defect(const PrimitiveState& s,
                                        const ModelParams& params, double h) {
  if (!(h > 0.0)) throw domain_error("degeneracy_defect: h must be positive");
  require_physical(s, params);

  // Central-difference stencil must stay inside the region.
  const auto shifted = [&](int coord, double delta) {
    PrimitiveState t = s;
    if (coord == 0) t.n += delta;
    if (coord == 1) t.rho += delta;
    if (coord == 2) t.v += delta;
    if (!validate_physical(t, params).ok())
      throw domain_error("degeneracy_defect: stencil leaves the region");
    return t;
  };

  std::array<Vec3, 3> grad{}; // grad[i] = gradient of lambda_i
  for (int coord = 0; coord < 3; ++coord) {
    const auto lp = eigenvalues(shifted(coord, +h), params);
    const auto lm = eigenvalues(shifted(coord, -h), params);
    for (int i = 0; i < 3; ++i) grad[i][coord] = (lp[i] - lm[i]) / (2.0 * h);
  }

  const auto r = eigenvectors(s, params);
  std::array<double, 3> d{};
  for (int i = 0; i < 3; ++i)
    d[i] = std::fabs(grad[i][0] * r[i][0] + grad[i][1] * r[i][1] +
                     grad[i][2] * r[i][2]);
  return d;
}

} // namespace chaprel
