#ifndef CHAPREL_EIGEN_HPP
#define CHAPREL_EIGEN_HPP

#include <array>

#include "chaprel/mat3.hpp"
#include "chaprel/state.hpp"

namespace chaprel {

/// Coefficient matrices of the quasilinear form A w_t + B w_x = 0 in the
/// unknown ordering (n, rho, v). A is invertible at admissible states.
struct QuasilinearPair {
  Mat3 A;
  Mat3 B;
};

/// Wave speeds and (unnormalized) right eigenvectors, slowest first.
struct EigenTriple {
  std::array<double, 3> lambda;
  std::array<Vec3, 3> r;
};

/// Assembles A and B at an admissible state. Throws domain_error otherwise.
QuasilinearPair assemble_matrices(const PrimitiveState& s, const ModelParams& params);

/// lambda1 = (v - 1/rho)/(1 - v/(rho c^2)), lambda2 = v,
/// lambda3 = (v + 1/rho)/(1 + v/(rho c^2)); strictly increasing and all
/// inside (-c, c) on the physical region.
std::array<double, 3> eigenvalues(const PrimitiveState& s, const ModelParams& params);

/// Right eigenvectors in closed form, returned unnormalized.
std::array<Vec3, 3> eigenvectors(const PrimitiveState& s, const ModelParams& params);

EigenTriple eigensystem(const PrimitiveState& s, const ModelParams& params);

/// Linear-degeneracy diagnostic d_i = |grad(lambda_i) . r_i| with the
/// gradient taken by central differences of step h per coordinate.
/// Exact answer is zero for every field; the returned defect is O(h^2).
/// Throws domain_error when the stencil leaves the physical region.
std::array<double, 3> degeneracy_defect(const PrimitiveState& s,
                                        const ModelParams& params, double h);

} // namespace chaprel

#endif
