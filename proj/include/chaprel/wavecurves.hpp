#ifndef CHAPREL_WAVECURVES_HPP
#define CHAPREL_WAVECURVES_HPP

#include <algorithm>
#include <cmath>

#include "chaprel/state.hpp"

namespace chaprel {

/// The three linearly degenerate contact families.
enum class ContactFamily { J1 = 1, J2 = 2, J3 = 3 };

/// Signed residuals of the three Rankine-Hugoniot equations
/// -sigma [U_k] + [F_k] at a tested speed.
struct DiscontinuityResidual {
  double res1 = 0.0;
  double res2 = 0.0;
  double res3 = 0.0;
  double sigma = 0.0;
  double max_abs() const {
    return std::max({std::fabs(res1), std::fabs(res2), std::fabs(res3)});
  }
};

/// One point of a contact curve together with its propagation speed.
struct CurvePoint {
  PrimitiveState state;
  double speed = 0.0;
};

/// Hugoniot n-scaling n = n_ref sqrt((rho c - 1)(rho c + 1) /
/// ((rho_ref c - 1)(rho_ref c + 1))). Throws domain_error outside the
/// region.
double n_scaling(double n_ref, double rho_ref, double rho, const ModelParams& params);

/// Point of the family curve through `base`. Families 1 and 3 are
/// parameterized by rho (> 1/c); v is the Moebius rearrangement keeping
/// the family eigenvalue constant and n follows the Hugoniot scaling.
/// Family 2 is parameterized by n (> 0): rho and v stay at the base
/// values. The speed is the family eigenvalue of the base state.
CurvePoint curve_point(const PrimitiveState& base, ContactFamily family,
                       double parameter, const ModelParams& params);

/// Rankine-Hugoniot residuals for a candidate discontinuity
/// (left, right, sigma); identically zero exactly when the triple is a
/// bounded discontinuity of the system. Jumps are right minus left.
DiscontinuityResidual rh_residual(const PrimitiveState& left,
                                  const PrimitiveState& right, double sigma,
                                  const ModelParams& params);

/// Both sides of the two Hugoniot identities obtained by eliminating the
/// speed: relation lhs18 = rhs18 and lhs20 = +/- rhs20 (the sign selects
/// the 1- or 3-family branch).
struct HugoniotIdentities {
  double lhs18 = 0.0;
  double rhs18 = 0.0;
  double lhs20 = 0.0;
  double rhs20_plus = 0.0;
  double rhs20_minus = 0.0;
};

HugoniotIdentities hugoniot_identities(const PrimitiveState& left,
                                       const PrimitiveState& right,
                                       const ModelParams& params);

} // namespace chaprel

#endif
