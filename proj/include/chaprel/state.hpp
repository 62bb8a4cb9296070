#ifndef CHAPREL_STATE_HPP
#define CHAPREL_STATE_HPP

#include <array>
#include <string>

namespace chaprel {

/// Model constants. c is a runtime parameter so every formula carries it
/// explicitly; default 1 (geometric units).
struct ModelParams {
  double c = 1.0;
  bool valid() const;
};

/// Primitive unknowns: rest mass density n, proper energy density rho,
/// particle speed v. Admissible iff n > 0, rho > 1/c, |v| < c.
struct PrimitiveState {
  double n = 0.0;
  double rho = 0.0;
  double v = 0.0;
};

/// Conserved densities: baryon density D, momentum density M, energy
/// density En (the three quantities under the time derivatives).
struct ConservedState {
  double D = 0.0;
  double M = 0.0;
  double En = 0.0;
};

/// Verdict of the physical-region check; records which clause failed.
struct Admissibility {
  bool n_positive = false;
  bool rho_above_sonic = false; // rho > 1/c
  bool subluminal = false;      // |v| < c
  bool ok() const { return n_positive && rho_above_sonic && subluminal; }
  std::string describe() const;
};

/// Chaplygin pressure p = -1/rho. Throws domain_error for rho <= 0.
double pressure(double rho);

/// Lorentz factor 1/sqrt(1 - v^2/c^2).
double lorentz(double v, const ModelParams& params);

/// Strict admissibility check against the physical region. Total function.
Admissibility validate_physical(const PrimitiveState& s, const ModelParams& params);

/// Throws domain_error with the failed clause when s is inadmissible.
void require_physical(const PrimitiveState& s, const ModelParams& params);

/// Primitive -> conserved map. Throws domain_error on inadmissible input.
ConservedState to_conserved(const PrimitiveState& s, const ModelParams& params);

/// Conserved fluxes (D v, M v + p, M) of the same state.
std::array<double, 3> flux_of(const PrimitiveState& s, const ModelParams& params);

/// Conserved -> primitive inversion. v = 0 shortcut when |M| is below
/// 1e-14 * max(1, |En|); otherwise v is bracketed on (0, c)*sign(M) and
/// bisected to an interval below 1e-14 * c. Throws inversion_error when
/// the bracket has no sign change or the recovered state is inadmissible.
PrimitiveState from_conserved(const ConservedState& u, const ModelParams& params);

inline std::array<double, 3> as_array(const ConservedState& u) {
  return {u.D, u.M, u.En};
}

} // namespace chaprel

#endif
