#include "chaprel/state.hpp"

#include <cmath>
#include <sstream>

#include "chaprel/errors.hpp"

namespace chaprel {

bool ModelParams::valid() const { return c > 0.0 && std::isfinite(c); }

std::string Admissibility::describe() const {
  if (ok()) return "admissible";
  std::ostringstream os;
  os << "inadmissible:";
  if (!n_positive) os << " n <= 0";
  if (!rho_above_sonic) os << " rho <= 1/c";
  if (!subluminal) os << " |v| >= c";
  return os.str();
}

double pressure(double rho) {
  if (!(rho > 0.0))
    throw domain_error("pressure: rho must be positive");
  return -1.0 / rho;
}

double lorentz(double v, const ModelParams& params) {
  const double c = params.c;
  return 1.0 / std::sqrt(1.0 - v * v / (c * c));
}

Admissibility validate_physical(const PrimitiveState& s, const ModelParams& params) {
  const double c = params.c;
  Admissibility a;
  a.n_positive = std::isfinite(s.n) && s.n > 0.0;
  a.rho_above_sonic = std::isfinite(s.rho) && s.rho > 1.0 / c;
  a.subluminal = std::isfinite(s.v) && std::fabs(s.v) < c;
  return a;
}

void require_physical(const PrimitiveState& s, const ModelParams& params) {
  if (!params.valid())
    throw domain_error("model params: c must be positive and finite");
  const Admissibility a = validate_physical(s, params);
  if (!a.ok()) throw domain_error(a.describe());
}

namespace {

// p/c^2 + rho with p = -1/rho.
double enthalpy_like(double rho, double c) { return rho - 1.0 / (rho * c * c); }

} // namespace

ConservedState to_conserved(const PrimitiveState& s, const ModelParams& params) {
  require_physical(s, params);
  const double c = params.c;
  const double g2 = 1.0 / (1.0 - s.v * s.v / (c * c));
  const double q = enthalpy_like(s.rho, c);
  ConservedState u;
  u.D = s.n * std::sqrt(g2);
  u.M = q * s.v * g2;
  u.En = q * s.v * s.v / (c * c) * g2 + s.rho;
  return u;
}

std::array<double, 3> flux_of(const PrimitiveState& s, const ModelParams& params) {
  require_physical(s, params);
  const double c = params.c;
  const double g2 = 1.0 / (1.0 - s.v * s.v / (c * c));
  const double q = enthalpy_like(s.rho, c);
  return {s.n * s.v * std::sqrt(g2), q * s.v * s.v * g2 - 1.0 / s.rho,
          q * s.v * g2};
}

PrimitiveState from_conserved(const ConservedState& u, const ModelParams& params) {
  if (!params.valid())
    throw domain_error("model params: c must be positive and finite");
  const double c = params.c;

  if (std::fabs(u.M) <= 1e-14 * std::max(1.0, std::fabs(u.En))) {
    const PrimitiveState s{u.D, u.En, 0.0};
    if (!validate_physical(s, params).ok())
      throw inversion_error("from_conserved: M = 0 state outside region: " +
                            validate_physical(s, params).describe());
    return s;
  }

  // v has the sign of M and solves
  //   g(v) = (M/v)(1 - v^2/c^2) - (rho(v) - 1/(rho(v) c^2)) = 0,
  // with rho(v) = En - M v / c^2, strictly monotone on the bracket for
  // inputs in the image of to_conserved.
  const double sgn = u.M > 0.0 ? 1.0 : -1.0;
  const auto g = [&](double v) {
    const double rho = u.En - u.M * v / (c * c);
    return (u.M / v) * (1.0 - v * v / (c * c)) - enthalpy_like(rho, c);
  };

  // g -> +inf (times sgn) as v -> 0, so a lower endpoint far below any
  // representable root keeps the bracket valid even when |M| sits just
  // above the M = 0 threshold.
  double lo = sgn * 1e-300;
  double hi = sgn * (1.0 - 1e-15) * c;
  double glo = g(lo);
  double ghi = g(hi);
  if (!std::isfinite(glo) || !std::isfinite(ghi) ||
      (glo > 0.0) == (ghi > 0.0))
    throw inversion_error("from_conserved: no sign change in bracket "
                          "(input not in the image of the admissible region)");

  while (std::fabs(hi - lo) >= 1e-14 * c) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  const double v = 0.5 * (lo + hi);
  const double rho = u.En - u.M * v / (c * c);
  const double n = u.D * std::sqrt(1.0 - v * v / (c * c));
  const PrimitiveState s{n, rho, v};
  const Admissibility a = validate_physical(s, params);
  if (!a.ok())
    throw inversion_error("from_conserved: recovered state outside region: " +
                          a.describe());
  return s;
}

} // namespace chaprel
