#include "chaprel/wavecurves.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "chaprel/eigen.hpp"
#include "chaprel/errors.hpp"

namespace chaprel {

double n_scaling(double n_ref, double rho_ref, double rho, const ModelParams& params) {
  const double c = params.c;
  if (!(n_ref > 0.0))
    throw domain_error("n_scaling: n_ref must be positive");
  if (!(rho_ref > 1.0 / c) || !(rho > 1.0 / c))
    throw domain_error("n_scaling: rho arguments must exceed 1/c");
  return n_ref * std::sqrt(((rho * c - 1.0) * (rho * c + 1.0)) /
                           ((rho_ref * c - 1.0) * (rho_ref * c + 1.0)));
}

CurvePoint curve_point(const PrimitiveState& base, ContactFamily family,
                       double parameter, const ModelParams& params) {
  require_physical(base, params);
  const double c = params.c;
  const double c2 = c * c;

  if (family == ContactFamily::J2) {
    const double n = parameter;
    if (!(n > 0.0)) throw domain_error("curve_point: J2 needs n > 0");
    return {{n, base.rho, base.v}, base.v};
  }

  const double rho = parameter;
  if (!(rho > 1.0 / c))
    throw domain_error("curve_point: rho parameter must exceed 1/c");

  const auto lam = eigenvalues(base, params);
  double v = 0.0, speed = 0.0;
  if (family == ContactFamily::J1) {
    speed = lam[0];
    // (v - 1/rho)/(1 - v/(rho c^2)) = lambda1, solved for v.
    v = (speed + 1.0 / rho) / (1.0 + speed / (rho * c2));
  } else {
    speed = lam[2];
    v = (speed - 1.0 / rho) / (1.0 - speed / (rho * c2));
  }

  const double n = n_scaling(base.n, base.rho, rho, params);
  const PrimitiveState out{n, rho, v};
  if (!validate_physical(out, params).ok()) {
    std::ostringstream os;
    os << "curve_point: rho = " << rho << " leaves the region ("
       << validate_physical(out, params).describe() << ")";
    throw off_curve_error(os.str(), 1.0 / c,
                          std::numeric_limits<double>::infinity());
  }
  return {out, speed};
}

DiscontinuityResidual rh_residual(const PrimitiveState& left,
                                  const PrimitiveState& right, double sigma,
                                  const ModelParams& params) {
  const ConservedState ul = to_conserved(left, params);
  const ConservedState ur = to_conserved(right, params);
  const auto fl = flux_of(left, params);
  const auto fr = flux_of(right, params);
  DiscontinuityResidual r;
  r.sigma = sigma;
  r.res1 = -sigma * (ur.D - ul.D) + (fr[0] - fl[0]);
  r.res2 = -sigma * (ur.M - ul.M) + (fr[1] - fl[1]);
  r.res3 = -sigma * (ur.En - ul.En) + (fr[2] - fl[2]);
  return r;
}

HugoniotIdentities hugoniot_identities(const PrimitiveState& left,
                                       const PrimitiveState& right,
                                       const ModelParams& params) {
  require_physical(left, params);
  require_physical(right, params);
  const double c2 = params.c * params.c;
  const double v = right.v, vm = left.v;
  const double rho = right.rho, rhom = left.rho;

  HugoniotIdentities h;
  const double dv = v - vm;
  const double drho = rho - rhom;
  h.lhs18 = dv * dv / ((1.0 - v * v / c2) * (1.0 - vm * vm / c2));
  h.rhs18 = drho * drho / ((rho * rho - 1.0 / c2) * (rhom * rhom - 1.0 / c2));
  h.lhs20 = dv / (v * vm / c2 - 1.0);
  h.rhs20_plus = drho / (rho * rhom - 1.0 / c2);
  h.rhs20_minus = -h.rhs20_plus;
  return h;
}

} // namespace chaprel
