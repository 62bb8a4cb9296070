#include "chaprel/riemann.hpp"

#include <cmath>
#include <sstream>

#include "chaprel/eigen.hpp"
#include "chaprel/errors.hpp"
#include "chaprel/wavecurves.hpp"

namespace chaprel {

std::pair<double, double> edge_speeds(const RiemannData& data) {
  const double a = eigenvalues(data.left, data.params)[0];
  const double b = eigenvalues(data.right, data.params)[2];
  return {a, b};
}

Regime classify(const RiemannData& data) {
  const auto [a, b] = edge_speeds(data);
  return b <= a ? Regime::Delta : Regime::Classical;
}

ClassicalFan solve_classical(const RiemannData& data) {
  if (classify(data) != Regime::Classical)
    throw solver_error("solve_classical: data is in the delta regime (b <= a)");
  const double c = data.params.c;
  const double c2 = c * c;
  const auto [a, b] = edge_speeds(data);

  // Discriminant c^4 + a^2 b^2 - c^2(a^2 + b^2) factors as
  // (c^2 - a^2)(c^2 - b^2) >= 0 on the region.
  const double disc = (c2 - a * a) * (c2 - b * b);
  const double rho_star = (c2 - a * b + std::sqrt(disc)) / (c2 * (b - a));
  const double v_star = (a + 1.0 / rho_star) / (1.0 + a / (rho_star * c2));

  if (!(rho_star > 1.0 / c) || !(std::fabs(v_star) < c)) {
    std::ostringstream os;
    os << "solve_classical: star state outside region (rho* = " << rho_star
       << ", v* = " << v_star << ")";
    throw solver_error(os.str());
  }

  const double n1 = n_scaling(data.left.n, data.left.rho, rho_star, data.params);
  const double n2 = n_scaling(data.right.n, data.right.rho, rho_star, data.params);

  ClassicalFan fan;
  fan.states = {data.left, PrimitiveState{n1, rho_star, v_star},
                PrimitiveState{n2, rho_star, v_star}, data.right};
  fan.speeds = {a, v_star, b};
  return fan;
}

DeltaShock solve_delta(const RiemannData& data) {
  if (classify(data) != Regime::Delta)
    throw solver_error("solve_delta: data is in the classical regime (b > a)");
  const double c = data.params.c;
  const double c2 = c * c;
  const auto [a, b] = edge_speeds(data);

  const ConservedState ul = to_conserved(data.left, data.params);
  const ConservedState ur = to_conserved(data.right, data.params);
  const auto fl = flux_of(data.left, data.params);
  const auto fr = flux_of(data.right, data.params);

  DeltaShock ds;
  ds.E = ur.En - ul.En;
  ds.F = ur.M - ul.M;
  ds.G = fr[1] - fl[1];
  const double dD = ur.D - ul.D;
  const double dDv = fr[0] - fl[0];

  const double window_slack = 1e-13 * c; // absorbs last-ulp rounding at b == a
  double sigma = 0.0;
  if (std::fabs(ds.E) > 1e-12 * std::max(std::fabs(ds.F), 1.0)) {
    const double disc = ds.F * ds.F - ds.E * ds.G;
    if (disc < 0.0)
      throw solver_error("solve_delta: no real shock speed (F^2 - EG < 0)");
    const double sq = std::sqrt(disc);
    // Cancellation-free evaluation of the two roots of E s^2 - 2F s + G.
    const double root_plus = ds.F >= 0.0 ? (ds.F + sq) / ds.E : ds.G / (ds.F - sq);
    const double root_minus = ds.F >= 0.0 ? ds.G / (ds.F + sq) : (ds.F - sq) / ds.E;
    const auto in_window = [&](double s) {
      return s >= b - window_slack && s <= a + window_slack;
    };
    const bool plus_ok = in_window(root_plus);
    const bool minus_ok = in_window(root_minus);
    const bool distinct =
        std::fabs(root_plus - root_minus) > window_slack;
    if (plus_ok && minus_ok && distinct)
      throw solver_error("solve_delta: both quadratic roots satisfy the "
                         "entropy condition; refusing to pick silently");
    if (!plus_ok && !minus_ok)
      throw solver_error("solve_delta: no quadratic root satisfies the "
                         "entropy condition");
    sigma = plus_ok ? root_plus : root_minus;
    // The closed-form speed is the "+" branch; guard that entropy agrees
    // whenever E > 0 (the E < 0 case is selected by entropy alone).
    if (ds.E > 0.0 && !plus_ok)
      throw solver_error("solve_delta: entropy selected the \"-\" branch "
                         "with E > 0, contradicting the closed form");
  } else {
    sigma = ds.G / (2.0 * ds.F) + 0.0; // + 0.0 normalizes -0
    if (!(sigma >= b - window_slack && sigma <= a + window_slack))
      throw solver_error("solve_delta: E = 0 speed violates the entropy "
                         "condition");
  }

  const double one_m = 1.0 - sigma * sigma / c2;
  ds.sigma = sigma;
  // (E sigma - F) equals sqrt(F^2 - EG) for the "+" root.
  ds.w_slope = (ds.E * sigma - ds.F) * one_m;
  ds.h_slope = std::sqrt(one_m) * (dD * sigma - dDv);
  return ds;
}

RiemannSolution solve(const RiemannData& data) {
  require_physical(data.left, data.params);
  require_physical(data.right, data.params);
  RiemannSolution sol;
  sol.data = data;
  if (classify(data) == Regime::Classical)
    sol.wave = solve_classical(data);
  else
    sol.wave = solve_delta(data);
  return sol;
}

SamplePoint sample(const RiemannSolution& sol, double xi) {
  SamplePoint p;
  if (sol.regime() == Regime::Classical) {
    const ClassicalFan& fan = sol.fan();
    if (xi < fan.a()) {
      p.tag = RegionTag::Left;
      p.state = fan.states[0];
    } else if (xi <= fan.v_star()) {
      p.tag = RegionTag::Star1;
      p.state = fan.states[1];
    } else if (xi <= fan.b()) {
      p.tag = RegionTag::Star2;
      p.state = fan.states[2];
    } else {
      p.tag = RegionTag::Right;
      p.state = fan.states[3];
    }
    return p;
  }
  const DeltaShock& ds = sol.delta();
  if (xi == ds.sigma) {
    p.tag = RegionTag::DeltaCarrier;
    p.v_delta = ds.sigma;
    p.h_slope = ds.h_slope;
    p.w_slope = ds.w_slope;
  } else if (xi < ds.sigma) {
    p.tag = RegionTag::Left;
    p.state = sol.data.left;
  } else {
    p.tag = RegionTag::Right;
    p.state = sol.data.right;
  }
  return p;
}

} // namespace chaprel
