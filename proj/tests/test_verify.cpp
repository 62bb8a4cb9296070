#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "chaprel/eigen.hpp"
#include "chaprel/errors.hpp"
#include "chaprel/riemann.hpp"
#include "chaprel/rng.hpp"
#include "chaprel/verify.hpp"
#include "support/generators.hpp"

using namespace chaprel;

namespace {

const ModelParams kUnit{1.0};

RiemannSolution worked_classical() {
  return solve({{1.0, 2.0, 0.5}, {1.0, 2.0, 0.0}, kUnit});
}

RiemannSolution symmetric_delta() {
  return solve({{1.0, 2.0, 0.8}, {1.0, 2.0, -0.8}, kUnit});
}

double max_res(const WeakResidualReport& r) {
  return std::max({r.residual[0], r.residual[1], r.residual[2]});
}

} // namespace

TEST_CASE("bump test function") {
  CHECK_THROWS_AS(BumpTestFunction(0.3, 0.0, 0.5, 0.5), domain_error);
  CHECK_THROWS_AS(BumpTestFunction(1.0, 0.0, -0.1, 0.5), domain_error);

  const BumpTestFunction phi(1.0, 0.0, 0.5, 0.5);
  CHECK(phi.eval(1.0, 0.0).phi == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(phi.eval(1.0, 0.6).phi == 0.0);
  CHECK(phi.eval(0.4, 0.0).phi_t == 0.0);

  // Derivatives against central differences.
  const double h = 1e-6;
  const auto e = phi.eval(1.1, 0.2);
  const double dt_fd = (phi.eval(1.1 + h, 0.2).phi - phi.eval(1.1 - h, 0.2).phi) / (2 * h);
  const double dx_fd = (phi.eval(1.1, 0.2 + h).phi - phi.eval(1.1, 0.2 - h).phi) / (2 * h);
  CHECK(e.phi_t == doctest::Approx(dt_fd).epsilon(1e-8));
  CHECK(e.phi_x == doctest::Approx(dx_fd).epsilon(1e-8));
}

TEST_CASE("weighted line measure pairing") {
  // <w delta_L, f> with t(s) = s, x(s) = 0.5 s, w(s) = s and
  // f(t, x) = t + x gives integral of 1.5 s^2 over [0, 1] = 0.5.
  WeightedLineMeasure mu;
  mu.s0 = 0.0;
  mu.s1 = 1.0;
  mu.t = [](double s) { return s; };
  mu.x = [](double s) { return 0.5 * s; };
  mu.weight = [](double s) { return s; };
  const double val = mu.pair([](double t, double x) { return t + x; }, 16);
  CHECK(val == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("weak residual: constant solution is divergence free") {
  const RiemannSolution sol = solve({{1.0, 2.0, 0.3}, {1.0, 2.0, 0.3}, kUnit});
  const BumpTestFunction phi(0.8, 0.1, 0.5, 0.6);
  QuadratureSpec quad;
  const auto rep = weak_residual(sol, phi, quad);
  CHECK(max_res(rep) < 1e-13);
}

TEST_CASE("weak residual: classical fan under several bumps") {
  const RiemannSolution sol = worked_classical();
  SplitMix64 rng(0x5eed0041);
  QuadratureSpec quad;
  for (int i = 0; i < 5; ++i) {
    const double t0 = rng.uniform(0.7, 1.1);
    const BumpTestFunction phi(t0, rng.uniform(-0.3, 0.8) * t0,
                               rng.uniform(0.25, 0.5), rng.uniform(0.3, 0.6));
    const auto rep = weak_residual(sol, phi, quad);
    CHECK(max_res(rep) < 1e-9);
  }
}

TEST_CASE("weak residual: delta solution with the line terms") {
  const RiemannSolution sol = symmetric_delta();
  const BumpTestFunction phi(0.8, 0.0, 0.5, 0.6);
  QuadratureSpec quad;
  const auto rep = weak_residual(sol, phi, quad);
  CHECK(max_res(rep) < 1e-9);

  // Dropping the measure terms must break the balance badly: compare
  // against a fabricated zero-weight shock.
  RiemannSolution no_weights = sol;
  std::get<DeltaShock>(no_weights.wave).h_slope = 0.0;
  std::get<DeltaShock>(no_weights.wave).w_slope = 0.0;
  const auto broken = weak_residual(no_weights, phi, quad);
  CHECK(max_res(broken) > 1e-2);
}

TEST_CASE("weak residual: asymmetric moving delta shock (E != 0)") {
  const RiemannSolution sol =
      solve({{1.5, 2.5, 0.7}, {0.8, 2.0, -0.75}, kUnit});
  REQUIRE(sol.regime() == Regime::Delta);
  REQUIRE(sol.delta().E != 0.0);
  REQUIRE(sol.delta().sigma != 0.0);

  const double s = sol.delta().sigma;
  const BumpTestFunction phi(0.8, 0.8 * s, 0.45, 0.55);
  QuadratureSpec quad;
  CHECK(max_res(weak_residual(sol, phi, quad)) < 1e-9);

  // Mollified mode is not an exact weak solution; its residual carries
  // the smearing error, which for a symmetric mollifier is O(eps^2).
  QuadratureSpec moll = quad;
  moll.delta_mode = DeltaTermMode::Mollified;
  moll.mollifier_width = 1e-3;
  const double eps = moll.mollifier_width;
  CHECK(max_res(weak_residual(sol, phi, moll)) < 10.0 * eps * eps);
}

TEST_CASE("weak residual decreases under refinement") {
  const RiemannSolution sol = worked_classical();
  const BumpTestFunction phi(0.8, 0.1, 0.5, 0.6);
  QuadratureSpec coarse;
  coarse.panels = 8;
  QuadratureSpec fine;
  fine.panels = 64;
  const auto rc = weak_residual(sol, phi, coarse);
  const auto rf = weak_residual(sol, phi, fine);
  CHECK(max_res(rf) < max_res(rc));
  CHECK(max_res(rc) > 1e-9); // coarse level is genuinely above the target
}

TEST_CASE("weak residual refinement loop and failure path") {
  const RiemannSolution sol = worked_classical();
  const BumpTestFunction phi(0.8, 0.1, 0.5, 0.6);

  QuadratureSpec quad;
  quad.panels = 8;
  quad.target = 1e-9;
  quad.max_doublings = 4;
  const auto rep = weak_residual(sol, phi, quad);
  CHECK(max_res(rep) <= 1e-9);
  CHECK(rep.panels_used > 8);

  QuadratureSpec hopeless = quad;
  hopeless.target = 1e-30;
  hopeless.max_doublings = 1;
  CHECK_THROWS_AS(weak_residual(sol, phi, hopeless), quadrature_error);
  try {
    weak_residual(sol, phi, hopeless);
  } catch (const quadrature_error& e) {
    CHECK(e.panels_reached == 16);
    CHECK(e.best_effort[0] >= 0.0);
  }
}

TEST_CASE("weak residual serial and parallel agree bitwise") {
  const RiemannSolution cls = worked_classical();
  const RiemannSolution dlt = symmetric_delta();
  const BumpTestFunction phi(0.8, 0.05, 0.5, 0.6);
  for (const auto* sol : {&cls, &dlt}) {
    QuadratureSpec serial;
    serial.parallel = false;
    QuadratureSpec parallel;
    parallel.parallel = true;
    const auto a = weak_residual(*sol, phi, serial);
    const auto b = weak_residual(*sol, phi, parallel);
    for (int k = 0; k < 3; ++k) CHECK(a.residual[k] == b.residual[k]);
  }
}

TEST_CASE("mollified cross-check agrees with the line integrals to O(eps)") {
  const RiemannSolution sol = symmetric_delta();
  const BumpTestFunction phi(0.8, 0.0, 0.5, 0.6);
  QuadratureSpec line;
  const auto base = weak_residual(sol, phi, line);

  double prev = 1e300;
  for (const double eps : {1e-2, 1e-3}) {
    QuadratureSpec moll;
    moll.delta_mode = DeltaTermMode::Mollified;
    moll.mollifier_width = eps;
    const auto rep = weak_residual(sol, phi, moll);
    double diff = 0.0;
    for (int k = 0; k < 3; ++k)
      diff = std::max(diff, std::fabs(rep.residual[k] - base.residual[k]));
    CHECK(diff <= 1.0 * eps);
    CHECK(diff < prev);
    prev = diff;
  }
}

TEST_CASE("generalized RH residuals") {
  const RiemannData data{{1.0, 2.0, 0.8}, {1.0, 2.0, -0.8}, kUnit};
  const DeltaShock ds = solve_delta(data);

  const auto r = grh_residual(ds, data);
  CHECK(r.res[0] == 0.0); // x(t) = sigma t makes line 1 exact
  CHECK(r.max_abs() < 1e-13);

  DeltaShock bad = ds;
  bad.sigma += 1e-3;
  const auto rb = grh_residual(bad, data);
  CHECK(rb.max_abs() > 1e-4);
}

TEST_CASE("grh residual across random delta data") {
  SplitMix64 rng(0x5eed0042);
  for (int i = 0; i < 1000; ++i) {
    const ModelParams p = testing::cycled_params(i);
    const RiemannData data = testing::random_delta_data(rng, p);
    const auto ds = solve_delta(data);
    CHECK(grh_residual(ds, data).max_abs() < 1e-12);
  }
}

TEST_CASE("limit study hits the closed-form targets") {
  const PrimitiveState left{1.0, 2.0, 0.8};
  const std::vector<double> eps = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  const auto res = limit_study(left, kUnit, eps);

  CHECK(res.target_rho == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(res.target_n == doctest::Approx(0.8660254037844386).epsilon(1e-13));
  CHECK(res.target_v == 0.0);
  REQUIRE(res.rows.size() == 5);

  // Errors monotone in eps.
  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    CHECK(res.rows[i].err_rho < res.rows[i - 1].err_rho);
    CHECK(res.rows[i].err_n < res.rows[i - 1].err_n);
    CHECK(res.rows[i].err_v < res.rows[i - 1].err_v);
  }

  // Richardson extrapolation within 1e-6 relative (absolute for the
  // zero target).
  CHECK(std::fabs(res.extrap_rho - res.target_rho) <= 1e-6 * res.target_rho);
  CHECK(std::fabs(res.extrap_n - res.target_n) <= 1e-6 * res.target_n);
  CHECK(std::fabs(res.extrap_v) <= 1e-6);

  // Infeasible eps: a + eps beyond c.
  const std::vector<double> bad = {0.6};
  CHECK_THROWS_AS(limit_study(left, kUnit, bad), domain_error);
}

TEST_CASE("entropy window reports") {
  const RiemannData delta{{1.0, 2.0, 0.8}, {1.0, 2.0, -0.8}, kUnit};
  const auto ds = solve_delta(delta);
  const auto rep = entropy_window(ds, delta);
  CHECK(rep.b == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(rep.sigma == doctest::Approx(0.0));
  CHECK(rep.a == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(rep.satisfied);
  CHECK(rep.six_characteristics_ok);

  // Boundary case b == a: the chain closes with equalities.
  const PrimitiveState left{1.0, 2.0, 0.5};
  const double a = eigenvalues(left, kUnit)[0];
  const double vp = (a - 1.0 / left.rho) / (1.0 - a / left.rho);
  const RiemannData boundary{left, {left.n, left.rho, vp}, kUnit};
  const auto dsb = solve_delta(boundary);
  const auto repb = entropy_window(dsb, boundary);
  CHECK(repb.satisfied);
  CHECK(repb.six_characteristics_ok);
  CHECK(repb.sigma == doctest::Approx(repb.a).epsilon(1e-12));
  CHECK(repb.sigma == doctest::Approx(repb.b).epsilon(1e-12));

  // Classical data: empty window.
  const RiemannData cls{{1.0, 2.0, 0.5}, {1.0, 2.0, 0.0}, kUnit};
  const auto repc = entropy_window(0.25, cls);
  CHECK(repc.b > repc.a);
  CHECK_FALSE(repc.satisfied);
}
