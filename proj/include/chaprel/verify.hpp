#ifndef CHAPREL_VERIFY_HPP
#define CHAPREL_VERIFY_HPP

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "chaprel/riemann.hpp"
#include "chaprel/state.hpp"

namespace chaprel {

/// Smooth compactly supported bump
///   phi = exp(-1/(1-r^2)),  r^2 = ((t-t0)/Rt)^2 + ((x-x0)/Rx)^2 < 1,
/// zero otherwise, with analytically known first derivatives. The
/// support must lie strictly inside t > 0.
class BumpTestFunction {
public:
  BumpTestFunction(double t0, double x0, double Rt, double Rx);

  struct Eval {
    double phi = 0.0;
    double phi_t = 0.0;
    double phi_x = 0.0;
  };
  Eval eval(double t, double x) const;

  double t0() const { return t0_; }
  double x0() const { return x0_; }
  double Rt() const { return Rt_; }
  double Rx() const { return Rx_; }

private:
  double t0_, x0_, Rt_, Rx_;
};

/// Weighted delta measure on a C^1 curve (t(s), x(s)), s in [s0, s1]:
/// <w delta_L, f> = integral of w(s) f(t(s), x(s)) ds.
struct WeightedLineMeasure {
  double s0 = 0.0;
  double s1 = 0.0;
  std::function<double(double)> t;
  std::function<double(double)> x;
  std::function<double(double)> weight;

  /// Composite Gauss-Legendre pairing against f(t, x).
  double pair(const std::function<double(double, double)>& f, int panels) const;
};

enum class DeltaTermMode {
  LineIntegral, // exact line integrals per the weighted-measure definition
  Mollified     // delta_eps via a normalized bump mollifier of width eps
};

struct QuadratureSpec {
  int panels = 64;      // composite panels per region per axis
  int gauss_points = 8; // Gauss-Legendre nodes per panel (4 or 8)
  DeltaTermMode delta_mode = DeltaTermMode::LineIntegral;
  double mollifier_width = 1e-2;
  bool parallel = true;
  // Optional refinement loop: double `panels` up to max_doublings times
  // until every residual is below target. target == 0 runs one shot.
  double target = 0.0;
  int max_doublings = 0;
};

struct WeakResidualReport {
  std::array<double, 3> residual{}; // absolute, one per equation
  int panels_used = 0;
};

/// Distributional residuals of a solution against one test function:
/// integrates U_k phi_t + F_k phi_x over the support with per-region
/// quadrature (regions cut along the wave lines) and, for delta
/// solutions, adds the weighted line-measure terms of each equation.
/// Throws quadrature_error (carrying best-effort residuals) when a
/// refinement target is requested but not reached.
WeakResidualReport weak_residual(const RiemannSolution& sol,
                                 const BumpTestFunction& phi,
                                 const QuadratureSpec& quad);

/// Residuals of the four generalized Rankine-Hugoniot ODEs, evaluated
/// analytically (x, h, w linear in t; v_delta constant).
struct GrhResidual {
  std::array<double, 4> res{};
  double max_abs() const;
};

GrhResidual grh_residual(const DeltaShock& ds, const RiemannData& data);

/// One epsilon of the singular-limit study.
struct LimitStudyRow {
  double eps = 0.0;
  double integral_rho = 0.0;
  double integral_n = 0.0;
  double integral_v = 0.0;
  double err_rho = 0.0;
  double err_n = 0.0;
  double err_v = 0.0;
};

struct LimitStudyResult {
  std::vector<LimitStudyRow> rows;
  double target_rho = 0.0; // 2 (c^2 - a^2)/c^2
  double target_n = 0.0;   // (c^2 - a^2)/c^2 (n-/sqrt(rho-^2 - 1/c^2) + ...)
  double target_v = 0.0;   // 0
  double extrap_rho = 0.0; // Richardson (polynomial) extrapolation to eps = 0
  double extrap_n = 0.0;
  double extrap_v = 0.0;
};

/// For each eps, builds the right state with rho+ = rho-, n+ = n- and v+
/// solving lambda3(right) = a + eps, solves the classical problem and
/// integrates rho, n, v exactly over [a, b]. Throws domain_error listing
/// the feasible eps range when a + eps >= c.
LimitStudyResult limit_study(const PrimitiveState& left, const ModelParams& params,
                             std::span<const double> epsilons);

/// Overcompression report: the window [b, a], the tested speed, and the
/// six-characteristics chain max_i lambda_i(U+) <= sigma <= min_i
/// lambda_i(U-). Comparisons carry a 1e-13 c numerical slack.
struct EntropyWindowReport {
  double b = 0.0;
  double sigma = 0.0;
  double a = 0.0;
  bool satisfied = false;
  bool six_characteristics_ok = false;
};

EntropyWindowReport entropy_window(double sigma, const RiemannData& data);
EntropyWindowReport entropy_window(const DeltaShock& ds, const RiemannData& data);

} // namespace chaprel

#endif
