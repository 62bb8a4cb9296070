#include "chaprel/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chaprel/eigen.hpp"
#include "chaprel/errors.hpp"
#include "chaprel/wavecurves.hpp"

namespace chaprel {

namespace {

struct GaussRule {
  const double* x;
  const double* w;
  int n;
};

constexpr double kGx4[] = {-0.86113631159405258, -0.33998104358485626,
                           0.33998104358485626, 0.86113631159405258};
constexpr double kGw4[] = {0.34785484513745386, 0.65214515486254614,
                           0.65214515486254614, 0.34785484513745386};

constexpr double kGx8[] = {-0.96028985649753623, -0.79666647741362674,
                           -0.52553240991632899, -0.18343464249564980,
                           0.18343464249564980,  0.52553240991632899,
                           0.79666647741362674,  0.96028985649753623};
constexpr double kGw8[] = {0.10122853629037626, 0.22238103445337447,
                           0.31370664587788729, 0.36268378337836198,
                           0.36268378337836198, 0.31370664587788729,
                           0.22238103445337447, 0.10122853629037626};

GaussRule gauss_rule(int n) {
  if (n == 4) return {kGx4, kGw4, 4};
  return {kGx8, kGw8, 8};
}

// Composite Gauss-Legendre over [a, b].
template <typename F>
double integrate(F&& f, double a, double b, int panels, const GaussRule& g) {
  double acc = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (int i = 0; i < g.n; ++i)
      acc += 0.5 * h * g.w[i] * f(mid + 0.5 * h * g.x[i]);
  }
  return acc;
}

// Normalization of the standard mollifier bump on [-1, 1].
double mollifier_mass() {
  static const double mass = [] {
    const auto f = [](double y) {
      const double r2 = y * y;
      return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
    };
    return integrate(f, -1.0, 1.0, 512, gauss_rule(8));
  }();
  return mass;
}

} // namespace

BumpTestFunction::BumpTestFunction(double t0, double x0, double Rt, double Rx)
    : t0_(t0), x0_(x0), Rt_(Rt), Rx_(Rx) {
  if (!(Rt > 0.0) || !(Rx > 0.0))
    throw domain_error("test function: radii must be positive");
  if (!(t0 - Rt > 0.0))
    throw domain_error("test function: support must lie strictly inside t > 0");
}

BumpTestFunction::Eval BumpTestFunction::eval(double t, double x) const {
  const double ut = (t - t0_) / Rt_;
  const double ux = (x - x0_) / Rx_;
  const double r2 = ut * ut + ux * ux;
  Eval e;
  if (r2 >= 1.0) return e;
  const double s = 1.0 - r2;
  e.phi = std::exp(-1.0 / s);
  const double d = -e.phi / (s * s); // d phi / d(r^2)
  e.phi_t = d * 2.0 * ut / Rt_;
  e.phi_x = d * 2.0 * ux / Rx_;
  return e;
}

double WeightedLineMeasure::pair(const std::function<double(double, double)>& f,
                                 int panels) const {
  const auto integrand = [&](double s) {
    return weight(s) * f(t(s), x(s));
  };
  return integrate(integrand, s0, s1, panels, gauss_rule(8));
}

namespace {

// Times at which the line x = s t crosses the support ellipse boundary.
void crossing_times(const BumpTestFunction& phi, double s,
                    std::vector<double>& out) {
  const double Rt = phi.Rt(), Rx = phi.Rx(), t0 = phi.t0(), x0 = phi.x0();
  const double A = 1.0 / (Rt * Rt) + s * s / (Rx * Rx);
  const double B = -2.0 * t0 / (Rt * Rt) - 2.0 * s * x0 / (Rx * Rx);
  const double C = t0 * t0 / (Rt * Rt) + x0 * x0 / (Rx * Rx) - 1.0;
  const double disc = B * B - 4.0 * A * C;
  if (disc <= 0.0) return;
  const double sq = std::sqrt(disc);
  for (const double r : {(-B + sq) / (2.0 * A), (-B - sq) / (2.0 * A)})
    if (r > t0 - Rt && r < t0 + Rt) out.push_back(r);
}

struct RegionValues {
  std::array<double, 3> U;
  std::array<double, 3> F;
};

RegionValues values_at(const RiemannSolution& sol, double xi) {
  const SamplePoint p = sample(sol, xi);
  const ConservedState u = to_conserved(p.state, sol.data.params);
  return {as_array(u), flux_of(p.state, sol.data.params)};
}

std::array<double, 3> weak_residual_once(const RiemannSolution& sol,
                                         const BumpTestFunction& phi,
                                         const QuadratureSpec& quad,
                                         int panels) {
  const GaussRule g = gauss_rule(quad.gauss_points);
  const double c = sol.data.params.c;
  const bool is_delta = sol.regime() == Regime::Delta;

  std::vector<double> speeds;
  if (is_delta)
    speeds.push_back(sol.delta().sigma);
  else
    speeds.assign(sol.fan().speeds.begin(), sol.fan().speeds.end());

  // t panels conform to the crossing times so every piece is smooth.
  std::vector<double> tbreaks{phi.t0() - phi.Rt(), phi.t0() + phi.Rt()};
  for (const double s : speeds) crossing_times(phi, s, tbreaks);
  std::sort(tbreaks.begin(), tbreaks.end());

  struct TNode {
    double t, wt;
  };
  std::vector<TNode> nodes;
  nodes.reserve((tbreaks.size() - 1) * panels * g.n);
  for (std::size_t seg = 0; seg + 1 < tbreaks.size(); ++seg) {
    const double lo = tbreaks[seg], hi = tbreaks[seg + 1];
    if (!(hi > lo)) continue;
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * h;
      for (int i = 0; i < g.n; ++i)
        nodes.push_back({mid + 0.5 * h * g.x[i], 0.5 * h * g.w[i]});
    }
  }

  const double sigma = is_delta ? sol.delta().sigma : 0.0;
  const double one_m = is_delta ? 1.0 - sigma * sigma / (c * c) : 1.0;
  // Transformed carrier weights per equation, divided by t (they are
  // linear in t with zero intercept).
  std::array<double, 3> wslope{};
  if (is_delta) {
    wslope[0] = sol.delta().h_slope / std::sqrt(one_m);
    wslope[1] = sol.delta().w_slope * sigma / one_m;
    wslope[2] = sol.delta().w_slope / one_m;
  }
  const double eps = quad.mollifier_width;
  const bool mollified = is_delta && quad.delta_mode == DeltaTermMode::Mollified;

  // Per-node partial sums, combined serially afterwards so the result is
  // bitwise independent of the thread count.
  std::vector<std::array<double, 3>> partial(nodes.size());

#pragma omp parallel for schedule(static) if (quad.parallel)
  for (long idx = 0; idx < static_cast<long>(nodes.size()); ++idx) {
    const double t = nodes[idx].t;
    const double wt = nodes[idx].wt;
    std::array<double, 3> acc{};

    const double ut = (t - phi.t0()) / phi.Rt();
    if (std::fabs(ut) < 1.0) {
      const double half = phi.Rx() * std::sqrt(1.0 - ut * ut);
      const double xlo = phi.x0() - half;
      const double xhi = phi.x0() + half;

      std::vector<double> xcuts{xlo};
      for (const double s : speeds) {
        const double xw = s * t;
        if (xw > xlo && xw < xhi) xcuts.push_back(xw);
      }
      xcuts.push_back(xhi);
      std::sort(xcuts.begin(), xcuts.end());

      for (std::size_t r = 0; r + 1 < xcuts.size(); ++r) {
        const double a = xcuts[r], b = xcuts[r + 1];
        if (!(b > a)) continue;
        const RegionValues rv = values_at(sol, 0.5 * (a + b) / t);
        double it = 0.0, ix = 0.0; // integrals of phi_t and phi_x over [a,b]
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
          const double mid = a + (p + 0.5) * h;
          for (int i = 0; i < g.n; ++i) {
            const double x = mid + 0.5 * h * g.x[i];
            const auto e = phi.eval(t, x);
            it += 0.5 * h * g.w[i] * e.phi_t;
            ix += 0.5 * h * g.w[i] * e.phi_x;
          }
        }
        for (int k = 0; k < 3; ++k)
          acc[k] += wt * (rv.U[k] * it + rv.F[k] * ix);
      }

      if (mollified) {
        // Volume-integral delta terms: W_k(t) delta_eps(x - sigma t)
        // against (phi_t + sigma phi_x), integrated over the strip.
        const double mass = mollifier_mass();
        double strip = 0.0;
        const int sp = 16;
        const double h = 2.0 * eps / sp;
        for (int p = 0; p < sp; ++p) {
          const double mid = sigma * t - eps + (p + 0.5) * h;
          for (int i = 0; i < g.n; ++i) {
            const double x = mid + 0.5 * h * g.x[i];
            const double y = (x - sigma * t) / eps;
            const double y2 = y * y;
            if (y2 >= 1.0) continue;
            const double eta = std::exp(-1.0 / (1.0 - y2)) / (mass * eps);
            const auto e = phi.eval(t, x);
            strip += 0.5 * h * g.w[i] * eta * (e.phi_t + sigma * e.phi_x);
          }
        }
        for (int k = 0; k < 3; ++k) acc[k] += wt * wslope[k] * t * strip;
      }
    }
    partial[idx] = acc;
  }

  std::array<double, 3> res{};
  for (const auto& p : partial)
    for (int k = 0; k < 3; ++k) res[k] += p[k];

  if (is_delta && !mollified) {
    // Exact line-measure terms along x = sigma t, panels conforming to
    // the support entry/exit times.
    std::vector<double> cuts;
    crossing_times(phi, sigma, cuts);
    double lo = phi.t0() - phi.Rt(), hi = phi.t0() + phi.Rt();
    if (cuts.size() == 2) {
      lo = std::min(cuts[0], cuts[1]);
      hi = std::max(cuts[0], cuts[1]);
    }
    if (hi > lo) {
      for (int k = 0; k < 3; ++k) {
        WeightedLineMeasure mu;
        mu.s0 = lo;
        mu.s1 = hi;
        mu.t = [](double s) { return s; };
        mu.x = [sigma](double s) { return sigma * s; };
        mu.weight = [k, &wslope](double s) { return wslope[k] * s; };
        res[k] += mu.pair(
            [&](double t, double x) {
              const auto e = phi.eval(t, x);
              return e.phi_t + sigma * e.phi_x;
            },
            panels);
      }
    }
  }

  for (int k = 0; k < 3; ++k) res[k] = std::fabs(res[k]);
  return res;
}

} // namespace

WeakResidualReport weak_residual(const RiemannSolution& sol,
                                 const BumpTestFunction& phi,
                                 const QuadratureSpec& quad) {
  if (quad.panels < 1 || (quad.gauss_points != 4 && quad.gauss_points != 8))
    throw domain_error("weak_residual: bad quadrature spec");

  int panels = quad.panels;
  std::array<double, 3> res = weak_residual_once(sol, phi, quad, panels);
  if (quad.target > 0.0) {
    int doublings = 0;
    while (std::max({res[0], res[1], res[2]}) > quad.target) {
      if (doublings >= quad.max_doublings) {
        std::ostringstream os;
        os << "weak_residual: target " << quad.target << " not reached at "
           << panels << " panels";
        throw quadrature_error(os.str(), res, panels);
      }
      panels *= 2;
      ++doublings;
      res = weak_residual_once(sol, phi, quad, panels);
    }
  }
  return {res, panels};
}

double GrhResidual::max_abs() const {
  return std::max({res[0], res[1], res[2], res[3]});
}

GrhResidual grh_residual(const DeltaShock& ds, const RiemannData& data) {
  const double c = data.params.c;
  const ConservedState ul = to_conserved(data.left, data.params);
  const ConservedState ur = to_conserved(data.right, data.params);
  const auto fl = flux_of(data.left, data.params);
  const auto fr = flux_of(data.right, data.params);
  const double one_m = 1.0 - ds.sigma * ds.sigma / (c * c);

  GrhResidual r;
  // x(t) = sigma t, so dx/dt - v_delta vanishes identically.
  r.res[0] = std::fabs(ds.sigma - ds.sigma);
  r.res[1] = std::fabs(ds.h_slope / std::sqrt(one_m) -
                       (ds.sigma * (ur.D - ul.D) - (fr[0] - fl[0])));
  r.res[2] = std::fabs(ds.w_slope * ds.sigma / one_m -
                       (ds.sigma * (ur.M - ul.M) - (fr[1] - fl[1])));
  r.res[3] = std::fabs(ds.w_slope / one_m -
                       (ds.sigma * (ur.En - ul.En) - (fr[2] - fl[2])));
  return r;
}

LimitStudyResult limit_study(const PrimitiveState& left, const ModelParams& params,
                             std::span<const double> epsilons) {
  require_physical(left, params);
  const double c = params.c;
  const double c2 = c * c;
  const double a = eigenvalues(left, params)[0];

  LimitStudyResult out;
  out.target_rho = 2.0 * (c2 - a * a) / c2;
  out.target_v = 0.0;
  // The right-state family keeps n+ = n-, rho+ = rho-, so both terms of
  // the n-limit coincide with the left one.
  out.target_n = (c2 - a * a) / c2 * 2.0 * left.n /
                 std::sqrt(left.rho * left.rho - 1.0 / c2);

  for (const double eps : epsilons) {
    if (!(eps > 0.0) || !(a + eps < c)) {
      std::ostringstream os;
      os << "limit_study: eps must lie in (0, " << c - a
         << ") for this left state";
      throw domain_error(os.str());
    }
    const double s = a + eps; // target lambda3 of the right state
    const double vp = (s - 1.0 / left.rho) / (1.0 - s / (left.rho * c2));
    const PrimitiveState right{left.n, left.rho, vp};

    const ClassicalFan fan = solve_classical({left, right, params});
    const double A = fan.a(), B = fan.b(), vs = fan.v_star();
    LimitStudyRow row;
    row.eps = eps;
    row.integral_rho = fan.rho_star() * (B - A);
    row.integral_n =
        fan.states[1].n * (vs - A) + fan.states[2].n * (B - vs);
    row.integral_v = vs * (B - A);
    out.rows.push_back(row);
  }

  for (auto& row : out.rows) {
    row.err_rho = std::fabs(row.integral_rho - out.target_rho);
    row.err_n = std::fabs(row.integral_n - out.target_n);
    row.err_v = std::fabs(row.integral_v - out.target_v);
  }

  // Polynomial (Neville) extrapolation of each integral to eps = 0; the
  // integrals are analytic in eps, so this is the Richardson limit for
  // arbitrary node spacing.
  const auto extrapolate = [&](auto getter) {
    std::vector<double> xs, ys;
    for (const auto& row : out.rows) {
      xs.push_back(row.eps);
      ys.push_back(getter(row));
    }
    const std::size_t m = xs.size();
    std::vector<double> cur = ys;
    for (std::size_t lvl = 1; lvl < m; ++lvl)
      for (std::size_t i = 0; i + lvl < m; ++i)
        cur[i] = ((0.0 - xs[i + lvl]) * cur[i] - (0.0 - xs[i]) * cur[i + 1]) /
                 (xs[i] - xs[i + lvl]);
    return m ? cur[0] : 0.0;
  };
  if (!out.rows.empty()) {
    out.extrap_rho = extrapolate([](const LimitStudyRow& r) { return r.integral_rho; });
    out.extrap_n = extrapolate([](const LimitStudyRow& r) { return r.integral_n; });
    out.extrap_v = extrapolate([](const LimitStudyRow& r) { return r.integral_v; });
  }
  return out;
}

EntropyWindowReport entropy_window(double sigma, const RiemannData& data) {
  const auto [a, b] = edge_speeds(data);
  const double slack = 1e-13 * data.params.c;
  EntropyWindowReport rep;
  rep.a = a;
  rep.b = b;
  rep.sigma = sigma;
  rep.satisfied = sigma >= b - slack && sigma <= a + slack;

  const auto lamL = eigenvalues(data.left, data.params);
  const auto lamR = eigenvalues(data.right, data.params);
  rep.six_characteristics_ok =
      *std::max_element(lamR.begin(), lamR.end()) <= sigma + slack &&
      sigma <= *std::min_element(lamL.begin(), lamL.end()) + slack;
  return rep;
}

EntropyWindowReport entropy_window(const DeltaShock& ds, const RiemannData& data) {
  return entropy_window(ds.sigma, data);
}

} // namespace chaprel
