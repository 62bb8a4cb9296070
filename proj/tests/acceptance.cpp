// Acceptance suite: runs every criterion at its stated tolerance and
// prints one pass/fail line each. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "chaprel/eigen.hpp"
#include "chaprel/fvm.hpp"
#include "chaprel/riemann.hpp"
#include "chaprel/rng.hpp"
#include "chaprel/state.hpp"
#include "chaprel/verify.hpp"
#include "chaprel/wavecurves.hpp"
#include "support/generators.hpp"

using namespace chaprel;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel_rh_worst(const PrimitiveState& l, const PrimitiveState& r,
                    double sigma, const ModelParams& p) {
  const auto res = rh_residual(l, r, sigma, p);
  const auto ul = as_array(to_conserved(l, p));
  const auto ur = as_array(to_conserved(r, p));
  const auto fl = flux_of(l, p);
  const auto fr = flux_of(r, p);
  const double rr[3] = {res.res1, res.res2, res.res3};
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double scale = std::max({1.0, std::fabs(sigma * ul[k]),
                                   std::fabs(sigma * ur[k]), std::fabs(fl[k]),
                                   std::fabs(fr[k])});
    worst = std::max(worst, std::fabs(rr[k]) / scale);
  }
  return worst;
}

// --------------------------------------------------------------------------

Outcome criterion_eigenstructure() {
  Outcome out;
  SplitMix64 rng(0xacce0001);
  double worst_res = 0.0, worst_defect = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const ModelParams p = testing::cycled_params(i);
    const PrimitiveState s = testing::random_state_eigen(rng, p);
    const auto pair = assemble_matrices(s, p);
    const auto lam = eigenvalues(s, p);
    const auto r = eigenvectors(s, p);

    out.require(lam[0] < lam[1] && lam[1] < lam[2], "eigenvalue ordering broken");
    const double bn = frobenius_norm(pair.B);
    for (int k = 0; k < 3; ++k) {
      const Vec3 res = (pair.B - lam[k] * pair.A) * normalized(r[k]);
      worst_res = std::max(worst_res, norm(res) / bn);
    }
    const auto d = degeneracy_defect(s, p, 1e-5);
    for (int k = 0; k < 3; ++k) worst_defect = std::max(worst_defect, d[k]);
  }
  out.require(worst_res < 1e-12, "eigenresidual " + fmt(worst_res));
  out.require(worst_defect < 1e-8, "degeneracy defect " + fmt(worst_defect));
  out.detail = "10000 states; eigenresidual<=" + fmt(worst_res) +
               ", defect<=" + fmt(worst_defect);
  return out;
}

Outcome criterion_classical() {
  Outcome out;
  SplitMix64 rng(0xacce0002);
  double worst_star = 0.0, worst_rh = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const ModelParams p = testing::cycled_params(i);
    const RiemannData data = testing::random_classical_data(rng, p);
    const auto fan = solve_classical(data);

    out.require(fan.a() < fan.v_star() && fan.v_star() < fan.b(),
                "star speed outside (a, b)");
    out.require(fan.rho_star() > 1.0 / p.c, "rho* at or below 1/c");

    const double e1 = std::fabs(eigenvalues(fan.states[1], p)[0] - fan.a());
    const double e2 = std::fabs(eigenvalues(fan.states[2], p)[2] - fan.b());
    worst_star = std::max(worst_star, std::max(e1, e2) / p.c);

    for (int w = 0; w < 3; ++w)
      worst_rh = std::max(worst_rh, rel_rh_worst(fan.states[w], fan.states[w + 1],
                                                 fan.speeds[w], p));
  }
  out.require(worst_star < 1e-12, "star relation residual " + fmt(worst_star));
  out.require(worst_rh < 1e-12, "fan RH residual " + fmt(worst_rh));

  const auto fan = solve_classical({{1.0, 2.0, 0.5}, {1.0, 2.0, 0.0}, {1.0}});
  const double rho_err = std::fabs(fan.rho_star() - 3.7320508075688772) /
                         3.7320508075688772;
  const double v_err = std::fabs(fan.v_star() - 0.26794919243112281);
  out.require(rho_err < 1e-12 && v_err < 1e-12, "worked case off");

  out.detail = "10000 fans; star<=" + fmt(worst_star) + ", rh<=" + fmt(worst_rh) +
               "; worked case ok";
  return out;
}

Outcome criterion_delta() {
  Outcome out;
  SplitMix64 rng(0xacce0003);
  double worst_quad = 0.0, worst_grh = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const ModelParams p = testing::cycled_params(i);
    const RiemannData data = testing::random_delta_data(rng, p);
    const auto ds = solve_delta(data);
    const auto [a, b] = edge_speeds(data);

    const double scale =
        std::max({std::fabs(ds.E), std::fabs(ds.F), std::fabs(ds.G), 1.0});
    worst_quad = std::max(
        worst_quad,
        std::fabs(ds.E * ds.sigma * ds.sigma - 2.0 * ds.F * ds.sigma + ds.G) /
            scale);
    out.require(ds.sigma >= b - 1e-13 * p.c && ds.sigma <= a + 1e-13 * p.c,
                "entropy window missed sigma");
    out.require(ds.h_slope >= -1e-12 * scale && ds.w_slope >= -1e-12 * scale,
                "negative weight slope");
    worst_grh = std::max(worst_grh, grh_residual(ds, data).max_abs());
  }
  out.require(worst_quad < 1e-12, "quadratic identity " + fmt(worst_quad));
  out.require(worst_grh < 1e-12, "grh residual " + fmt(worst_grh));

  const auto ds = solve_delta({{1.0, 2.0, 0.8}, {1.0, 2.0, -0.8}, {1.0}});
  out.require(std::fabs(ds.sigma) < 1e-12 &&
                  std::fabs(ds.w_slope - 20.0 / 3.0) < 1e-12 &&
                  std::fabs(ds.h_slope - 8.0 / 3.0) < 1e-12,
              "symmetric case off");

  out.detail = "10000 shocks; quad<=" + fmt(worst_quad) + ", grh<=" +
               fmt(worst_grh) + "; symmetric case ok";
  return out;
}

Outcome criterion_weak_form() {
  Outcome out;
  const RiemannSolution cls = solve({{1.0, 2.0, 0.5}, {1.0, 2.0, 0.0}, {1.0}});
  const RiemannSolution dlt = solve({{1.0, 2.0, 0.8}, {1.0, 2.0, -0.8}, {1.0}});

  SplitMix64 rng(0xacce0004);
  std::vector<BumpTestFunction> bumps;
  for (int i = 0; i < 20; ++i) {
    const double t0 = rng.uniform(0.7, 1.1);
    bumps.emplace_back(t0, rng.uniform(-0.6, 0.8) * t0, rng.uniform(0.25, 0.5),
                       rng.uniform(0.3, 0.6));
  }

  QuadratureSpec quad; // 64 panels
  double worst = 0.0;
  for (const auto* sol : {&cls, &dlt})
    for (const auto& phi : bumps) {
      const auto rep = weak_residual(*sol, phi, quad);
      worst = std::max(worst,
                       std::max({rep.residual[0], rep.residual[1], rep.residual[2]}));
    }
  out.require(worst < 1e-9, "weak residual " + fmt(worst));

  // Refinement decrease, both regimes.
  QuadratureSpec coarse;
  coarse.panels = 8;
  double coarse_worst = 0.0, fine_worst = 0.0;
  for (const auto* sol : {&cls, &dlt}) {
    const auto rc = weak_residual(*sol, bumps[0], coarse);
    const auto rf = weak_residual(*sol, bumps[0], quad);
    coarse_worst = std::max(coarse_worst,
                            std::max({rc.residual[0], rc.residual[1], rc.residual[2]}));
    fine_worst = std::max(fine_worst,
                          std::max({rf.residual[0], rf.residual[1], rf.residual[2]}));
  }
  out.require(fine_worst < coarse_worst, "no decrease under refinement");

  // Mollified cross-check against the line integrals, O(eps) agreement.
  const BumpTestFunction on_line(0.8, 0.0, 0.5, 0.6);
  const auto line = weak_residual(dlt, on_line, quad);
  double prev_diff = 1e300;
  for (const double eps : {1e-2, 1e-3}) {
    QuadratureSpec moll = quad;
    moll.delta_mode = DeltaTermMode::Mollified;
    moll.mollifier_width = eps;
    const auto rep = weak_residual(dlt, on_line, moll);
    double diff = 0.0;
    for (int k = 0; k < 3; ++k)
      diff = std::max(diff, std::fabs(rep.residual[k] - line.residual[k]));
    out.require(diff <= eps, "mollified mismatch " + fmt(diff) + " at eps " + fmt(eps));
    out.require(diff < prev_diff, "mollified agreement not improving");
    prev_diff = diff;
  }

  out.detail = "40 solution/bump pairs; worst residual " + fmt(worst) +
               "; refinement " + fmt(coarse_worst) + "->" + fmt(fine_worst);
  return out;
}

Outcome criterion_singular_limit() {
  Outcome out;
  const std::vector<double> eps = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  const auto res = limit_study({1.0, 2.0, 0.8}, {1.0}, eps);

  out.require(std::fabs(res.target_rho - 1.5) < 1e-12, "rho target");
  out.require(std::fabs(res.target_n - 0.8660254037844386) < 1e-12, "n target");

  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    out.require(res.rows[i].err_rho < res.rows[i - 1].err_rho &&
                    res.rows[i].err_n < res.rows[i - 1].err_n &&
                    res.rows[i].err_v < res.rows[i - 1].err_v,
                "errors not monotone in eps");
  }
  const double e_rho = std::fabs(res.extrap_rho - res.target_rho) / res.target_rho;
  const double e_n = std::fabs(res.extrap_n - res.target_n) / res.target_n;
  const double e_v = std::fabs(res.extrap_v);
  out.require(e_rho <= 1e-6 && e_n <= 1e-6 && e_v <= 1e-6,
              "extrapolation off: " + fmt(e_rho) + "/" + fmt(e_n) + "/" + fmt(e_v));
  out.detail = "extrapolation errors rho " + fmt(e_rho) + ", n " + fmt(e_n) +
               ", v " + fmt(e_v);
  return out;
}

Outcome criterion_fvm() {
  Outcome out;
  const ModelParams p{1.0};
  const PrimitiveState lc{1.0, 2.0, 0.5}, rc{1.0, 2.0, 0.0};
  const RiemannSolution exact = solve({lc, rc, p});

  const auto l1_error = [&](int ncells) {
    const Grid1D grid{-1.0, 1.0, ncells};
    SimConfig cfg;
    cfg.t_end = 0.5;
    cfg.flux = FluxScheme::Godunov;
    const auto result =
        run([&](double x) { return x < 0.0 ? lc : rc; }, grid, cfg, p);
    const auto& snap = result.snapshots.back();
    double l1 = 0.0;
    for (int i = 0; i < ncells; ++i) {
      const auto sp = sample(exact, grid.center(i) / snap.t);
      l1 += std::fabs(snap.recovered[i].prim.rho - sp.state.rho) * grid.dx();
    }
    return l1;
  };
  const double e400 = l1_error(400);
  const double e800 = l1_error(800);
  const double ratio = e400 / e800;
  out.require(ratio >= 1.4 && ratio <= 2.6,
              "L1 refinement ratio " + fmt(ratio) + " outside [1.4, 2.6]");

  const PrimitiveState ld{1.0, 2.0, 0.8}, rd{1.0, 2.0, -0.8};
  const Grid1D grid{-1.0, 1.0, 2000};
  SimConfig cfg;
  cfg.t_end = 0.5;
  cfg.flux = FluxScheme::LaxFriedrichs;
  cfg.snapshot_times = {0.1, 0.2, 0.3, 0.4, 0.5};
  const auto result =
      run([&](double x) { return x < 0.0 ? ld : rd; }, grid, cfg, p);
  const auto& d = result.diagnostics;
  out.require(std::fabs(d.spike_position.back()) <= 5.0 * grid.dx(),
              "spike " + fmt(d.spike_position.back()) + " beyond 5 dx");
  for (std::size_t i = 1; i < d.window_mass_En.size(); ++i)
    out.require(d.window_mass_En[i] > d.window_mass_En[i - 1],
                "window mass not increasing");

  out.detail = "godunov L1 ratio " + fmt(ratio) + "; spike at " +
               fmt(d.spike_position.back()) + ", mass " +
               fmt(d.window_mass_En.front()) + "->" + fmt(d.window_mass_En.back());
  return out;
}

Outcome criterion_determinism() {
  Outcome out;
  const std::string cli = CHAPREL_CLI_PATH;
  const std::string configs = CHAPREL_CONFIG_DIR;
  const fs::path dir = fs::temp_directory_path() / "chaprel_acceptance";
  fs::create_directories(dir);

  const auto capture = [&](const std::string& args, const std::string& name) {
    const fs::path f = dir / name;
    const std::string cmd = cli + " " + args + " > " + f.string() + " 2>&1";
    if (std::system(cmd.c_str()) == -1) return std::string("<spawn failure>");
    std::ifstream in(f, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };

  int checked = 0;
  for (const std::string cfg :
       {"classical.json", "delta_symmetric.json", "identity.json"}) {
    const std::string solve_args = "solve --config " + configs + "/" + cfg;
    const std::string a = capture(solve_args, "a.txt");
    const std::string b = capture(solve_args, "b.txt");
    out.require(!a.empty() && a == b, "solve output differs for " + cfg);

    const std::string sample_args = "sample --config " + configs + "/" + cfg +
                                    " --t 1 --xmin -1 --xmax 1 --npoints 101";
    const std::string c = capture(sample_args, "c.txt");
    const std::string d = capture(sample_args, "d.txt");
    out.require(!c.empty() && c == d, "sample output differs for " + cfg);
    ++checked;
  }
  out.detail = std::to_string(checked) + " configs, solve+sample byte-identical";
  return out;
}

} // namespace

int main() {
  struct Criterion {
    const char* name;
    double time_limit;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria = {
      {"eigenstructure", 10.0, criterion_eigenstructure},
      {"classical solver", 10.0, criterion_classical},
      {"delta solver", 10.0, criterion_delta},
      {"distributional verification", 60.0, criterion_weak_form},
      {"singular limit", 5.0, criterion_singular_limit},
      {"fvm cross-check", 120.0, criterion_fvm},
      {"determinism", 5.0, criterion_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const double t0 = now_seconds();
    Outcome out;
    try {
      out = criteria[i].fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double dt = now_seconds() - t0;
    if (dt > criteria[i].time_limit) {
      out.pass = false;
      out.detail += " [over time budget " + fmt(criteria[i].time_limit) + " s]";
    }
    if (!out.pass) ++failures;
    std::printf("[%s] %zu. %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL",
                i + 1, criteria[i].name, out.detail.c_str(), dt);
  }
  return failures;
}
