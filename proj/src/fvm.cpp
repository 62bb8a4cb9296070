#include "chaprel/fvm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chaprel/eigen.hpp"
#include "chaprel/errors.hpp"
#include "chaprel/riemann.hpp"

namespace chaprel {

namespace {

// Flux evaluation without admissibility gating; used on clamped fallback
// states inside a delta spike where the exact inversion has no solution.
std::array<double, 3> flux_raw(const PrimitiveState& s, double c) {
  const double g2 = 1.0 / (1.0 - s.v * s.v / (c * c));
  const double q = s.rho - 1.0 / (s.rho * c * c);
  return {s.n * s.v * std::sqrt(g2), q * s.v * s.v * g2 - 1.0 / s.rho,
          q * s.v * g2};
}

double max_char_speed(const PrimitiveState& s, double c) {
  const double c2 = c * c;
  const double l1 = (s.v - 1.0 / s.rho) / (1.0 - s.v / (s.rho * c2));
  const double l3 = (s.v + 1.0 / s.rho) / (1.0 + s.v / (s.rho * c2));
  return std::max(std::fabs(l1), std::fabs(l3));
}

// Exact recovery where possible; otherwise a floored best-effort state
// that keeps the scheme marching through a concentration spike.
CellRecovery recover_or_clamp(const ConservedState& u, const SimConfig& config,
                              const ModelParams& params) {
  try {
    return {from_conserved(u, params), true};
  } catch (const inversion_error&) {
  }
  const double c = params.c;
  const double rho_min = 1.0 / c + config.rho_floor;
  const double v_max = c * (1.0 - config.v_slack);

  CellRecovery rec;
  rec.ok = false;
  if (std::fabs(u.M) <= 1e-14 * std::max(1.0, std::fabs(u.En))) {
    rec.prim = {std::max(u.D, 1e-300), std::max(u.En, rho_min), 0.0};
    return rec;
  }
  const double sgn = u.M > 0.0 ? 1.0 : -1.0;
  double best_v = sgn * 0.5 * v_max;
  double best = std::numeric_limits<double>::infinity();
  const int npts = 257;
  for (int i = 1; i <= npts; ++i) {
    const double v = sgn * v_max * i / npts;
    const double rho = std::max(u.En - u.M * v / (c * c), rho_min);
    const double g = (u.M / v) * (1.0 - v * v / (c * c)) -
                     (rho - 1.0 / (rho * c * c));
    if (std::fabs(g) < best) {
      best = std::fabs(g);
      best_v = v;
    }
  }
  const double rho = std::max(u.En - u.M * best_v / (c * c), rho_min);
  rec.prim = {std::max(u.D, 1e-300) * std::sqrt(1.0 - best_v * best_v / (c * c)),
              rho, best_v};
  return rec;
}

std::array<double, 3> godunov_flux(const PrimitiveState& left,
                                   const PrimitiveState& right,
                                   const ModelParams& params) {
  if (left.n == right.n && left.rho == right.rho && left.v == right.v)
    return flux_raw(left, params.c);
  const RiemannData data{left, right, params};
  if (classify(data) == Regime::Delta)
    throw regime_error("godunov flux met a delta-regime interface; "
                       "rerun with the lax-friedrichs scheme");
  const RiemannSolution sol{data, solve_classical(data)};
  return flux_raw(sample(sol, 0.0).state, params.c);
}

} // namespace

StepResult step(const std::vector<ConservedState>& in,
                std::vector<ConservedState>& out, const Grid1D& grid,
                const SimConfig& config, const ModelParams& params,
                double dt_max) {
  if (!grid.valid()) throw domain_error("step: invalid grid");
  const int n = grid.ncells;
  if (static_cast<int>(in.size()) != n)
    throw domain_error("step: cell count does not match the grid");
  out.resize(n);

  const double c = params.c;
  const bool par = config.parallel;
  const bool godunov = config.flux == FluxScheme::Godunov;

  std::vector<CellRecovery> rec(n);
  std::vector<std::array<double, 3>> cell_flux(n);
  int failures = 0;

#pragma omp parallel for schedule(static) reduction(+ : failures) if (par)
  for (int i = 0; i < n; ++i) {
    rec[i] = recover_or_clamp(in[i], config, params);
    if (!rec[i].ok) ++failures;
    cell_flux[i] = flux_raw(rec[i].prim, c);
  }
  if (godunov && failures > 0) {
    for (int i = 0; i < n; ++i)
      if (!rec[i].ok)
        throw recovery_error(i, "primitive recovery failed in godunov mode");
  }

  double amax = 0.0;
#pragma omp parallel for schedule(static) reduction(max : amax) if (par)
  for (int i = 0; i < n; ++i) {
    const double s = rec[i].ok ? max_char_speed(rec[i].prim, c) : c;
    amax = std::max(amax, s);
  }

  double dt = config.cfl * grid.dx() / amax;
  if (dt_max > 0.0) dt = std::min(dt, dt_max);

  // Interface fluxes, outflow ghosts equal to the edge cells. In LxF mode
  // amax doubles as the viscosity coefficient. Exceptions (delta-regime
  // interfaces in Godunov mode) are carried out of the parallel region.
  std::vector<std::array<double, 3>> fh(n + 1);
  std::exception_ptr flux_error;
#pragma omp parallel for schedule(static) if (par)
  for (int i = 0; i <= n; ++i) {
    const int il = std::max(0, i - 1);
    const int ir = std::min(n - 1, i);
    if (godunov) {
      try {
        fh[i] = godunov_flux(rec[il].prim, rec[ir].prim, params);
      } catch (...) {
#pragma omp critical(chaprel_flux_error)
        if (!flux_error) flux_error = std::current_exception();
      }
    } else {
      for (int k = 0; k < 3; ++k) {
        const double ul = as_array(in[il])[k];
        const double ur = as_array(in[ir])[k];
        fh[i][k] =
            0.5 * (cell_flux[il][k] + cell_flux[ir][k]) - 0.5 * amax * (ur - ul);
      }
    }
  }
  if (flux_error) std::rethrow_exception(flux_error);

  const double lam = dt / grid.dx();
#pragma omp parallel for schedule(static) if (par)
  for (int i = 0; i < n; ++i) {
    out[i].D = in[i].D - lam * (fh[i + 1][0] - fh[i][0]);
    out[i].M = in[i].M - lam * (fh[i + 1][1] - fh[i][1]);
    out[i].En = in[i].En - lam * (fh[i + 1][2] - fh[i][2]);
  }

  StepResult res;
  res.dt = dt;
  res.max_wave_speed = amax;
  res.boundary_flux_left = fh[0];
  res.boundary_flux_right = fh[n];
  res.recovery_failures = failures;
  return res;
}

RunResult run(const std::function<PrimitiveState(double)>& initial,
              const Grid1D& grid, const SimConfig& config,
              const ModelParams& params) {
  if (!grid.valid()) throw domain_error("run: invalid grid");
  if (!(config.t_end > 0.0)) throw domain_error("run: t_end must be positive");
  if (!(config.cfl > 0.0 && config.cfl < 1.0))
    throw domain_error("run: cfl must lie in (0, 1)");

  const int n = grid.ncells;
  std::vector<ConservedState> cur(n), nxt(n);
  for (int i = 0; i < n; ++i) cur[i] = to_conserved(initial(grid.center(i)), params);

  std::vector<double> snaps = config.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  for (const double t : snaps)
    if (!(t > 0.0) || t > config.t_end * (1.0 + 1e-12))
      throw domain_error("run: snapshot times must lie in (0, t_end]");
  if (snaps.empty() || std::fabs(snaps.back() - config.t_end) > 1e-12)
    snaps.push_back(config.t_end);

  RunResult out;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 3; ++k)
      out.initial_totals[k] += as_array(cur[i])[k] * grid.dx();

  const auto record = [&](double t) {
    Snapshot snap;
    snap.t = t;
    snap.cells = cur;
    snap.recovered.resize(n);
    int failures = 0;
    for (int i = 0; i < n; ++i) {
      snap.recovered[i] = recover_or_clamp(cur[i], config, params);
      if (!snap.recovered[i].ok) ++failures;
    }
    // Spike diagnostics: argmax of En (first maximum) and the window mass
    // of En and D over spike_window_cells cells each side, clipped.
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (cur[i].En > cur[imax].En) imax = i;
    const int k = std::max(0, config.spike_window_cells);
    const int lo = std::max(0, imax - k);
    const int hi = std::min(n - 1, imax + k);
    double mass_en = 0.0, mass_d = 0.0;
    for (int i = lo; i <= hi; ++i) {
      mass_en += cur[i].En * grid.dx();
      mass_d += cur[i].D * grid.dx();
    }
    out.diagnostics.times.push_back(t);
    out.diagnostics.spike_position.push_back(grid.center(imax));
    out.diagnostics.window_mass_En.push_back(mass_en);
    out.diagnostics.window_mass_D.push_back(mass_d);
    out.diagnostics.recovery_failures.push_back(failures);
    out.snapshots.push_back(std::move(snap));
  };

  double t = 0.0;
  std::size_t next_snap = 0;
  while (next_snap < snaps.size()) {
    const double target = snaps[next_snap];
    while (t < target * (1.0 - 1e-14)) {
      StepResult sr;
      try {
        sr = step(cur, nxt, grid, config, params, target - t);
      } catch (const regime_error& e) {
        throw regime_error("t = " + std::to_string(t) + ": " + e.what());
      } catch (const recovery_error& e) {
        throw recovery_error(e.cell_index,
                             "t = " + std::to_string(t) + ": " + e.what());
      }
      cur.swap(nxt);
      t += sr.dt;
      for (int k = 0; k < 3; ++k)
        out.accumulated_boundary_flux[k] +=
            sr.dt * (sr.boundary_flux_left[k] - sr.boundary_flux_right[k]);
      ++out.total_steps;
    }
    record(target);
    ++next_snap;
  }
  return out;
}

} // namespace chaprel
