#ifndef CHAPREL_FVM_HPP
#define CHAPREL_FVM_HPP

#include <array>
#include <functional>
#include <vector>

#include "chaprel/state.hpp"

namespace chaprel {

struct Grid1D {
  double xmin = 0.0;
  double xmax = 0.0;
  int ncells = 0;

  double dx() const { return (xmax - xmin) / ncells; }
  double center(int i) const { return xmin + (i + 0.5) * dx(); }
  bool valid() const { return ncells >= 8 && xmin < xmax; }
};

enum class FluxScheme { Godunov, LaxFriedrichs };

struct SimConfig {
  double cfl = 0.4;
  double t_end = 0.0;
  FluxScheme flux = FluxScheme::LaxFriedrichs;
  // Floors for primitive-recovery diagnostics and the clamped fallback:
  // minimum rho - 1/c and minimum 1 - |v|/c.
  double rho_floor = 1e-10;
  double v_slack = 1e-10;
  std::vector<double> snapshot_times; // ascending; t_end appended if absent
  int spike_window_cells = 10;        // half-width k of the mass window
  bool parallel = true;               // OpenMP kernels; serial otherwise
};

/// Per-cell recovery attempt. `ok` false means the conserved triple left
/// the image of the admissible region (possible inside a delta spike);
/// `prim` then holds the clamped fallback used for fluxes.
struct CellRecovery {
  PrimitiveState prim;
  bool ok = false;
};

struct StepResult {
  double dt = 0.0;
  double max_wave_speed = 0.0;
  // Interface fluxes through the domain edges (for conservation audits).
  std::array<double, 3> boundary_flux_left{};
  std::array<double, 3> boundary_flux_right{};
  int recovery_failures = 0;
};

/// One first-order conservative update with outflow (zero-gradient)
/// boundaries. dt = cfl dx / max|lambda| (capped at dt_max when
/// positive); in Lax-Friedrichs mode max|lambda| doubles as the
/// numerical viscosity coefficient. Godunov mode fluxes each interface
/// with the exact solution sampled at xi = 0 and refuses delta-regime
/// interfaces (regime_error) and unrecoverable cells (recovery_error).
StepResult step(const std::vector<ConservedState>& in,
                std::vector<ConservedState>& out, const Grid1D& grid,
                const SimConfig& config, const ModelParams& params,
                double dt_max = 0.0);

struct Snapshot {
  double t = 0.0;
  std::vector<ConservedState> cells;
  std::vector<CellRecovery> recovered;
};

/// Spike tracking per snapshot: argmax of En and the mass of En and D in
/// a window of spike_window_cells cells on each side of it (clipped to
/// the domain).
struct ConcentrationDiagnostics {
  std::vector<double> times;
  std::vector<double> spike_position;
  std::vector<double> window_mass_En;
  std::vector<double> window_mass_D;
  std::vector<int> recovery_failures;
};

struct RunResult {
  std::vector<Snapshot> snapshots;
  ConcentrationDiagnostics diagnostics;
  std::array<double, 3> initial_totals{};          // sum U dx at t = 0
  std::array<double, 3> accumulated_boundary_flux{}; // net influx integral
  long total_steps = 0;
};

/// Time-steps initial data to t_end, emitting snapshots at the requested
/// times (dt is shortened to land on them exactly). Step errors propagate
/// with a time stamp prepended.
RunResult run(const std::function<PrimitiveState(double)>& initial,
              const Grid1D& grid, const SimConfig& config,
              const ModelParams& params);

} // namespace chaprel

#endif
