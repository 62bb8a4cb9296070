// Serial vs OpenMP kernel comparison for the finite-volume step and the
// weak-form quadrature.

#include <benchmark/benchmark.h>

#include <vector>

#include "chaprel/fvm.hpp"
#include "chaprel/riemann.hpp"
#include "chaprel/state.hpp"
#include "chaprel/verify.hpp"

namespace {

const chaprel::ModelParams kParams{1.0};

std::vector<chaprel::ConservedState> delta_cells(const chaprel::Grid1D& grid) {
  const chaprel::PrimitiveState left{1.0, 2.0, 0.8};
  const chaprel::PrimitiveState right{1.0, 2.0, -0.8};
  std::vector<chaprel::ConservedState> cells(grid.ncells);
  for (int i = 0; i < grid.ncells; ++i)
    cells[i] = chaprel::to_conserved(grid.center(i) < 0.0 ? left : right, kParams);
  return cells;
}

void bench_step(benchmark::State& state, bool parallel) {
  const chaprel::Grid1D grid{-1.0, 1.0, static_cast<int>(state.range(0))};
  chaprel::SimConfig config;
  config.t_end = 1.0;
  config.flux = chaprel::FluxScheme::LaxFriedrichs;
  config.parallel = parallel;
  auto cells = delta_cells(grid);
  std::vector<chaprel::ConservedState> out(grid.ncells);
  for (auto _ : state) {
    const auto r = chaprel::step(cells, out, grid, config, kParams);
    benchmark::DoNotOptimize(out.data());
    benchmark::DoNotOptimize(r.dt);
  }
  state.SetItemsProcessed(state.iterations() * grid.ncells);
}

void bench_weak_residual(benchmark::State& state, bool parallel) {
  const chaprel::RiemannData data{{1.0, 2.0, 0.5}, {1.0, 2.0, 0.0}, kParams};
  const auto sol = chaprel::solve(data);
  const chaprel::BumpTestFunction phi(0.8, 0.1, 0.5, 0.6);
  chaprel::QuadratureSpec quad;
  quad.panels = static_cast<int>(state.range(0));
  quad.parallel = parallel;
  for (auto _ : state) {
    const auto rep = chaprel::weak_residual(sol, phi, quad);
    benchmark::DoNotOptimize(rep.residual);
  }
}

void step_serial(benchmark::State& s) { bench_step(s, false); }
void step_omp(benchmark::State& s) { bench_step(s, true); }
void weak_serial(benchmark::State& s) { bench_weak_residual(s, false); }
void weak_omp(benchmark::State& s) { bench_weak_residual(s, true); }

BENCHMARK(step_serial)->Arg(2000)->Arg(20000)->Arg(200000);
BENCHMARK(step_omp)->Arg(2000)->Arg(20000)->Arg(200000);
BENCHMARK(weak_serial)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(weak_omp)->Arg(16)->Arg(32)->Arg(64);

} // namespace

BENCHMARK_MAIN();
