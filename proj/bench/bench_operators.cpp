// SPDX-License-Identifier: Apache-2.0
// Parallel gather kernels against the serial scatter reference.
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "apdiff/apcore.hpp"
#include "apdiff/operators.hpp"
#include "apdiff/problems.hpp"

using namespace apdiff;

namespace {

struct Fixture {
  Grid grid;
  ops::OperatorContext ctx;
  NodeField theta;
  CellField chi;
  CellField cell_w;
  NodeField node_w;

  explicit Fixture(int k)
      : grid(Grid::square_mesh({1.0, 2.0, 1.0, 2.0}, k)),
        ctx(sample_cell_vec(problems::analytic::direction_polar, grid)),
        theta(grid),
        chi(grid),
        cell_w(grid, 1.0),
        node_w(grid, 1.0) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& v : theta.data()) v = u(rng);
    for (double& v : chi.data()) v = u(rng);
  }
};

void BM_DhParallel(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ops::apply_dh(f.theta, f.ctx));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.grid.interior_cell_count()));
}

void BM_DhReference(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ops::reference::apply_dh(f.theta, f.ctx));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.grid.interior_cell_count()));
}

void BM_DhStarParallel(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ops::apply_dh_star(f.chi, f.ctx));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.grid.interior_node_count()));
}

void BM_DhStarReference(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ops::reference::apply_dh_star(f.chi, f.ctx));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.grid.interior_node_count()));
}

void BM_ComposeParallel(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(ops::compose_second_order(f.chi, f.cell_w, f.node_w, f.ctx));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.grid.interior_cell_count()));
}

void BM_ComposeReference(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(ops::reference::compose_second_order(f.chi, f.cell_w, f.node_w, f.ctx));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.grid.interior_cell_count()));
}

void BM_LinearApSolve(benchmark::State& state) {
  const Grid g = Grid::square_mesh({1.0, 2.0, 1.0, 2.0}, static_cast<int>(state.range(0)));
  const auto c = problems::case_linear_variable(g, 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(ap::solve_linear_ap(*c.linear));
}

}  // namespace

BENCHMARK(BM_DhParallel)->Arg(100)->Arg(400)->Arg(1000);
BENCHMARK(BM_DhReference)->Arg(100)->Arg(400)->Arg(1000);
BENCHMARK(BM_DhStarParallel)->Arg(100)->Arg(400)->Arg(1000);
BENCHMARK(BM_DhStarReference)->Arg(100)->Arg(400)->Arg(1000);
BENCHMARK(BM_ComposeParallel)->Arg(100)->Arg(400)->Arg(1000);
BENCHMARK(BM_ComposeReference)->Arg(100)->Arg(400)->Arg(1000);
BENCHMARK(BM_LinearApSolve)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
