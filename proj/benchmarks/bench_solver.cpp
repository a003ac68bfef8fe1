#include <benchmark/benchmark.h>

#include "spp/dynamics.hpp"
#include "spp/geometry.hpp"
#include "spp/hj_solver.hpp"

using namespace spp;

namespace {

Grid bench_grid(std::size_t n) { return make_grid({-1, -1, 0}, {1, 1, kTwoPi}, {n, n, 36}, {false, false, true}); }

}  // namespace

// One substep of the variational inequality; range(0) is the position count,
// range(1) the spatial order.
static void BM_StepBackwardVi(benchmark::State& state) {
  const Grid g = bench_grid(static_cast<std::size_t>(state.range(0)));
  const Field target = sdf_disk_cylinder(g, {0.5, 0.0}, 0.2);
  const Field wall = sdf_axis_box(g.position_grid(), {-0.1, -0.5}, {0.1, 0.5});
  DubinsHamiltonian h(HamiltonianMode::BasicReach, DubinsParams::fixed_speed(1.0, 1.0));
  h.bind(g);
  const int order = static_cast<int>(state.range(1));
  const double dt = cfl_time_step(g, h.dissipation(), 0.5);
  for (auto _ : state) {
    Field next = step_backward_vi(target, 0.0, dt, target, &wall, h, order);
    benchmark::DoNotOptimize(next);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_StepBackwardVi)->Args({41, 2})->Args({71, 2})->Args({71, 5})->Unit(benchmark::kMillisecond);

// A short backward solve at the planner's default settings.
static void BM_SolveHalfSecond(benchmark::State& state) {
  const Grid g = bench_grid(51);
  DubinsHamiltonian h(HamiltonianMode::ReachUnderDstb, DubinsParams{0.5, 1.0, 1.0, 0.1, 0.2, {}});
  SolveRequest req;
  req.target = sdf_disk_cylinder(g, {0.5, 0.0}, 0.2);
  req.hamiltonian = &h;
  req.t_start = -0.5;
  req.t_end = 0.0;
  req.spatial_order = 5;
  for (auto _ : state) benchmark::DoNotOptimize(solve(req));
}
BENCHMARK(BM_SolveHalfSecond)->Unit(benchmark::kMillisecond);
