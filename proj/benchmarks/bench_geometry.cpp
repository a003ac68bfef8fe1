#include <benchmark/benchmark.h>

#include "spp/dynamics.hpp"
#include "spp/geometry.hpp"

using namespace spp;

static void BM_DilatePositions(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid g = make_grid({-1, -1}, {1, 1}, {n, n}, {false, false});
  const Field f = sdf_axis_box(g, {-0.3, -0.3}, {0.2, 0.1});
  for (auto _ : state) benchmark::DoNotOptimize(dilate_positions(f, 0.1));
}
BENCHMARK(BM_DilatePositions)->Arg(51)->Arg(101)->Unit(benchmark::kMicrosecond);

static void BM_ProjectMinNonposition(benchmark::State& state) {
  const Grid g = make_grid({-1, -1, 0}, {1, 1, kTwoPi}, {71, 71, 45}, {false, false, true});
  const Field f = sdf_disk_cylinder(g, {0.1, 0.2}, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(project_min_nonposition(f));
}
BENCHMARK(BM_ProjectMinNonposition)->Unit(benchmark::kMicrosecond);

static void BM_SampleGradient(benchmark::State& state) {
  const Grid g = make_grid({-1, -1, 0}, {1, 1, kTwoPi}, {71, 71, 45}, {false, false, true});
  const Field f = sdf_disk_cylinder(g, {0.1, 0.2}, 0.3);
  Point x{0.33, -0.21, 1.3, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_gradient(f, x));
    x[0] = x[0] > 0.9 ? -0.9 : x[0] + 0.013;
  }
}
BENCHMARK(BM_SampleGradient);
