#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "spp/dynamics.hpp"

using namespace spp;

namespace {

std::vector<Vec3> costates(std::size_t n) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> out(n);
  for (Vec3& l : out) l = {u(rng), u(rng), u(rng)};
  return out;
}

}  // namespace

static void BM_HamiltonianUnderDisturbance(benchmark::State& state) {
  const auto ls = costates(1024);
  const DubinsParams p{0.5, 1.0, 1.0, 0.1, 0.2, {}};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hamiltonian(ls[i & 1023], {0.0, 0.0, 0.7}, HamiltonianMode::ReachUnderDstb, p));
    ++i;
  }
}
BENCHMARK(BM_HamiltonianUnderDisturbance);

static void BM_ErrorHamiltonian(benchmark::State& state) {
  const auto ls = costates(1024);
  TrackingErrorParams tp;
  tp.tracker = {0.5, 1.0, 1.0, 0.1, 0.2, {}};
  tp.planner = DubinsParams::fixed_speed(0.75, 0.6);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(error_hamiltonian(ls[i & 1023], {0.02, -0.01, 0.1}, tp));
    ++i;
  }
}
BENCHMARK(BM_ErrorHamiltonian);
