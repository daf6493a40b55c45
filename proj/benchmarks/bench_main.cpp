#include <benchmark/benchmark.h>

#include <random>

#include "vrm/engine.hpp"
#include "vrm/generate.hpp"
#include "vrm/hungarian.hpp"
#include "vrm/mv_reference.hpp"
#include "vrm/oracles.hpp"

namespace vrm {
namespace {

void BM_Engine(benchmark::State& state, Family family, Backend backend) {
  const Instance inst = generate({family, static_cast<int>(state.range(0)), 1});
  EngineOptions opt;
  opt.backend = backend;
  opt.record_phi = false;
  for (auto _ : state) benchmark::DoNotOptimize(run(inst, Gamma::standard(), opt));
  state.SetComplexityN(state.range(0));
}
BENCHMARK_CAPTURE(BM_Engine, uniform_int64, Family::Uniform, Backend::Int64)
    ->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK_CAPTURE(BM_Engine, uniform_bigint, Family::Uniform, Backend::BigInt)
    ->RangeMultiplier(4)->Range(16, 256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Engine, escalating_int64, Family::EscalatingLine, Backend::Int64)
    ->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Engine, poisson_int64, Family::Poisson, Backend::Int64)
    ->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMillisecond);

void BM_MvReference(benchmark::State& state) {
  const Instance inst = generate({Family::Uniform, static_cast<int>(state.range(0)), 1});
  for (auto _ : state) benchmark::DoNotOptimize(vrm_with_mv_servers(inst, Gamma::standard()));
}
BENCHMARK(BM_MvReference)->RangeMultiplier(2)->Range(4, 32)->Unit(benchmark::kMillisecond);

void BM_HungarianInt64(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> cell(0, 1'000'000);
  std::vector<std::int64_t> flat(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (auto& c : flat) c = cell(rng);
  for (auto _ : state) benchmark::DoNotOptimize(hungarian_assignment_int64(flat, n));
  state.SetComplexityN(n);
}
BENCHMARK(BM_HungarianInt64)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond)->Complexity();

void BM_OptLattice(benchmark::State& state) {
  const Instance inst = generate({Family::Clustered, static_cast<int>(state.range(0)), 3});
  for (auto _ : state) benchmark::DoNotOptimize(opt_hungarian_lattice(inst));
}
BENCHMARK(BM_OptLattice)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMillisecond);

void BM_OptRational(benchmark::State& state) {
  const Instance inst = generate({Family::Clustered, static_cast<int>(state.range(0)), 3});
  for (auto _ : state) benchmark::DoNotOptimize(opt_hungarian(inst));
}
BENCHMARK(BM_OptRational)->RangeMultiplier(4)->Range(16, 64)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace vrm

BENCHMARK_MAIN();
