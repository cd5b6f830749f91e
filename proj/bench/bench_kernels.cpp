// Serial reference vs OpenMP kernels: batch decision and the grid oracle.
//
//   ./build/bench/farkas_bench --benchmark_filter=Batch
//   OMP_NUM_THREADS=4 ./build/bench/farkas_bench

#include <vector>

#include <benchmark/benchmark.h>

#include "farkas/instances.hpp"
#include "farkas/oracle.hpp"
#include "farkas/parallel.hpp"
#include "farkas/random.hpp"

using namespace farkas;

namespace {

std::vector<ConeInstance> make_batch(std::size_t count, Index dim) {
  std::vector<ConeInstance> out;
  Rng rng(99);
  for (std::size_t k = 0; k < count; ++k) {
    GenSpec s;
    s.m = dim;
    s.n = dim;
    s.branch = static_cast<ForcedBranch>(k % 3);
    s.seed = rng.next();
    out.push_back(generate(s).instance);
  }
  return out;
}

void BM_DecideBatch(benchmark::State& state, Execution exec) {
  const auto batch = make_batch(static_cast<std::size_t>(state.range(0)), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(decide_batch(batch, kBaseTol, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Sweep(benchmark::State& state, Execution exec) {
  const auto batch = make_batch(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(dichotomy_sweep(batch, kBaseTol, true, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GridMinDistance(benchmark::State& state, Execution exec) {
  const auto inst = make_batch(1, state.range(0)).front();
  const int steps = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::grid_min_distance(inst, 2.0, steps, exec));
}

}  // namespace

BENCHMARK_CAPTURE(BM_DecideBatch, serial, Execution::Serial)->Args({4096, 4})->Args({1024, 8});
BENCHMARK_CAPTURE(BM_DecideBatch, parallel, Execution::Parallel)->Args({4096, 4})->Args({1024, 8});
BENCHMARK_CAPTURE(BM_Sweep, serial, Execution::Serial)->Arg(1024);
BENCHMARK_CAPTURE(BM_Sweep, parallel, Execution::Parallel)->Arg(1024);
BENCHMARK_CAPTURE(BM_GridMinDistance, serial, Execution::Serial)->Args({3, 60})->Args({4, 24});
BENCHMARK_CAPTURE(BM_GridMinDistance, parallel, Execution::Parallel)->Args({3, 60})->Args({4, 24});

BENCHMARK_MAIN();
