#include <benchmark/benchmark.h>

#include "sparsepack/generator.hpp"
#include "sparsepack/lp.hpp"
#include "sparsepack/solvers.hpp"
#include "sparsepack/sparsifier.hpp"

namespace {

using namespace sparsepack;

GapInstance make_instance(int n, int m, std::uint64_t seed) {
  GenParams gp;
  gp.n = n;
  gp.m = m;
  gp.redundancy_target = 8.0;
  gp.seed = seed;
  return generate(gp).instance;
}

void BM_GapExact(benchmark::State& state) {
  const GapInstance inst =
      make_instance(static_cast<int>(state.range(0)),
                    static_cast<int>(state.range(1)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(gap_exact(inst).value);
}
BENCHMARK(BM_GapExact)->Args({100, 1})->Args({100, 2})->Args({200, 2});

void BM_GapLp(benchmark::State& state) {
  const GapInstance inst =
      make_instance(static_cast<int>(state.range(0)), 2, 12);
  for (auto _ : state) benchmark::DoNotOptimize(gap_lp(inst).value);
}
BENCHMARK(BM_GapLp)->Arg(100)->Arg(500)->Arg(1000);

void BM_SparsifyGap(benchmark::State& state) {
  const GapInstance inst =
      make_instance(static_cast<int>(state.range(0)), 2, 13);
  const SparsifyParams params = lp_driven_params(inst);
  for (auto _ : state)
    benchmark::DoNotOptimize(sparsify_gap(inst, params).q.size());
}
BENCHMARK(BM_SparsifyGap)->Arg(500)->Arg(2000);

void BM_KpExact(benchmark::State& state) {
  const GapInstance inst =
      make_instance(static_cast<int>(state.range(0)), 1, 14);
  for (auto _ : state) benchmark::DoNotOptimize(kp_exact(inst).value);
}
BENCHMARK(BM_KpExact)->Arg(200)->Arg(1000);

}  // namespace
