#include <benchmark/benchmark.h>

#include "crossover/instances.hpp"
#include "crossover/ipm.hpp"
#include "crossover/simplex.hpp"
#include "crossover/sinkhorn.hpp"

using namespace crossover;

namespace {

McfProblem network(int nodes) {
  McfSpec spec;
  spec.nodes = nodes;
  spec.arcs = 5 * nodes;
  spec.seed = 42;
  return gen_mcf(spec);
}

void BM_SimplexCold(benchmark::State& state) {
  const StandardLp lp = mcf_to_lp(network(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(solve(lp).objective);
}
BENCHMARK(BM_SimplexCold)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Ipm(benchmark::State& state) {
  const StandardLp lp = mcf_to_lp(network(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(ipm_solve(lp, 0.01).gap);
}
BENCHMARK(BM_Ipm)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Sinkhorn(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const OtProblem p = gen_ot_random(n, n, 42);
  for (auto _ : state) benchmark::DoNotOptimize(sinkhorn(p).iterations);
}
BENCHMARK(BM_Sinkhorn)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
