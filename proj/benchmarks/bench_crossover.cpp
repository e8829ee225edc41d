#include <benchmark/benchmark.h>

#include <vector>

#include "crossover/colgen.hpp"
#include "crossover/instances.hpp"
#include "crossover/ipm.hpp"
#include "crossover/netflow.hpp"
#include "crossover/sinkhorn.hpp"

using namespace crossover;

namespace {

void BM_Cnet(benchmark::State& state) {
  McfSpec spec;
  spec.nodes = static_cast<int>(state.range(0));
  spec.arcs = 5 * spec.nodes;
  spec.seed = 42;
  const McfProblem p = gen_mcf(spec);
  const PrimalDualPoint point = ipm_solve(mcf_to_lp(p), 0.01);
  const std::vector<double> flow(point.x.data(), point.x.data() + point.x.size());
  for (auto _ : state) benchmark::DoNotOptimize(cnet_crossover(p, flow).objective);
}
BENCHMARK(BM_Cnet)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Tnet(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const OtProblem p = gen_ot_random(n, n, 42);
  const Vec plan = sinkhorn(p).flat_plan();
  for (auto _ : state) {
    benchmark::DoNotOptimize(tnet_crossover(p, std::span<const double>(plan.data(), plan.size())).objective);
  }
}
BENCHMARK(BM_Tnet)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_TreeBiPush(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const OtProblem p = gen_ot_random(n, n, 42);
  const Vec plan = sinkhorn(p).flat_plan();
  for (auto _ : state) {
    const TreeSolution tree = tree_bi(p, std::span<const double>(plan.data(), plan.size()));
    benchmark::DoNotOptimize(push_ot(p, tree).loops);
  }
}
BENCHMARK(BM_TreeBiPush)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
