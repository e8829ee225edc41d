#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crossover/colgen.hpp"
#include "crossover/instances.hpp"
#include "crossover/ipm.hpp"
#include "crossover/random.hpp"
#include "crossover/sinkhorn.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace crossover;

namespace {

std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::vector<int> identity_order(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

McfProblem random_mcf(int nodes, int arcs, std::uint64_t seed, bool real_costs = false) {
  McfSpec spec;
  spec.nodes = nodes;
  spec.arcs = arcs;
  spec.seed = seed;
  McfProblem p = gen_mcf(spec);
  if (real_costs) {
    Rng rng(seed + 77);
    for (double& c : p.cost) c = rng.uniform(1.0, 100.0);
  }
  return p;
}

bool optimal_within_eps(const StandardLp& lp, const SimplexResult& r, double eps) {
  const DualSolution d = reduced_costs(lp, r.basis);
  for (int j = 0; j < lp.num_cols(); ++j) {
    if (r.basis.status[j] == VarStatus::NonbasicLower && lp.lower[j] < lp.upper[j] && d.reduced_costs[j] < -eps) return false;
    if (r.basis.status[j] == VarStatus::NonbasicUpper && lp.lower[j] < lp.upper[j] && d.reduced_costs[j] > eps) return false;
  }
  return true;
}

}  // namespace

TEST(ColBi, SingleArc) {
  McfProblem p;
  p.num_nodes = 2;
  p.arcs = {{0, 1}};
  p.cost = {1};
  p.capacity = {5};
  p.supply = {1, -1};
  const StandardLp lp = mcf_to_lp(p);
  const std::vector<int> order = {0};
  const ColBiResult r = col_bi(lp, order);
  ASSERT_EQ(r.status, ColGenStatus::Success);
  EXPECT_EQ(r.master_iterations, 1);
  EXPECT_EQ(r.x[0], 1.0);
  EXPECT_EQ(r.basis.status[0], VarStatus::Basic);
  EXPECT_EQ(r.basis.num_basic(), 2);
}

TEST(ColBi, SupportFirstOrderingFindsVertexQuickly) {
  for (int seed = 0; seed < 10; ++seed) {
    const McfProblem p = random_mcf(30, 120, seed, true);
    const StandardLp lp = mcf_to_lp(p);
    const SimplexResult opt = solve(lp);
    ASSERT_EQ(opt.status, SimplexStatus::Optimal);
    std::vector<int> order;
    std::vector<char> seen(lp.num_cols(), 0);
    for (int j = 0; j < lp.num_cols(); ++j) {
      if (opt.x[j] > 0.0) {
        order.push_back(j);
        seen[j] = 1;
      }
    }
    for (int j = 0; j < lp.num_cols(); ++j) {
      if (!seen[j]) order.push_back(j);
    }
    const int support = static_cast<int>(std::count(seen.begin(), seen.end(), 1));
    const ColBiResult r = col_bi(lp, order);
    ASSERT_EQ(r.status, ColGenStatus::Success);
    EXPECT_LE(r.master_iterations, static_cast<int>(std::ceil(std::log2(support))) + 1);
    EXPECT_LE(lp.residual(r.x).lpNorm<Eigen::Infinity>(), 1e-9);
    EXPECT_TRUE(vertex_check(lp, r.x).is_vertex);
    EXPECT_GE(lp.objective(r.x), opt.objective - 1e-9 * opt.objective);
    // Once the final prefix holds the whole support, the restricted optimum is the optimum.
    if ((1 << r.master_iterations) >= support) {
      EXPECT_LE((r.x - opt.x).lpNorm<Eigen::Infinity>(), 1e-9) << "seed " << seed;
    }
  }
}

TEST(ColBi, InfeasibleSupply) {
  McfProblem p;
  p.num_nodes = 2;
  p.arcs = {{0, 1}};
  p.cost = {1};
  p.capacity = {1};
  p.supply = {2, -2};
  const StandardLp lp = mcf_to_lp(p);
  const std::vector<int> order = {0};
  EXPECT_EQ(col_bi(lp, order).status, ColGenStatus::Infeasible);
}

TEST(ColBi, RejectsNonPermutation) {
  const StandardLp lp = mcf_to_lp(fixtures::triangle());
  const std::vector<int> order = {0, 0, 1};
  EXPECT_THROW(col_bi(lp, order), std::invalid_argument);
}

TEST(ColBi, ArtificialsAndObjectivesNeverIncrease) {
  for (int seed = 0; seed < 10; ++seed) {
    const McfProblem p = random_mcf(40, 160, seed);
    const StandardLp lp = mcf_to_lp(p);
    const ColBiResult r = col_bi(lp, identity_order(lp.num_cols()));
    ASSERT_EQ(r.status, ColGenStatus::Success);
    for (std::size_t k = 1; k < r.artificial_counts.size(); ++k) {
      EXPECT_LE(r.artificial_counts[k], r.artificial_counts[k - 1]);
      EXPECT_LE(r.master_objectives[k], r.master_objectives[k - 1] + 1e-9 * std::abs(r.master_objectives[k - 1]));
    }
    EXPECT_LE(lp.residual(r.x).lpNorm<Eigen::Infinity>(), 1e-9);
    EXPECT_TRUE(vertex_check(lp, r.x).is_vertex);
  }
}

TEST(ColOpt, OptimalStartNeedsNoMasterIterations) {
  const StandardLp lp = mcf_to_lp(random_mcf(20, 60, 1));
  const SimplexResult opt = solve(lp);
  ColOptStats stats;
  const SimplexResult r = col_opt(lp, opt.basis, identity_order(lp.num_cols()), {}, &stats);
  ASSERT_EQ(r.status, SimplexStatus::Optimal);
  EXPECT_EQ(stats.master_iterations, 0);
  EXPECT_EQ(stats.simplex_iterations, 0);
  EXPECT_EQ(r.objective, opt.objective);
}

TEST(ColOpt, MatchesFlowOracleExactly) {
  for (int seed = 0; seed < 20; ++seed) {
    const McfProblem p = random_mcf(20, 50, 100 + seed);
    const StandardLp lp = mcf_to_lp(p);
    const ColBiResult bi = col_bi(lp, identity_order(lp.num_cols()));
    ASSERT_EQ(bi.status, ColGenStatus::Success);
    const SimplexResult r = col_opt(lp, bi.basis, identity_order(lp.num_cols()));
    ASSERT_EQ(r.status, SimplexStatus::Optimal);
    EXPECT_EQ(r.objective, oracle::min_cost_flow(p).objective) << "seed " << seed;
    EXPECT_TRUE(optimal_within_eps(lp, r, 1e-9));
  }
}

TEST(ColOpt, LargeEpsilonStopsWithinSlack) {
  for (int seed = 0; seed < 10; ++seed) {
    const McfProblem p = random_mcf(20, 60, 200 + seed);
    const StandardLp lp = mcf_to_lp(p);
    const oracle::FlowOptimum best = oracle::min_cost_flow(p);
    const ColBiResult bi = col_bi(lp, identity_order(lp.num_cols()));
    ColGenConfig cfg;
    cfg.epsilon = 1.0;
    const SimplexResult r = col_opt(lp, bi.basis, identity_order(lp.num_cols()), cfg);
    ASSERT_EQ(r.status, SimplexStatus::Optimal);
    const Vec xstar = Eigen::Map<const Vec>(best.flow.data(), static_cast<Eigen::Index>(best.flow.size()));
    EXPECT_GE(r.objective, best.objective);
    EXPECT_LE(r.objective, best.objective + cfg.epsilon * (r.x - xstar).lpNorm<1>() + 1e-9);
    EXPECT_LE(r.objective, lp.objective(bi.x));
  }
}

TEST(Cnet, OptimalVertexIsFixedPoint) {
  for (int seed = 0; seed < 10; ++seed) {
    const McfProblem p = random_mcf(25, 90, 300 + seed, true);
    const SimplexResult opt = solve(mcf_to_lp(p));
    const SimplexResult r = cnet_crossover(p, to_std(opt.x));
    ASSERT_EQ(r.status, SimplexStatus::Optimal);
    EXPECT_LE((r.x - opt.x).lpNorm<Eigen::Infinity>(), 1e-9) << "seed " << seed;
  }
}

TEST(Cnet, IpmStartMatchesOracle) {
  for (int seed = 0; seed < 20; ++seed) {
    const McfProblem p = random_mcf(30, 110, 400 + seed);
    const StandardLp lp = mcf_to_lp(p);
    const PrimalDualPoint pt = ipm_solve(lp, 0.01);
    ASSERT_EQ(pt.status, IpmStatus::Converged);
    CrossoverStats stats;
    const SimplexResult r = cnet_crossover(p, to_std(pt.x), {}, &stats);
    ASSERT_EQ(r.status, SimplexStatus::Optimal);
    EXPECT_EQ(r.objective, oracle::min_cost_flow(p).objective) << "seed " << seed;
    EXPECT_TRUE(vertex_check(lp, r.x).is_vertex);
    EXPECT_GE(stats.identify_ms, 0.0);
    EXPECT_GE(stats.reoptimize_ms, 0.0);
  }
}

TEST(Cnet, DenseStartMatchesOracle) {
  for (int seed = 0; seed < 10; ++seed) {
    const McfProblem p = random_mcf(25, 80, 500 + seed);
    const StandardLp lp = mcf_to_lp(p);
    const SimplexResult opt = solve(lp);
    const Vec dense = synthetic_interior(lp, opt.x, analytic_center(lp), 1.0, 0.0, seed);
    EXPECT_GT(dense.minCoeff(), 0.0);
    const SimplexResult r = cnet_crossover(p, to_std(dense));
    ASSERT_EQ(r.status, SimplexStatus::Optimal);
    EXPECT_EQ(r.objective, oracle::min_cost_flow(p).objective) << "seed " << seed;
  }
}

TEST(Cnet, GeneralLpMatchesVertexOracle) {
  for (int seed = 0; seed < 20; ++seed) {
    const StandardLp lp = fixtures::degenerate_lp(1 + seed % 4, 600 + seed, 4, 8);
    const PrimalDualPoint pt = ipm_solve(lp, 0.01);
    const SimplexResult r = cnet_crossover(lp, pt.x);
    ASSERT_EQ(r.status, SimplexStatus::Optimal);
    const double best = oracle::vertex_optimum(lp).value;
    EXPECT_NEAR(r.objective, best, 1e-9 * (1 + std::abs(best))) << "seed " << seed;
    EXPECT_TRUE(oracle::is_vertex(lp, r.x));
  }
}

TEST(Tnet, SinkhornStartMatchesOracle) {
  for (int seed = 0; seed < 10; ++seed) {
    const OtProblem p = gen_ot_random(12, 15, seed);
    const SinkhornResult sk = sinkhorn(p);
    CrossoverStats stats;
    const SimplexResult r = tnet_crossover(p, to_std(sk.flat_plan()), {}, &stats);
    ASSERT_EQ(r.status, SimplexStatus::Optimal);
    const double best = oracle::min_cost_flow(ot_to_mcf(p)).objective;
    EXPECT_NEAR(r.objective, best, 1e-9 * (1 + best)) << "seed " << seed;
    EXPECT_TRUE(vertex_check(ot_to_lp(p), r.x).is_vertex);
  }
}

TEST(Tnet, RejectsWrongPlanSize) {
  const OtProblem p = gen_ot_random(3, 3, 1);
  EXPECT_THROW(tnet_crossover(p, std::vector<double>(8, 0.1)), std::invalid_argument);
}
