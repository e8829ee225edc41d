#include <gtest/gtest.h>

#include "crossover/instances.hpp"
#include "crossover/model.hpp"
#include "crossover/random.hpp"
#include "crossover/simplex.hpp"
#include "fixtures.hpp"

using namespace crossover;

namespace {

McfProblem single_arc(double cap = 10.0) {
  McfProblem p;
  p.num_nodes = 2;
  p.arcs = {{0, 1}};
  p.cost = {3.0};
  p.capacity = {cap};
  p.supply = {1.0, -1.0};
  return p;
}

}  // namespace

TEST(McfToLp, SingleArcIncidence) {
  const StandardLp lp = mcf_to_lp(single_arc());
  const DenseMat a(lp.a);
  ASSERT_EQ(a.rows(), 2);
  ASSERT_EQ(a.cols(), 1);
  EXPECT_EQ(a(0, 0), -1.0);
  EXPECT_EQ(a(1, 0), 1.0);
  EXPECT_EQ(lp.lower[0], 0.0);
  EXPECT_EQ(lp.upper[0], 10.0);
  // b = -supply under the tail -1 / head +1 convention.
  EXPECT_EQ(lp.b[0], -1.0);
  EXPECT_EQ(lp.b[1], 1.0);
}

TEST(McfToLp, TriangleColumnsHaveOneTailAndOneHead) {
  const DenseMat a(mcf_to_lp(fixtures::triangle()).a);
  ASSERT_EQ(a.rows(), 3);
  ASSERT_EQ(a.cols(), 3);
  for (int j = 0; j < 3; ++j) {
    int minus = 0;
    int plus = 0;
    for (int i = 0; i < 3; ++i) {
      if (a(i, j) == -1.0) ++minus;
      if (a(i, j) == 1.0) ++plus;
    }
    EXPECT_EQ(minus, 1);
    EXPECT_EQ(plus, 1);
  }
}

TEST(McfToLp, RandomColumnsSumToZero) {
  McfSpec spec;
  spec.nodes = 10;
  spec.arcs = 20;
  spec.seed = 4;
  const StandardLp lp = mcf_to_lp(gen_mcf(spec));
  const DenseMat a(lp.a);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    EXPECT_EQ(a.col(j).sum(), 0.0);
    EXPECT_EQ((a.col(j).array() != 0.0).count(), 2);
  }
}

TEST(McfToLp, RejectsUnbalancedSupply) {
  McfProblem p = single_arc();
  p.supply = {1.0, -0.5};
  EXPECT_THROW(mcf_to_lp(p), std::invalid_argument);
}

TEST(OtToMcf, OneByOne) {
  OtProblem p;
  p.supply = Vec::Ones(1);
  p.demand = Vec::Ones(1);
  p.cost = DenseMat::Zero(1, 1);
  const McfProblem mcf = ot_to_mcf(p);
  ASSERT_EQ(mcf.num_arcs(), 1);
  EXPECT_EQ(mcf.supply, (std::vector<double>{1.0, -1.0}));
  const StandardLp lp = ot_to_lp(p);
  EXPECT_EQ(lp.b[0], -1.0);
  EXPECT_EQ(lp.b[1], 1.0);
}

TEST(OtToMcf, TwoByTwoSupplies) {
  const McfProblem mcf = ot_to_mcf(fixtures::ot2(3, 2, 4, 1));
  EXPECT_EQ(mcf.num_arcs(), 4);
  EXPECT_EQ(mcf.supply, (std::vector<double>{3, 2, -4, -1}));
  EXPECT_EQ(mcf.arcs[1], (Arc{0, 3}));
  EXPECT_EQ(mcf.arcs[2], (Arc{1, 2}));
}

TEST(OtToMcf, TwoByThreeCapacitiesInfinite) {
  const McfProblem mcf = ot_to_mcf(gen_ot_random(2, 3, 9));
  EXPECT_EQ(mcf.num_arcs(), 6);
  for (double u : mcf.capacity) EXPECT_EQ(u, kInf);
}

TEST(OtToMcf, RejectsImbalance) { EXPECT_THROW(ot_to_mcf(fixtures::ot2(3, 2, 4, 2)), std::invalid_argument); }

TEST(OtToMcf, TinyImbalanceIsRenormalized) {
  OtProblem p = fixtures::ot2(0.5, 0.5, 0.5, 0.5 + 1e-12);
  p.normalize();
  EXPECT_NEAR(p.demand.sum(), p.supply.sum(), 1e-15);
}

TEST(OtToMcf, PreservesOptimalValue) {
  for (int seed = 0; seed < 10; ++seed) {
    const OtProblem p = gen_ot_random(5, 5, seed);
    const SimplexResult direct = solve(ot_to_lp(p));
    const SimplexResult via = solve(mcf_to_lp(ot_to_mcf(p)));
    ASSERT_EQ(direct.status, SimplexStatus::Optimal);
    EXPECT_NEAR(direct.objective, via.objective, 1e-9 * (1 + std::abs(direct.objective)));
  }
}

TEST(Shift, HandExample) {
  McfProblem p = single_arc();
  p.supply = {8.0, -8.0};
  const std::vector<double> f = {8.0};
  const ShiftedMcf s = shift_mcf(p, f);
  ASSERT_TRUE(s.map.reversed[0]);
  EXPECT_EQ(s.problem.arcs[0], (Arc{1, 0}));
  EXPECT_EQ(s.problem.cost[0], -3.0);
  EXPECT_EQ(s.problem.capacity[0], 10.0);
  EXPECT_EQ(s.problem.supply, (std::vector<double>{-2.0, 2.0}));
  EXPECT_EQ(s.map.offset, 30.0);

  const std::vector<double> back = unshift_flow(s.map, std::vector<double>{4.0});
  EXPECT_EQ(back[0], 6.0);
  EXPECT_EQ(p.objective(back), s.problem.objective(std::vector<double>{4.0}) + s.map.offset);
}

TEST(Shift, ZeroReferenceIsIdentity) {
  const McfProblem p = fixtures::triangle();
  const ShiftedMcf s = shift_mcf(p, std::vector<double>(3, 0.0));
  EXPECT_EQ(s.map.offset, 0.0);
  EXPECT_EQ(s.problem.arcs, p.arcs);
  EXPECT_EQ(s.problem.cost, p.cost);
  EXPECT_EQ(s.problem.supply, p.supply);
  const std::vector<double> f = {1, 2, 3};
  EXPECT_EQ(unshift_flow(s.map, f), f);
}

TEST(Shift, RejectsOutOfBoundsReference) {
  const McfProblem p = fixtures::triangle();
  EXPECT_THROW(shift_mcf(p, std::vector<double>{11, 0, 0}), std::invalid_argument);
  EXPECT_THROW(shift_mcf(p, std::vector<double>{-1, 0, 0}), std::invalid_argument);
}

TEST(Shift, RoundTripOnRandomFeasibleFlows) {
  for (int seed = 0; seed < 20; ++seed) {
    McfSpec spec;
    spec.nodes = 12;
    spec.arcs = 40;
    spec.seed = seed;
    const McfProblem p = gen_mcf(spec);
    const StandardLp lp = mcf_to_lp(p);
    const SimplexResult opt = solve(lp);
    ASSERT_EQ(opt.status, SimplexStatus::Optimal);
    std::vector<double> reference(p.num_arcs());
    Rng rng(seed);
    for (int k = 0; k < p.num_arcs(); ++k) reference[k] = rng.uniform(0.0, p.capacity[k]);
    const ShiftedMcf s = shift_mcf(p, reference);
    const std::vector<double> f(opt.x.data(), opt.x.data() + opt.x.size());
    const std::vector<double> shifted = shift_flow(s.map, f);
    EXPECT_EQ(unshift_flow(s.map, shifted), f);
    const double lhs = p.objective(f);
    EXPECT_NEAR(lhs, s.problem.objective(shifted) + s.map.offset, 1e-12 * std::max(1.0, std::abs(lhs)));
    // The shifted flow is feasible for the shifted problem.
    const StandardLp slp = mcf_to_lp(s.problem);
    const Vec sx = Eigen::Map<const Vec>(shifted.data(), static_cast<Eigen::Index>(shifted.size()));
    EXPECT_LE(slp.residual(sx).lpNorm<Eigen::Infinity>(), 1e-9);
    EXPECT_LE(slp.bound_violation(sx), 1e-9);
  }
}

TEST(Unshift, FeasibleShiftedFlowMapsToFeasibleFlow) {
  McfSpec spec;
  spec.nodes = 15;
  spec.arcs = 45;
  spec.seed = 2;
  const McfProblem p = gen_mcf(spec);
  std::vector<double> reference(p.num_arcs());
  for (int k = 0; k < p.num_arcs(); ++k) reference[k] = k % 3 == 0 ? p.capacity[k] : 0.0;
  const ShiftedMcf s = shift_mcf(p, reference);
  const SimplexResult shifted_opt = solve(mcf_to_lp(s.problem));
  ASSERT_EQ(shifted_opt.status, SimplexStatus::Optimal);
  const std::vector<double> f =
      unshift_flow(s.map, std::vector<double>(shifted_opt.x.data(), shifted_opt.x.data() + shifted_opt.x.size()));
  const StandardLp lp = mcf_to_lp(p);
  const Vec x = Eigen::Map<const Vec>(f.data(), static_cast<Eigen::Index>(f.size()));
  EXPECT_LE(lp.residual(x).lpNorm<Eigen::Infinity>(), 1e-9);
  EXPECT_LE(lp.bound_violation(x), 1e-9);
  EXPECT_NEAR(lp.objective(x), shifted_opt.objective + s.map.offset, 1e-9 * std::abs(lp.objective(x)));
}

TEST(WbToLp, SingleMeasureIsOt) {
  const WbProblem p = gen_wb(1, 3, 4, 5);
  const StandardLp lp = wb_to_lp(p);
  const WbLayout layout = wb_layout(p);
  EXPECT_EQ(lp.num_cols(), 3 * 4 + 4);
  EXPECT_EQ(lp.num_rows(), 3 + 4);
  // With u fixed to a feasible marginal the plan block is an OT problem.
  OtProblem ot;
  ot.supply = p.weights[0];
  ot.demand = Vec::Constant(4, 0.25);
  ot.cost = p.costs[0];
  const SimplexResult ot_opt = solve(ot_to_lp(ot));
  StandardLp fixed = lp;
  for (int j = 0; j < 4; ++j) fixed.lower[layout.barycenter_offset + j] = fixed.upper[layout.barycenter_offset + j] = 0.25;
  const SimplexResult wb_opt = solve(fixed);
  ASSERT_EQ(wb_opt.status, SimplexStatus::Optimal);
  EXPECT_NEAR(wb_opt.objective, ot_opt.objective, 1e-9);
}

TEST(WbToLp, TwoMeasuresCounts) {
  const WbProblem p = gen_wb(2, 2, 2, 1);
  const StandardLp lp = wb_to_lp(p);
  EXPECT_EQ(lp.num_cols(), 2 * 4 + 2);
  EXPECT_EQ(lp.num_rows(), 2 + 2 + 2 * 2);
}

TEST(WbToLp, RowCountFormula) {
  WbProblem p = gen_wb(3, 4, 5, 7);
  const StandardLp lp = wb_to_lp(p);
  EXPECT_EQ(lp.num_rows(), 3 * 4 + 3 * 5);
  const SimplexResult r = solve(lp);
  EXPECT_EQ(r.status, SimplexStatus::Optimal);
}
