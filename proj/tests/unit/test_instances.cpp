#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crossover/instances.hpp"
#include "crossover/simplex.hpp"
#include "oracles.hpp"

using namespace crossover;

namespace {

Raster single_pixel(int rows, int cols, int r, int c) {
  Raster img{rows, cols, std::vector<double>(static_cast<std::size_t>(rows) * cols, 0.0)};
  img.pixels[static_cast<std::size_t>(r) * cols + c] = 1.0;
  return img;
}

}  // namespace

TEST(GenMcf, TwoNodesOneArc) {
  McfSpec spec;
  spec.nodes = 2;
  spec.arcs = 1;
  const McfProblem p = gen_mcf(spec);
  EXPECT_EQ(p.num_nodes, 2);
  ASSERT_EQ(p.num_arcs(), 1);
  EXPECT_EQ(p.supply[0] + p.supply[1], 0.0);
}

TEST(GenMcf, SeedReproducible) {
  McfSpec spec;
  spec.nodes = 30;
  spec.arcs = 90;
  spec.seed = 11;
  const McfProblem a = gen_mcf(spec);
  const McfProblem b = gen_mcf(spec);
  EXPECT_EQ(a.arcs, b.arcs);
  EXPECT_EQ(a.cost, b.cost);
  EXPECT_EQ(a.capacity, b.capacity);
  EXPECT_EQ(a.supply, b.supply);
}

TEST(GenMcf, StructureAndFeasibility) {
  for (int seed = 0; seed < 10; ++seed) {
    McfSpec spec;
    spec.nodes = 50;
    spec.arcs = 200;
    spec.seed = seed;
    const McfProblem p = gen_mcf(spec);
    EXPECT_EQ(p.num_arcs(), 200);
    double total = 0.0;
    for (double s : p.supply) {
      EXPECT_EQ(s, std::round(s));
      total += s;
    }
    EXPECT_EQ(total, 0.0);
    std::vector<std::pair<int, int>> pairs;
    for (int k = 0; k < p.num_arcs(); ++k) {
      EXPECT_NE(p.arcs[k].tail, p.arcs[k].head);
      EXPECT_GE(p.cost[k], 1);
      EXPECT_LE(p.cost[k], 100);
      EXPECT_GE(p.capacity[k], 10);
      EXPECT_LE(p.capacity[k], 1000);
      pairs.push_back({p.arcs[k].tail, p.arcs[k].head});
    }
    std::sort(pairs.begin(), pairs.end());
    EXPECT_EQ(std::adjacent_find(pairs.begin(), pairs.end()), pairs.end());
    oracle::Components comp(50);
    int joins = 0;
    for (const Arc& a : p.arcs) joins += comp.join(a.tail, a.head);
    EXPECT_EQ(joins, 49);
    EXPECT_EQ(solve(mcf_to_lp(p)).status, SimplexStatus::Optimal);
    EXPECT_TRUE(oracle::min_cost_flow(p).feasible);
  }
}

TEST(GenMcf, DenseRequestUsesAllPairs) {
  McfSpec spec;
  spec.nodes = 6;
  spec.arcs = 30;
  spec.seed = 1;
  EXPECT_EQ(gen_mcf(spec).num_arcs(), 30);
}

TEST(GenMcf, RejectsImpossibleSizes) {
  McfSpec spec;
  spec.nodes = 5;
  spec.arcs = 3;
  EXPECT_THROW(gen_mcf(spec), std::invalid_argument);
  spec.arcs = 21;
  EXPECT_THROW(gen_mcf(spec), std::invalid_argument);
}

TEST(GenOtImages, IdenticalSinglePixelsCostNothing) {
  const Raster a = single_pixel(4, 4, 1, 2);
  const OtProblem p = gen_ot_from_images(a, a);
  ASSERT_EQ(p.cost.rows(), 1);
  ASSERT_EQ(p.cost.cols(), 1);
  EXPECT_EQ(p.cost(0, 0), 0.0);
  EXPECT_EQ(solve(ot_to_lp(p)).objective, 0.0);
}

TEST(GenOtImages, DistanceThreeSquared) {
  const OtProblem p = gen_ot_from_images(single_pixel(5, 5, 0, 1), single_pixel(5, 5, 3, 1), 1, 2.0);
  EXPECT_DOUBLE_EQ(p.cost(0, 0), 9.0);
  EXPECT_DOUBLE_EQ(solve(ot_to_lp(p)).objective, 9.0);
}

TEST(GenOtImages, SupportSizesAreNonzeroCounts) {
  const Raster a = random_raster(28, 28, 0.3, 1);
  const Raster b = random_raster(28, 28, 0.3, 2);
  const OtProblem p = gen_ot_from_images(a, b);
  auto nonzero = [](const Raster& r) { return std::count_if(r.pixels.begin(), r.pixels.end(), [](double v) { return v > 0; }); };
  EXPECT_EQ(p.num_sources(), nonzero(a));
  EXPECT_EQ(p.num_sinks(), nonzero(b));
  EXPECT_NEAR(p.supply.sum(), 1.0, 1e-12);
  EXPECT_NEAR(p.demand.sum(), 1.0, 1e-12);
}

TEST(GenOtImages, UpscaleMultipliesSupport) {
  const Raster a = single_pixel(3, 3, 1, 1);
  const OtProblem p = gen_ot_from_images(a, a, 2);
  EXPECT_EQ(p.num_sources(), 4);
  EXPECT_EQ(upscale(a, 2).rows, 6);
}

TEST(GenOtImages, RejectsEmptyImage) {
  const Raster empty{2, 2, std::vector<double>(4, 0.0)};
  EXPECT_THROW(gen_ot_from_images(empty, single_pixel(2, 2, 0, 0)), std::invalid_argument);
}

TEST(ReadPgm, AsciiAndBinary) {
  std::istringstream ascii("P2\n# comment\n3 2\n255\n0 10 0\n255 0 1\n");
  const Raster a = read_pgm(ascii);
  EXPECT_EQ(a.rows, 2);
  EXPECT_EQ(a.cols, 3);
  EXPECT_EQ(a.at(1, 0), 255.0);
  std::string bin = "P5\n2 1\n255\n";
  bin.push_back(static_cast<char>(7));
  bin.push_back(static_cast<char>(200));
  std::istringstream binary(bin);
  const Raster b = read_pgm(binary);
  EXPECT_EQ(b.at(0, 0), 7.0);
  EXPECT_EQ(b.at(0, 1), 200.0);
}

TEST(GenOtRandom, Reproducible) {
  const OtProblem a = gen_ot_random(6, 7, 3);
  const OtProblem b = gen_ot_random(6, 7, 3);
  EXPECT_EQ(a.cost, b.cost);
  EXPECT_EQ(a.supply, b.supply);
  EXPECT_NEAR(a.supply.sum(), a.demand.sum(), 1e-15);
}
