#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "crossover/model.hpp"

namespace crossover {

struct McfSpec {
  int nodes = 10;
  int arcs = 20;
  std::uint64_t seed = 0;
  int min_cost = 1;
  int max_cost = 100;
  int min_capacity = 10;
  int max_capacity = 1000;
};

/// Connected random network: a random spanning tree plus extra arcs, no
/// self-loops or parallel arcs. Supplies come from an integer flow routed on
/// the tree, so the instance is feasible.
McfProblem gen_mcf(const McfSpec& spec);

/// Grayscale grid, row-major.
struct Raster {
  int rows = 0;
  int cols = 0;
  std::vector<double> pixels;

  double at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * cols + c]; }
};

/// Random raster with about `density` of the pixels set to values in (0, 1].
Raster random_raster(int rows, int cols, double density, std::uint64_t seed);

/// Reads a PGM image (P2 or P5).
Raster read_pgm(std::istream& in);

/// Replicates every pixel into an alpha x alpha block.
Raster upscale(const Raster& raster, int alpha);

/// OT between the nonzero pixels of two rasters, each normalized to unit
/// mass; the cost is the Euclidean pixel distance raised to `power`.
OtProblem gen_ot_from_images(const Raster& a, const Raster& b, int alpha = 1, double power = 2.0);

/// OT between random point clouds in the unit square, squared distances
/// scaled by 100, positive random weights normalized to unit mass.
OtProblem gen_ot_random(int sources, int sinks, std::uint64_t seed);

/// Barycenter problem over random point clouds with `atoms` atoms each and a
/// barycenter support of `support` random points; uniform omega.
WbProblem gen_wb(int measures, int atoms, int support, std::uint64_t seed);

}  // namespace crossover
