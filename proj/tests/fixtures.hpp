#pragma once

#include <cstdint>
#include <vector>

#include "crossover/model.hpp"
#include "crossover/random.hpp"
#include "crossover/simplex.hpp"

namespace fixtures {

using namespace crossover;

inline StandardLp dense_lp(const DenseMat& a, const Vec& b, const Vec& c) { return make_lp(a.sparseView(), b, c); }

/// min c'x s.t. x1 + x2 = 1, x >= 0.
inline StandardLp segment_lp(double c1 = 0.0, double c2 = 0.0) {
  DenseMat a(1, 2);
  a << 1, 1;
  Vec b(1);
  b << 1;
  Vec c(2);
  c << c1, c2;
  return dense_lp(a, b, c);
}

/// Random m x n LP with positive data and a bounded, nonempty feasible set.
inline StandardLp random_lp(int m, int n, std::uint64_t seed) {
  Rng rng(seed);
  DenseMat a(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(0.1, 1.0);
  }
  Vec x0(n);
  for (int j = 0; j < n; ++j) x0[j] = rng.uniform(0.5, 1.5);
  Vec c(n);
  for (int j = 0; j < n; ++j) c[j] = rng.uniform(1.0, 10.0);
  return dense_lp(a, a * x0, c);
}

/// Random LP whose optimal face has dimension `dim`: the first `dim` positive
/// basic columns of the optimum are duplicated with identical cost.
inline StandardLp degenerate_lp(int dim, std::uint64_t seed, int m = 5, int n = 10) {
  const StandardLp base = random_lp(m, n, seed);
  const SimplexResult opt = solve(base);
  std::vector<int> dup;
  for (int j : opt.basis.basic) {
    if (j < n && opt.x[j] > 1e-6 && static_cast<int>(dup.size()) < dim) dup.push_back(j);
  }
  const DenseMat a(base.a);
  DenseMat a2(m, n + static_cast<int>(dup.size()));
  a2.leftCols(n) = a;
  Vec c2(n + static_cast<int>(dup.size()));
  c2.head(n) = base.c;
  for (std::size_t k = 0; k < dup.size(); ++k) {
    a2.col(n + static_cast<int>(k)) = a.col(dup[k]);
    c2[n + static_cast<int>(k)] = base.c[dup[k]];
  }
  return dense_lp(a2, base.b, c2);
}

/// 2 x 2 transportation problem with the given marginals and cost.
inline OtProblem ot2(double s1, double s2, double d1, double d2, DenseMat cost = DenseMat::Zero(2, 2)) {
  OtProblem p;
  p.supply = Vec(2);
  p.supply << s1, s2;
  p.demand = Vec(2);
  p.demand << d1, d2;
  p.cost = cost;
  return p;
}

/// Triangle network 1->2, 2->3, 1->3 (0-based nodes).
inline McfProblem triangle() {
  McfProblem p;
  p.num_nodes = 3;
  p.arcs = {{0, 1}, {1, 2}, {0, 2}};
  p.cost = {1, 1, 3};
  p.capacity = {10, 10, 10};
  p.supply = {3, 0, -3};
  return p;
}

}  // namespace fixtures
