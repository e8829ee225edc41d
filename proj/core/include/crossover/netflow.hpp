#pragma once

#include <span>
#include <vector>

#include "crossover/model.hpp"
#include "crossover/simplex.hpp"

namespace crossover {

/// Per-arc flow ratio r_ij = max(f_ij / f^i, f_ij / f^j), where f^k is the
/// total flow on arcs incident to node k. Nodes without flow contribute 0.
Vec flow_ratio_mcf(const McfProblem& p, std::span<const double> flow);

/// Column version: r_i = max_k |A_ki| x_i / f^k with f^k = sum_i |A_ki| x_i.
Vec flow_ratio_lp(const StandardLp& lp, const Vec& x);

/// Maximum-weight spanning forest by Kruskal's rule. Arcs are visited by
/// descending weight (ties to the lower index); arcs with weight <= 0 are
/// skipped unless `include_zero` is set. Returns the accepted arcs in
/// acceptance order.
std::vector<int> max_spanning_forest(int num_nodes, const std::vector<Arc>& arcs, const Vec& weights,
                                     bool include_zero);

/// Forest of the largest ratios first, then the remaining arcs by
/// descending ratio.
std::vector<int> column_ordering_network(int num_nodes, const std::vector<Arc>& arcs, const Vec& ratios);
/// Columns by descending ratio, ties to the lower index.
std::vector<int> column_ordering_general(const Vec& ratios);

struct TreeSolution {
  int num_nodes = 0;
  std::vector<int> tree_arcs;  // ascending arc ids
  std::vector<double> flow;    // per arc; zero off the tree, may be negative on it
  /// One node per connected component of the forest.
  std::vector<int> roots;

  bool feasible(double tolerance = 0.0) const;
};

/// Flows on a spanning forest determined by node balance alone.
TreeSolution solve_tree(int num_nodes, const std::vector<Arc>& arcs, std::span<const double> supply,
                        std::vector<int> tree_arcs);

/// Max-ratio spanning tree of the approximate flow, completed with zero-ratio
/// arcs, and its tree solution.
TreeSolution tree_bi(const McfProblem& p, std::span<const double> flow);
TreeSolution tree_bi(const OtProblem& p, std::span<const double> plan);

/// Basis of mcf_to_lp(p) for a spanning forest: the forest arcs plus the
/// logical of each component root. Arcs off the forest sit at their lower
/// bound.
BasisState tree_basis(int num_arcs, const TreeSolution& tree);

struct PushResult {
  TreeSolution tree;  // feasible tree solution after the push phase
  BasisState basis;   // basis of ot_to_lp(p)
  int loops = 0;      // inner push steps performed
};

/// Push phase for OT: removes negative entries of a tree solution by moving
/// flow around 4-cycles i -> j -> i' -> j' -> i. Throws std::runtime_error
/// when more than 10 (m + n) push steps are needed.
PushResult push_ot(const OtProblem& p, const TreeSolution& tree);

struct WbBasicPoint {
  Vec x;  // in the column layout of wb_to_lp
  std::vector<PushResult> blocks;
};

/// Fixes the barycenter weights u and recovers a basic plan per measure with
/// tree_bi + push_ot. `plans[k]` is the approximate X_k (row-major).
WbBasicPoint wb_basis_identification(const WbProblem& p, const Vec& barycenter, const std::vector<Vec>& plans);

}  // namespace crossover
