#include "crossover/netflow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace crossover {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

std::vector<int> descending(const Vec& weights) {
  std::vector<int> order(static_cast<std::size_t>(weights.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return weights[a] > weights[b]; });
  return order;
}

}  // namespace

Vec flow_ratio_mcf(const McfProblem& p, std::span<const double> flow) {
  const int n = p.num_arcs();
  if (static_cast<int>(flow.size()) != n) throw std::invalid_argument("flow_ratio_mcf: flow has wrong length");
  std::vector<double> node_flow(p.num_nodes, 0.0);
  for (int k = 0; k < n; ++k) {
    if (!(flow[k] >= 0.0)) throw std::invalid_argument("flow_ratio_mcf: negative flow on arc " + std::to_string(k));
    node_flow[p.arcs[k].tail] += flow[k];
    node_flow[p.arcs[k].head] += flow[k];
  }
  Vec ratio = Vec::Zero(n);
  for (int k = 0; k < n; ++k) {
    double r = 0.0;
    for (int node : {p.arcs[k].tail, p.arcs[k].head}) {
      if (node_flow[node] > 0.0) r = std::max(r, flow[k] / node_flow[node]);
    }
    ratio[k] = r;
  }
  return ratio;
}

Vec flow_ratio_lp(const StandardLp& lp, const Vec& x) {
  const int n = lp.num_cols();
  if (x.size() != n) throw std::invalid_argument("flow_ratio_lp: x has wrong length");
  Vec row_flow = Vec::Zero(lp.num_rows());
  for (int j = 0; j < n; ++j) {
    if (!(x[j] >= 0.0)) throw std::invalid_argument("flow_ratio_lp: negative entry " + std::to_string(j));
    for (SparseMat::InnerIterator it(lp.a, j); it; ++it) row_flow[it.row()] += std::abs(it.value()) * x[j];
  }
  Vec ratio = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    double r = 0.0;
    for (SparseMat::InnerIterator it(lp.a, j); it; ++it) {
      if (row_flow[it.row()] > 0.0) r = std::max(r, std::abs(it.value()) * x[j] / row_flow[it.row()]);
    }
    ratio[j] = r;
  }
  return ratio;
}

std::vector<int> max_spanning_forest(int num_nodes, const std::vector<Arc>& arcs, const Vec& weights,
                                     bool include_zero) {
  DisjointSets sets(num_nodes);
  std::vector<int> forest;
  for (int k : descending(weights)) {
    if (!include_zero && !(weights[k] > 0.0)) break;
    if (sets.unite(arcs[k].tail, arcs[k].head)) {
      forest.push_back(k);
      if (static_cast<int>(forest.size()) == num_nodes - 1) break;
    }
  }
  return forest;
}

std::vector<int> column_ordering_network(int num_nodes, const std::vector<Arc>& arcs, const Vec& ratios) {
  std::vector<int> order = max_spanning_forest(num_nodes, arcs, ratios, false);
  std::vector<char> taken(arcs.size(), 0);
  for (int k : order) taken[k] = 1;
  for (int k : descending(ratios)) {
    if (!taken[k]) order.push_back(k);
  }
  return order;
}

std::vector<int> column_ordering_general(const Vec& ratios) { return descending(ratios); }

bool TreeSolution::feasible(double tolerance) const {
  return std::all_of(flow.begin(), flow.end(), [&](double f) { return f >= -tolerance; });
}

TreeSolution solve_tree(int num_nodes, const std::vector<Arc>& arcs, std::span<const double> supply,
                        std::vector<int> tree_arcs) {
  std::sort(tree_arcs.begin(), tree_arcs.end());
  DisjointSets sets(num_nodes);
  std::vector<std::vector<int>> incident(num_nodes);
  for (int k : tree_arcs) {
    if (!sets.unite(arcs[k].tail, arcs[k].head)) throw std::invalid_argument("solve_tree: arc set contains a cycle");
    incident[arcs[k].tail].push_back(k);
    incident[arcs[k].head].push_back(k);
  }

  TreeSolution tree;
  tree.num_nodes = num_nodes;
  tree.flow.assign(arcs.size(), 0.0);
  std::vector<double> outflow(supply.begin(), supply.end());
  std::vector<int> parent_arc(num_nodes, -1);
  std::vector<char> seen(num_nodes, 0);
  std::vector<int> order;
  order.reserve(num_nodes);
  double scale = 1.0;
  for (double b : supply) scale += std::abs(b);

  for (int root = 0; root < num_nodes; ++root) {
    if (seen[root]) continue;
    tree.roots.push_back(root);
    const std::size_t first = order.size();
    order.push_back(root);
    seen[root] = 1;
    for (std::size_t q = first; q < order.size(); ++q) {
      const int v = order[q];
      for (int k : incident[v]) {
        const int w = arcs[k].tail == v ? arcs[k].head : arcs[k].tail;
        if (seen[w]) continue;
        seen[w] = 1;
        parent_arc[w] = k;
        order.push_back(w);
      }
    }
    // Leaf elimination: each node's remaining net outflow is carried by the
    // arc to its parent.
    for (std::size_t q = order.size() - 1; q > first; --q) {
      const int v = order[q];
      const int k = parent_arc[v];
      if (arcs[k].tail == v) {
        tree.flow[k] = outflow[v];
        outflow[arcs[k].head] += tree.flow[k];
      } else {
        tree.flow[k] = -outflow[v];
        outflow[arcs[k].tail] -= tree.flow[k];
      }
    }
    if (std::abs(outflow[root]) > 1e-9 * scale) {
      throw std::invalid_argument("solve_tree: supplies of the component rooted at node " + std::to_string(root) +
                                  " do not balance");
    }
  }
  tree.tree_arcs = std::move(tree_arcs);
  return tree;
}

TreeSolution tree_bi(const McfProblem& p, std::span<const double> flow) {
  p.validate();
  const Vec ratio = flow_ratio_mcf(p, flow);
  return solve_tree(p.num_nodes, p.arcs, p.supply, max_spanning_forest(p.num_nodes, p.arcs, ratio, true));
}

TreeSolution tree_bi(const OtProblem& p, std::span<const double> plan) { return tree_bi(ot_to_mcf(p), plan); }

BasisState tree_basis(int num_arcs, const TreeSolution& tree) {
  const int m = tree.num_nodes;
  if (static_cast<int>(tree.tree_arcs.size() + tree.roots.size()) != m) {
    throw std::invalid_argument("tree_basis: forest and roots do not span the rows");
  }
  BasisState basis;
  basis.status.assign(static_cast<std::size_t>(num_arcs + m), VarStatus::NonbasicLower);
  for (int k : tree.tree_arcs) {
    basis.status[k] = VarStatus::Basic;
    basis.basic.push_back(k);
  }
  for (int r : tree.roots) {
    basis.status[num_arcs + r] = VarStatus::Basic;
    basis.basic.push_back(num_arcs + r);
  }
  return basis;
}

PushResult push_ot(const OtProblem& p, const TreeSolution& tree) {
  const int m = p.num_sources();
  const int n = p.num_sinks();
  const int num_arcs = m * n;
  if (tree.num_nodes != m + n || static_cast<int>(tree.flow.size()) != num_arcs) {
    throw std::invalid_argument("push_ot: tree does not match the OT dimensions");
  }
  PushResult out;
  out.tree = tree;
  std::vector<double>& f = out.tree.flow;
  std::vector<char> in_tree(num_arcs, 0);
  for (int k : tree.tree_arcs) in_tree[k] = 1;

  const int cap = 10 * (m + n);
  double total = 0.0;
  for (double v : f) total += std::abs(v);
  const double noise = 1e-13 * (1.0 + total);

  while (true) {
    std::vector<int> negative;
    for (int k = 0; k < num_arcs; ++k) {
      if (f[k] < 0.0) negative.push_back(k);
    }
    if (negative.empty()) break;
    std::stable_sort(negative.begin(), negative.end(), [&](int a, int b) { return f[a] < f[b]; });
    for (int k : negative) {
      if (!(f[k] < 0.0)) continue;
      const int i = k / n;
      const int j = k % n;
      int jp = -1;
      for (int l = 0; l < n; ++l) {
        if (jp < 0 || f[i * n + l] > f[i * n + jp]) jp = l;
      }
      int ip = -1;
      for (int l = 0; l < m; ++l) {
        if (ip < 0 || f[l * n + j] > f[ip * n + j]) ip = l;
      }
      const int a_ijp = i * n + jp;
      const int a_ipj = ip * n + j;
      const int a_ipjp = ip * n + jp;
      if (!(f[a_ijp] > 0.0) || !(f[a_ipj] > 0.0)) {
        // Only rounding noise can leave a negative entry without a partner.
        if (-f[k] <= noise) {
          f[k] = 0.0;
          continue;
        }
        throw std::runtime_error("push_ot: marginals are inconsistent at cell (" + std::to_string(i) + ", " +
                                 std::to_string(j) + ")");
      }
      if (++out.loops > cap) throw std::runtime_error("push_ot: exceeded " + std::to_string(cap) + " push steps");
      const double deficit = -f[k];
      const double theta = std::min({deficit, f[a_ipj], f[a_ijp]});
      // The cycle is the fundamental cycle of (i', j'); one arc that reaches
      // zero leaves the tree, the processed cell first.
      int leaving = k;
      if (theta != deficit) {
        const int lo = std::min(a_ipj, a_ijp);
        const int hi = std::max(a_ipj, a_ijp);
        leaving = f[lo] == theta ? lo : hi;
      }
      f[k] += theta;
      f[a_ijp] -= theta;
      f[a_ipj] -= theta;
      f[a_ipjp] += theta;
      f[leaving] = 0.0;
      if (!in_tree[a_ipjp]) {
        in_tree[a_ipjp] = 1;
        in_tree[leaving] = 0;
      }
    }
  }

  out.tree.tree_arcs.clear();
  for (int k = 0; k < num_arcs; ++k) {
    if (in_tree[k]) out.tree.tree_arcs.push_back(k);
  }
  out.basis = tree_basis(num_arcs, out.tree);
  return out;
}

WbBasicPoint wb_basis_identification(const WbProblem& p, const Vec& barycenter, const std::vector<Vec>& plans) {
  p.validate();
  const WbLayout layout = wb_layout(p);
  const int nm = p.num_measures();
  if (static_cast<int>(plans.size()) != nm) throw std::invalid_argument("wb_basis_identification: one plan per measure");
  if (barycenter.size() != p.support_size) throw std::invalid_argument("wb_basis_identification: barycenter size");
  if ((barycenter.array() < 0.0).any()) throw std::invalid_argument("wb_basis_identification: negative barycenter");

  WbBasicPoint out;
  out.x = Vec::Zero(layout.num_cols);
  out.blocks.resize(nm);
  for (int k = 0; k < nm; ++k) {
    OtProblem block;
    block.supply = p.weights[k];
    block.demand = barycenter;
    block.cost = p.costs[k];
    block.normalize();
    const Vec& plan = plans[k];
    if (plan.size() != block.supply.size() * block.demand.size()) {
      throw std::invalid_argument("wb_basis_identification: plan " + std::to_string(k) + " has wrong size");
    }
    const TreeSolution tree = tree_bi(block, std::span<const double>(plan.data(), static_cast<std::size_t>(plan.size())));
    out.blocks[k] = push_ot(block, tree);
    const auto& flow = out.blocks[k].tree.flow;
    for (std::size_t a = 0; a < flow.size(); ++a) out.x[layout.plan_offset[k] + static_cast<int>(a)] = flow[a];
  }
  out.x.segment(layout.barycenter_offset, p.support_size) = barycenter;
  return out;
}

}  // namespace crossover
