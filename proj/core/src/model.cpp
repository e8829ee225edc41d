#include "crossover/model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace crossover {
namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

}  // namespace

void StandardLp::validate() const {
  const int m = num_rows();
  const int n = num_cols();
  if (b.size() != m) fail("StandardLp: b has " + std::to_string(b.size()) + " entries, expected " + std::to_string(m));
  if (c.size() != n || lower.size() != n || upper.size() != n) fail("StandardLp: c/lower/upper must have one entry per column");
  for (int j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j]) {
      fail("StandardLp: column " + std::to_string(j) + " has lower > upper");
    }
    if (lower[j] == kInf || upper[j] == -kInf) fail("StandardLp: column " + std::to_string(j) + " has an empty domain");
    if (!std::isfinite(c[j])) fail("StandardLp: non-finite cost in column " + std::to_string(j));
    if (!allow_empty_columns) {
      bool empty = true;
      for (SparseMat::InnerIterator it(a, j); it; ++it) {
        if (it.value() != 0.0) empty = false;
      }
      if (empty) fail("StandardLp: column " + std::to_string(j) + " is empty");
    }
  }
  for (int i = 0; i < m; ++i) {
    if (!std::isfinite(b[i])) fail("StandardLp: non-finite rhs in row " + std::to_string(i));
  }
}

double StandardLp::bound_violation(const Vec& x) const {
  double worst = 0.0;
  for (int j = 0; j < num_cols(); ++j) {
    worst = std::max({worst, lower[j] - x[j], x[j] - upper[j]});
  }
  return worst;
}

StandardLp make_lp(SparseMat a, Vec b, Vec c) {
  StandardLp lp;
  const auto n = a.cols();
  lp.a = std::move(a);
  lp.b = std::move(b);
  lp.c = std::move(c);
  lp.lower = Vec::Zero(n);
  lp.upper = Vec::Constant(n, kInf);
  return lp;
}

void McfProblem::validate() const {
  if (num_nodes <= 0) fail("McfProblem: no nodes");
  const auto na = arcs.size();
  if (cost.size() != na || capacity.size() != na) fail("McfProblem: cost/capacity must have one entry per arc");
  if (supply.size() != static_cast<std::size_t>(num_nodes)) fail("McfProblem: supply must have one entry per node");
  for (std::size_t k = 0; k < na; ++k) {
    const Arc& arc = arcs[k];
    if (arc.tail < 0 || arc.tail >= num_nodes || arc.head < 0 || arc.head >= num_nodes) {
      fail("McfProblem: arc " + std::to_string(k) + " references a missing node");
    }
    if (arc.tail == arc.head) fail("McfProblem: arc " + std::to_string(k) + " is a self-loop");
    if (!(capacity[k] >= 0.0)) fail("McfProblem: arc " + std::to_string(k) + " has negative capacity");
    if (!std::isfinite(cost[k])) fail("McfProblem: arc " + std::to_string(k) + " has non-finite cost");
  }
  double total = 0.0;
  double scale = 0.0;
  for (double s : supply) {
    total += s;
    scale += std::abs(s);
  }
  if (std::abs(total) > 1e-9 * std::max(1.0, scale)) {
    std::ostringstream os;
    os << "McfProblem: supplies are unbalanced (sum = " << total << ")";
    fail(os.str());
  }
}

double McfProblem::objective(std::span<const double> flow) const {
  double value = 0.0;
  for (std::size_t k = 0; k < arcs.size(); ++k) value += cost[k] * flow[k];
  return value;
}

void OtProblem::normalize() {
  const double total_supply = supply.sum();
  const double total_demand = demand.sum();
  if (std::abs(total_supply - total_demand) > 1e-9 * std::abs(total_supply)) {
    std::ostringstream os;
    os << "OtProblem: marginals are unbalanced (" << total_supply << " vs " << total_demand << ")";
    fail(os.str());
  }
  if (total_demand > 0.0) demand *= total_supply / total_demand;
}

void OtProblem::validate() const {
  if (supply.size() == 0 || demand.size() == 0) fail("OtProblem: empty marginal");
  if (cost.rows() != supply.size() || cost.cols() != demand.size()) fail("OtProblem: cost must be m x n");
  if ((supply.array() < 0.0).any() || (demand.array() < 0.0).any()) fail("OtProblem: negative marginal entry");
  if (!cost.allFinite()) fail("OtProblem: non-finite cost");
  const double total_supply = supply.sum();
  if (std::abs(total_supply - demand.sum()) > 1e-9 * std::max(1.0, total_supply)) {
    fail("OtProblem: marginals are unbalanced");
  }
}

void WbProblem::validate() const {
  const int count = num_measures();
  if (count == 0 || support_size <= 0) fail("WbProblem: needs at least one measure and a barycenter support");
  if (static_cast<int>(costs.size()) != count || omega.size() != count) fail("WbProblem: one cost matrix and weight per measure");
  for (int k = 0; k < count; ++k) {
    if (costs[k].rows() != weights[k].size() || costs[k].cols() != support_size) {
      fail("WbProblem: cost matrix " + std::to_string(k) + " must be m_k x m");
    }
    if (std::abs(weights[k].sum() - 1.0) > 1e-9) fail("WbProblem: measure " + std::to_string(k) + " does not sum to 1");
    if ((weights[k].array() < 0.0).any()) fail("WbProblem: negative weight");
    if ((costs[k].array() < 0.0).any()) fail("WbProblem: negative cost");
  }
  if ((omega.array() < 0.0).any() || std::abs(omega.sum() - 1.0) > 1e-9) fail("WbProblem: omega must be a probability vector");
}

WbLayout wb_layout(const WbProblem& p) {
  WbLayout layout;
  int offset = 0;
  for (int k = 0; k < p.num_measures(); ++k) {
    layout.plan_offset.push_back(offset);
    offset += static_cast<int>(p.weights[k].size()) * p.support_size;
  }
  layout.barycenter_offset = offset;
  layout.num_cols = offset + p.support_size;
  return layout;
}

StandardLp mcf_to_lp(const McfProblem& p) {
  p.validate();
  const int n = p.num_arcs();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(2 * static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    entries.emplace_back(p.arcs[k].tail, k, -1.0);
    entries.emplace_back(p.arcs[k].head, k, 1.0);
  }
  SparseMat a(p.num_nodes, n);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();

  StandardLp lp;
  lp.a = std::move(a);
  lp.b = -Eigen::Map<const Vec>(p.supply.data(), p.num_nodes);
  lp.c = Eigen::Map<const Vec>(p.cost.data(), n);
  lp.lower = Vec::Zero(n);
  lp.upper = Eigen::Map<const Vec>(p.capacity.data(), n);
  return lp;
}

McfProblem ot_to_mcf(const OtProblem& p) {
  OtProblem q = p;
  q.normalize();
  q.validate();
  const int m = q.num_sources();
  const int n = q.num_sinks();
  McfProblem mcf;
  mcf.num_nodes = m + n;
  mcf.arcs.reserve(static_cast<std::size_t>(m) * n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      mcf.arcs.push_back({i, m + j});
      mcf.cost.push_back(q.cost(i, j));
    }
  }
  mcf.capacity.assign(mcf.arcs.size(), kInf);
  mcf.supply.resize(m + n);
  for (int i = 0; i < m; ++i) mcf.supply[i] = q.supply[i];
  for (int j = 0; j < n; ++j) mcf.supply[m + j] = -q.demand[j];
  return mcf;
}

StandardLp ot_to_lp(const OtProblem& p) { return mcf_to_lp(ot_to_mcf(p)); }

ShiftedMcf shift_mcf(const McfProblem& p, std::span<const double> reference_flow) {
  p.validate();
  const int n = p.num_arcs();
  if (static_cast<int>(reference_flow.size()) != n) fail("shift_mcf: flow has wrong length");
  ShiftedMcf out;
  out.problem = p;
  out.map.reversed.assign(n, false);
  out.map.capacity = p.capacity;
  for (int k = 0; k < n; ++k) {
    const double f = reference_flow[k];
    const double u = p.capacity[k];
    const double slack = 1e-9 * (1.0 + std::abs(f));
    if (!(f >= -slack) || f > u + slack) {
      fail("shift_mcf: flow on arc " + std::to_string(k) + " is outside [0, capacity]");
    }
    if (std::isfinite(u) && f > u / 2.0) {
      const Arc arc = p.arcs[k];
      out.map.reversed[k] = true;
      out.problem.arcs[k] = {arc.head, arc.tail};
      out.problem.cost[k] = -p.cost[k];
      out.problem.supply[arc.tail] -= u;
      out.problem.supply[arc.head] += u;
      out.map.offset += p.cost[k] * u;
    }
  }
  return out;
}

std::vector<double> shift_flow(const ShiftMap& map, std::span<const double> flow) {
  if (static_cast<int>(flow.size()) != map.num_arcs()) fail("shift_flow: flow has wrong length");
  std::vector<double> out(flow.begin(), flow.end());
  for (int k = 0; k < map.num_arcs(); ++k) {
    if (map.reversed[k]) out[k] = map.capacity[k] - flow[k];
  }
  return out;
}

std::vector<double> unshift_flow(const ShiftMap& map, std::span<const double> shifted_flow) {
  // The map is an involution on flows.
  return shift_flow(map, shifted_flow);
}

StandardLp wb_to_lp(const WbProblem& p) {
  p.validate();
  const WbLayout layout = wb_layout(p);
  const int m = p.support_size;
  int rows = 0;
  for (const Vec& w : p.weights) rows += static_cast<int>(w.size());
  const int marginal_rows = rows;
  rows += p.num_measures() * m;

  std::vector<Eigen::Triplet<double>> entries;
  Vec b = Vec::Zero(rows);
  Vec c = Vec::Zero(layout.num_cols);
  int row_offset = 0;
  for (int k = 0; k < p.num_measures(); ++k) {
    const int mk = static_cast<int>(p.weights[k].size());
    const int barycenter_row = marginal_rows + k * m;
    for (int i = 0; i < mk; ++i) {
      b[row_offset + i] = p.weights[k][i];
      for (int j = 0; j < m; ++j) {
        const int col = layout.plan_offset[k] + i * m + j;
        entries.emplace_back(row_offset + i, col, 1.0);     // X_k 1_m = u^k
        entries.emplace_back(barycenter_row + j, col, 1.0); // X_k' 1 = u
        c[col] = p.omega[k] * p.costs[k](i, j);
      }
    }
    for (int j = 0; j < m; ++j) entries.emplace_back(barycenter_row + j, layout.barycenter_offset + j, -1.0);
    row_offset += mk;
  }
  SparseMat a(rows, layout.num_cols);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();
  return make_lp(std::move(a), std::move(b), std::move(c));
}

}  // namespace crossover
