#pragma once

#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace crossover {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Vec = Eigen::VectorXd;
using DenseMat = Eigen::MatrixXd;
using SparseMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Linear program in equality form with variable bounds:
///
///   min c'x  s.t.  A x = b,  lower <= x <= upper.
///
/// Infinite bounds are stored as +/-kInf, never as large finite numbers.
struct StandardLp {
  SparseMat a;
  Vec b;
  Vec c;
  Vec lower;
  Vec upper;
  /// Set when all-zero columns are intentional (e.g. isolated variables).
  bool allow_empty_columns = false;

  int num_rows() const { return static_cast<int>(a.rows()); }
  int num_cols() const { return static_cast<int>(a.cols()); }

  /// Throws std::invalid_argument when dimensions or bounds are inconsistent.
  void validate() const;

  double objective(const Vec& x) const { return c.dot(x); }
  /// b - A x
  Vec residual(const Vec& x) const { return b - a * x; }
  /// Largest bound violation of x (0 when within bounds).
  double bound_violation(const Vec& x) const;
};

/// Builds a StandardLp with default bounds [0, +inf).
StandardLp make_lp(SparseMat a, Vec b, Vec c);

struct Arc {
  int tail = 0;
  int head = 0;
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Directed minimum-cost flow problem. Node ids are 0-based; supply is
/// positive at sources and negative at sinks.
struct McfProblem {
  int num_nodes = 0;
  std::vector<Arc> arcs;
  std::vector<double> cost;
  std::vector<double> capacity;
  std::vector<double> supply;

  int num_arcs() const { return static_cast<int>(arcs.size()); }
  void validate() const;
  double objective(std::span<const double> flow) const;
};

/// Balanced transportation problem. Arc (i, j) of the equivalent network is
/// numbered i * n + j.
struct OtProblem {
  Vec supply;
  Vec demand;
  DenseMat cost;

  int num_sources() const { return static_cast<int>(supply.size()); }
  int num_sinks() const { return static_cast<int>(demand.size()); }
  int arc_index(int i, int j) const { return i * num_sinks() + j; }

  /// Rescales demand onto the supply total when the imbalance is at most
  /// 1e-9 * sum(supply); throws std::invalid_argument otherwise.
  void normalize();
  void validate() const;
};

/// Fixed-support Wasserstein barycenter: N measures with weights u^k on
/// m_k atoms, cost matrices C_k (m_k x m) to the m barycenter atoms.
struct WbProblem {
  int support_size = 0;
  std::vector<Vec> weights;
  std::vector<DenseMat> costs;
  Vec omega;

  int num_measures() const { return static_cast<int>(weights.size()); }
  void validate() const;
};

/// Column layout of the LP built by wb_to_lp.
struct WbLayout {
  std::vector<int> plan_offset;  // first column of X_k (row-major m_k x m)
  int barycenter_offset = 0;     // first column of u
  int num_cols = 0;
};

WbLayout wb_layout(const WbProblem& p);

/// Records which arcs were reversed by shift_mcf and the objective offset
/// that maps shifted objective values back to the original problem.
struct ShiftMap {
  std::vector<bool> reversed;
  std::vector<double> capacity;
  double offset = 0.0;

  int num_arcs() const { return static_cast<int>(reversed.size()); }
};

struct ShiftedMcf {
  McfProblem problem;
  ShiftMap map;
};

// Incidence convention: the column of arc (i, j) has -1 in row i and +1 in
// row j, so A f = inflow - outflow and the right-hand side is -supply.
StandardLp mcf_to_lp(const McfProblem& p);
McfProblem ot_to_mcf(const OtProblem& p);
StandardLp ot_to_lp(const OtProblem& p);

/// Reverses every arc whose reference flow exceeds half its capacity.
ShiftedMcf shift_mcf(const McfProblem& p, std::span<const double> reference_flow);
/// Maps an original flow into the shifted problem (u - f on reversed arcs).
std::vector<double> shift_flow(const ShiftMap& map, std::span<const double> flow);
std::vector<double> unshift_flow(const ShiftMap& map, std::span<const double> shifted_flow);

StandardLp wb_to_lp(const WbProblem& p);

}  // namespace crossover
