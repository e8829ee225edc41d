#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "crossover/model.hpp"

namespace crossover {

enum class VarStatus : std::uint8_t { Basic, NonbasicLower, NonbasicUpper };

/// Column statuses over the n structural columns followed by one logical
/// column per row. Logical column n + i is the unit vector e_i; in the
/// original LP it is fixed at zero, so a basic logical only ever appears at
/// value zero (it marks a redundant or degenerate row).
struct BasisState {
  std::vector<VarStatus> status;
  std::vector<int> basic;  // basic column per basis position, length m

  int num_basic() const { return static_cast<int>(basic.size()); }
  /// Slack basis: every logical basic, every structural at its lower bound.
  static BasisState slack(int num_rows, int num_cols);
};

enum class SimplexStatus { Optimal, Unbounded, Infeasible, IterationLimit };

std::string_view to_string(SimplexStatus status);

struct SimplexResult {
  SimplexStatus status = SimplexStatus::IterationLimit;
  Vec x;
  double objective = 0.0;
  BasisState basis;
  Vec reduced_costs;
  Vec duals;
  long iterations = 0;
  long phase1_iterations = 0;
};

struct SimplexLimits {
  long max_iterations = 10'000'000;
  double time_limit_seconds = kInf;
};

struct SimplexOptions {
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  int refactor_interval = 100;
  int dense_threshold = 512;  // dense LU up to this many rows
  bool record_objective_trace = false;
};

class SingularBasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BasisFactor;

/// Bounded-variable revised primal simplex over the columns [A | I].
///
/// The engine is reusable: costs, bounds and the set of active columns may be
/// changed between calls to run(), which continues from the current basis.
/// Inactive columns stay nonbasic at their current value and are never
/// priced, which is how restricted master problems are expressed.
///
/// Pricing is Dantzig's rule; after 3m consecutive degenerate pivots the
/// engine switches to Bland's rule until the next nondegenerate step. Ratio
/// test ties go to the lowest column index. When the current basis is
/// primal infeasible, a composite phase 1 minimizes the sum of infeasibilities
/// before the real objective is restored.
class BoundedSimplex {
 public:
  explicit BoundedSimplex(const StandardLp& lp, SimplexOptions options = {});
  ~BoundedSimplex();
  BoundedSimplex(const BoundedSimplex&) = delete;
  BoundedSimplex& operator=(const BoundedSimplex&) = delete;

  int num_rows() const { return m_; }
  int num_structural() const { return n_; }
  int num_total() const { return n_ + m_; }

  void set_cost(int j, double cost);
  double cost(int j) const { return cost_[j]; }
  /// Changing the bounds of a nonbasic column moves it to the nearest bound.
  void set_bounds(int j, double lower, double upper);
  double lower(int j) const { return lo_[j]; }
  double upper(int j) const { return hi_[j]; }
  void set_active(int j, bool active);
  bool active(int j) const { return active_[j] != 0; }

  /// Loads a basis; dependent basic columns are replaced by logicals.
  /// Returns the number of replaced columns.
  int load_basis(const BasisState& basis);
  void load_slack_basis();

  SimplexStatus run(const SimplexLimits& limits = {});

  /// Pivots basic logical columns sitting at zero out of the basis in
  /// exchange for structural columns (degenerate steps). Returns the number
  /// of logicals left basic, i.e. the number of redundant rows found.
  int pivot_out_logicals();

  const Vec& values() const { return x_; }
  Vec structural_values() const { return x_.head(n_); }
  VarStatus status(int j) const { return status_[j]; }
  BasisState basis() const;
  double objective() const;
  /// Duals y with B'y = c_B for the current costs.
  Vec duals();
  /// c_j - a_j'y for every column (structural followed by logicals).
  Vec reduced_costs();
  /// Largest bound violation among basic variables.
  double primal_infeasibility() const;

  long iterations() const { return iterations_; }
  long phase1_iterations() const { return phase1_iterations_; }
  const std::vector<double>& objective_trace() const { return trace_; }

  /// Full result over the structural columns, computed for the current basis.
  SimplexResult result(SimplexStatus status);

 private:
  template <typename F>
  void for_column(int j, F&& f) const;
  double column_dot(int j, const Vec& y) const;
  void refactor();
  void recompute_basics();
  double nonbasic_value(int j) const;
  bool eligible(int j, double d, bool& increase) const;

  const StandardLp* lp_;
  SimplexOptions options_;
  int m_;
  int n_;
  Vec cost_;
  Vec lo_;
  Vec hi_;
  std::vector<char> active_;
  Vec x_;
  std::vector<VarStatus> status_;
  std::vector<int> basic_;
  std::vector<int> position_;
  std::unique_ptr<BasisFactor> factor_;
  long iterations_ = 0;
  long phase1_iterations_ = 0;
  std::vector<double> trace_;
};

/// Solves lp, warm-starting from `start` when given.
SimplexResult solve(const StandardLp& lp, const std::optional<BasisState>& start = std::nullopt,
                    const SimplexLimits& limits = {}, const SimplexOptions& options = {});

struct DualSolution {
  Vec duals;
  Vec reduced_costs;  // structural columns only
};

/// Duals and reduced costs of a basis; throws SingularBasisError when the
/// basis matrix cannot be factorized.
DualSolution reduced_costs(const StandardLp& lp, const BasisState& basis);

struct VertexCheck {
  bool is_vertex = false;
  /// Columns strictly between their bounds that form an independent set.
  std::vector<int> independent;
  std::vector<int> interior;
};

/// True iff the columns with lower < x < upper are linearly independent.
VertexCheck vertex_check(const StandardLp& lp, const Vec& x, double tolerance = 1e-9);

}  // namespace crossover
