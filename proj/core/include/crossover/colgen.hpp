#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "crossover/model.hpp"
#include "crossover/netflow.hpp"
#include "crossover/simplex.hpp"

namespace crossover {

struct ColGenConfig {
  /// Restricted problem k holds the first theta_base^k ordered columns.
  double theta_base = 2.0;
  /// Penalty on artificial columns; 0 selects 2 n max|c_j| (times 10 for
  /// general LPs).
  double big_m = 0.0;
  /// Reduced-cost tolerance of the final pricing pass.
  double epsilon = 1e-9;
  int max_master_iterations = 1000;
  /// Treat the LP as a general LP: larger M and up to 3 escalations of M
  /// when artificials remain positive.
  bool general_lp = false;
  SimplexOptions simplex;
  SimplexLimits limits;
};

enum class ColGenStatus { Success, Infeasible, Unbounded, IterationLimit };

std::string_view to_string(ColGenStatus status);

struct ColBiResult {
  ColGenStatus status = ColGenStatus::IterationLimit;
  Vec x;
  BasisState basis;
  int master_iterations = 0;
  long simplex_iterations = 0;
  double big_m = 0.0;
  /// Positive artificials after each master iteration.
  std::vector<int> artificial_counts;
  /// Big-M objective after each master iteration.
  std::vector<double> master_objectives;
};

/// Basis identification by column generation on the big-M problem
///   min c'x + M |r|  s.t.  A x + r = b.
/// Each master iteration enlarges the ordered prefix, warm-starts from the
/// previous basis and retires artificials that left the basis.
ColBiResult col_bi(const StandardLp& lp, std::span<const int> ordering, const ColGenConfig& config = {});

struct ColOptStats {
  int master_iterations = 0;
  long simplex_iterations = 0;
  std::vector<double> master_objectives;
  std::vector<int> active_columns;
};

/// Reoptimization from a basic feasible solution: restricted solves over a
/// growing column set, adding every column priced out with reduced cost
/// below -epsilon plus the next ordered prefix, until pricing over all
/// columns finds no violator.
SimplexResult col_opt(const StandardLp& lp, const BasisState& start, std::span<const int> ordering,
                      const ColGenConfig& config = {}, ColOptStats* stats = nullptr);

struct CrossoverStats {
  ColBiResult bi;
  ColOptStats opt;
  int push_loops = 0;
  double shift_offset = 0.0;
  /// Wall clock of basis identification (everything before Col-OPT) and of
  /// Col-OPT, in milliseconds.
  double identify_ms = 0.0;
  double reoptimize_ms = 0.0;
};

/// Network crossover for MCF: shift, flow ratios, ordering, Col-BI,
/// Col-OPT, unshift. Returns the result in the original arc space.
SimplexResult cnet_crossover(const McfProblem& p, std::span<const double> flow, const ColGenConfig& config = {},
                             CrossoverStats* stats = nullptr);

/// Column-generation crossover for a general LP with ratio ordering.
SimplexResult cnet_crossover(const StandardLp& lp, const Vec& x, const ColGenConfig& config = {},
                             CrossoverStats* stats = nullptr);

/// Tree crossover for OT: Tree-BI, push, Col-OPT on ot_to_lp(p).
SimplexResult tnet_crossover(const OtProblem& p, std::span<const double> plan, const ColGenConfig& config = {},
                             CrossoverStats* stats = nullptr);

}  // namespace crossover
