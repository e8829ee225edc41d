#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "crossover/colgen.hpp"
#include "crossover/ipm.hpp"
#include "crossover/model.hpp"
#include "crossover/simplex.hpp"

namespace crossover {

enum class PartitionCriterion { ValueCompare, RelativeChange };

struct PartitionEstimate {
  std::vector<int> support;     // predicted P
  std::vector<int> complement;  // predicted P-bar
  PartitionCriterion criterion = PartitionCriterion::ValueCompare;
  /// Set when RelativeChange was requested without iterate history.
  bool fell_back = false;
};

/// P = {j : x_j - l_j >= tau s_j} (ValueCompare) or
/// P = {j : |dx_j| / x_j <= |ds_j| / s_j} over the last two iterates
/// (RelativeChange). Free columns are always in P.
PartitionEstimate estimate_partition(const StandardLp& lp, const PrimalDualPoint& point,
                                     PartitionCriterion criterion = PartitionCriterion::ValueCompare,
                                     double tau = 1.0);

enum class PerturbSign { Nonnegative, Symmetric };

struct PerturbConfig {
  /// Perturbation size relative to max(|c|_inf, 1).
  double delta = 1e-6;
  PerturbSign sign = PerturbSign::Nonnegative;
  std::uint64_t seed = 0;
  /// Retry on the full problem with 10x delta when the restricted solve fails.
  bool fallback = true;
  /// Loosening factor of the value criterion.
  double tau = 0.1;
  PartitionCriterion criterion = PartitionCriterion::ValueCompare;
  /// Finish with Col-OPT on the unperturbed costs.
  bool reoptimize = false;
  ColGenConfig colgen;
};

struct PerturbedProblem {
  StandardLp lp;  // same columns; those outside P fixed at their bound
  Vec epsilon;    // zero outside P
  std::vector<int> support;
};

PerturbedProblem build_perturbed(const StandardLp& lp, std::span<const int> support, const PerturbConfig& config);

struct BoundReport {
  bool checked = false;  // only with nonnegative perturbations
  bool holds = true;
  double objective = 0.0;    // c'x-bar
  double lower_bound = 0.0;  // c'x^k - gap
  double gap = 0.0;          // delta_g
  double x_dot_eps = 0.0;    // (x^k)' eps
  double rhs = 0.0;
};

struct PerturbResult {
  SimplexResult result;        // in the original LP
  SimplexResult perturbed;     // before reoptimization
  PartitionEstimate partition;
  Vec epsilon;
  BoundReport bound;
  bool used_fallback = false;
  int attempts = 0;
};

class BoundViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Perturbation crossover from an interior point. Throws BoundViolation when
/// the error bound fails after the fallback (nonnegative mode) and
/// std::runtime_error when no vertex can be recovered.
PerturbResult perturb_crossover(const StandardLp& lp, const PrimalDualPoint& point, const PerturbConfig& config = {});

struct UniquenessReport {
  int trials = 0;
  int unique = 0;
  int in_face = 0;
  int distinct_vertices = 0;
  std::vector<Vec> vertices;  // distinct perturbed optima
};

/// Solves the perturbed problem restricted to `support` for `trials` seeds
/// (config.seed, config.seed + 1, ...) and reports how often the optimum is
/// unique and how often it lies on the original optimal face.
UniquenessReport verify_uniqueness_empirically(const StandardLp& lp, std::span<const int> support,
                                               const PerturbConfig& config, int trials);

}  // namespace crossover
