#pragma once

#include "crossover/model.hpp"

namespace crossover {

struct SinkhornOptions {
  /// Entropic regularization; 0 selects 0.01 max(C).
  double eta = 0.0;
  double tolerance = 1e-6;
  int max_iterations = 100000;
};

struct SinkhornResult {
  DenseMat plan;  // m x n, strictly positive
  Vec u;          // row scalings (log-domain potentials f / eta when stabilized)
  Vec v;
  double eta = 0.0;
  bool log_domain = false;
  bool converged = false;
  int iterations = 0;
  double marginal_error = 0.0;  // max of the L1 row and column errors

  /// Plan flattened row-major, matching OtProblem::arc_index.
  Vec flat_plan() const;
};

/// Alternating scaling u <- s / (K v), v <- d / (K' u) with K = exp(-C / eta).
/// Switches to log-domain updates when eta < 0.01 max(C).
SinkhornResult sinkhorn(const OtProblem& p, const SinkhornOptions& options = {});

}  // namespace crossover
