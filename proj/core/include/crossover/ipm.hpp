#pragma once

#include <cstdint>
#include <string_view>

#include "crossover/model.hpp"

namespace crossover {

enum class IpmStatus { Converged, PrimalInfeasible, DualInfeasible, IterationLimit, NumericalFailure };

std::string_view to_string(IpmStatus status);

/// Primal-dual iterate in the variable space of the original LP.
///
/// `s` holds the multipliers of the lower bounds (x - lower >= 0), `z` those
/// of the finite upper bounds (upper - x >= 0); `z` is zero for columns
/// without an upper bound. The previous iterate is kept for criteria that
/// compare consecutive iterates.
struct PrimalDualPoint {
  IpmStatus status = IpmStatus::IterationLimit;
  Vec x;
  Vec y;
  Vec s;
  Vec z;
  Vec previous_x;
  Vec previous_s;
  double gap = 0.0;           // complementarity x's + w'z (absolute)
  double relative_gap = 0.0;  // gap / (1 + |c'x|)
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;

  bool has_history() const { return previous_x.size() == x.size() && x.size() > 0; }
};

struct IpmOptions {
  double residual_tolerance = 1e-8;
  int max_iterations = 200;
  double step_fraction = 0.9995;
  int dense_threshold = 512;
};

/// Mehrotra predictor-corrector method; stops once the relative gap is at
/// most `target_gap` and the residuals are below tolerance.
PrimalDualPoint ipm_solve(const StandardLp& lp, double target_gap, const IpmOptions& options = {});

/// Approximate analytic center of the feasible set (ipm with zero costs).
Vec analytic_center(const StandardLp& lp);

/// Product coupling s d' / sum(s) of an OT problem, flattened row-major.
Vec ot_product_plan(const OtProblem& p);

/// Inexact point generator: (1 - blend) x* + blend * center, multiplied by
/// (1 + noise * xi) with xi ~ U[-1, 1], projected back onto A x = b and
/// pulled toward the unperturbed blend until it is within bounds.
Vec synthetic_interior(const StandardLp& lp, const Vec& vertex, const Vec& center, double blend, double noise,
                       std::uint64_t seed);

}  // namespace crossover
