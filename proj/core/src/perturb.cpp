#include "crossover/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "crossover/random.hpp"

namespace crossover {

namespace {

double lower_gap(const StandardLp& lp, const Vec& x, int j) {
  return std::isfinite(lp.lower[j]) ? x[j] - lp.lower[j] : kInf;
}

double fixed_value(const StandardLp& lp, int j) {
  return std::isfinite(lp.lower[j]) ? lp.lower[j] : lp.upper[j];
}

std::vector<int> magnitude_ordering(const StandardLp& lp, const Vec& x) {
  const int n = lp.num_cols();
  Vec weight(n);
  for (int j = 0; j < n; ++j) {
    const double g = lower_gap(lp, x, j);
    weight[j] = std::isfinite(g) ? g : std::abs(x[j]);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return weight[a] > weight[b]; });
  return order;
}

struct Attempt {
  bool ok = false;
  SimplexResult result;
};

Attempt solve_perturbed(const PerturbedProblem& problem, const Vec& x, const ColGenConfig& colgen) {
  Attempt out;
  const std::vector<int> order = magnitude_ordering(problem.lp, x);
  ColGenConfig config = colgen;
  config.general_lp = true;
  const ColBiResult bi = col_bi(problem.lp, order, config);
  if (bi.status != ColGenStatus::Success) return out;
  out.result = col_opt(problem.lp, bi.basis, order, config);
  out.ok = out.result.status == SimplexStatus::Optimal;
  return out;
}

}  // namespace

PartitionEstimate estimate_partition(const StandardLp& lp, const PrimalDualPoint& point, PartitionCriterion criterion,
                                     double tau) {
  const int n = lp.num_cols();
  if (point.x.size() != n || point.s.size() != n) throw std::invalid_argument("estimate_partition: point has wrong size");
  PartitionEstimate out;
  out.criterion = criterion;
  if (criterion == PartitionCriterion::RelativeChange && !point.has_history()) {
    out.criterion = PartitionCriterion::ValueCompare;
    out.fell_back = true;
  }
  for (int j = 0; j < n; ++j) {
    bool in_support = true;
    const double gap = lower_gap(lp, point.x, j);
    if (std::isfinite(gap)) {
      if (out.criterion == PartitionCriterion::ValueCompare) {
        in_support = gap >= tau * point.s[j];
      } else {
        const double prev_gap = lower_gap(lp, point.previous_x, j);
        const double dx = std::abs(gap - prev_gap) / prev_gap;
        const double ds = std::abs(point.s[j] - point.previous_s[j]) / point.previous_s[j];
        in_support = dx <= ds;
      }
    }
    (in_support ? out.support : out.complement).push_back(j);
  }
  return out;
}

PerturbedProblem build_perturbed(const StandardLp& lp, std::span<const int> support, const PerturbConfig& config) {
  lp.validate();
  if (!(config.delta >= 0.0)) throw std::invalid_argument("build_perturbed: delta must be nonnegative");
  const int n = lp.num_cols();
  PerturbedProblem out;
  out.lp = lp;
  out.lp.allow_empty_columns = true;
  out.support.assign(support.begin(), support.end());
  std::vector<char> keep(n, 0);
  for (int j : support) {
    if (j < 0 || j >= n) throw std::invalid_argument("build_perturbed: support index out of range");
    keep[j] = 1;
  }
  const double scale = config.delta * std::max(n > 0 ? lp.c.lpNorm<Eigen::Infinity>() : 0.0, 1.0);
  Rng rng(config.seed);
  out.epsilon = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    const double draw = config.sign == PerturbSign::Nonnegative ? rng.uniform(0.0, scale) : rng.uniform(-scale, scale);
    const bool is_free = !std::isfinite(lp.lower[j]) && !std::isfinite(lp.upper[j]);
    if (keep[j] || is_free) {
      out.epsilon[j] = draw;
    } else {
      out.lp.lower[j] = out.lp.upper[j] = fixed_value(lp, j);
    }
  }
  out.lp.c = lp.c + out.epsilon;
  return out;
}

PerturbResult perturb_crossover(const StandardLp& lp, const PrimalDualPoint& point, const PerturbConfig& config) {
  lp.validate();
  const int n = lp.num_cols();
  PerturbResult out;
  out.partition = estimate_partition(lp, point, config.criterion, config.tau);

  const double cx = lp.c.dot(point.x);
  auto bound_of = [&](const Vec& x_bar, const Vec& eps) {
    BoundReport report;
    report.checked = config.sign == PerturbSign::Nonnegative;
    report.objective = lp.c.dot(x_bar);
    report.gap = point.gap;
    report.lower_bound = cx - point.gap;
    report.x_dot_eps = point.x.dot(eps);
    report.rhs = report.lower_bound + report.gap + report.x_dot_eps;
    report.holds = !report.checked || report.objective <= report.rhs + 1e-9 * (1.0 + std::abs(report.objective));
    return report;
  };

  std::vector<int> support = out.partition.support;
  PerturbConfig attempt_config = config;
  std::vector<int> everything(n);
  std::iota(everything.begin(), everything.end(), 0);
  const int max_attempts = config.fallback ? 2 : 1;
  bool found = false;
  for (int attempt = 0; attempt < max_attempts && !found; ++attempt) {
    if (attempt > 0) {
      out.used_fallback = true;
      support = everything;
      attempt_config.delta = config.delta * std::pow(10.0, attempt);
    }
    ++out.attempts;
    if (support.empty()) continue;
    const PerturbedProblem problem = build_perturbed(lp, support, attempt_config);
    const Attempt solved = solve_perturbed(problem, point.x, config.colgen);
    if (!solved.ok) continue;
    const BoundReport report = bound_of(solved.result.x, problem.epsilon);
    out.epsilon = problem.epsilon;
    out.bound = report;
    out.perturbed = solved.result;
    if (!report.holds) {
      if (attempt + 1 < max_attempts) continue;
      throw BoundViolation("perturb_crossover: c'x = " + std::to_string(report.objective) + " exceeds bound " +
                           std::to_string(report.rhs));
    }
    found = true;
  }
  if (!found) throw std::runtime_error("perturb_crossover: no vertex recovered after " + std::to_string(out.attempts) +
                                       " attempts");

  // Same column layout, so the basis carries over; report original costs.
  BoundedSimplex engine(lp, config.colgen.simplex);
  engine.load_basis(out.perturbed.basis);
  out.result = engine.result(SimplexStatus::Optimal);
  if (config.reoptimize) {
    out.result = col_opt(lp, out.result.basis, magnitude_ordering(lp, point.x), config.colgen);
  }
  return out;
}

UniquenessReport verify_uniqueness_empirically(const StandardLp& lp, std::span<const int> support,
                                               const PerturbConfig& config, int trials) {
  lp.validate();
  const int n = lp.num_cols();
  const SimplexResult oracle = solve(lp);
  UniquenessReport report;
  report.trials = trials;
  if (oracle.status != SimplexStatus::Optimal) return report;
  const double face_tol = 1e-9 * (1.0 + std::abs(oracle.objective));

  for (int t = 0; t < trials; ++t) {
    PerturbConfig trial = config;
    trial.seed = config.seed + static_cast<std::uint64_t>(t);
    const PerturbedProblem problem = build_perturbed(lp, support, trial);
    const SimplexResult opt = solve(problem.lp);
    if (opt.status != SimplexStatus::Optimal) continue;

    // Largest move of zero-reduced-cost nonbasic columns over the optimal
    // face of the perturbed problem; zero means the optimum is unique.
    StandardLp face = problem.lp;
    face.c.setZero();
    bool candidates = false;
    for (int j = 0; j < n; ++j) {
      const VarStatus st = opt.basis.status[j];
      if (st == VarStatus::Basic || face.lower[j] == face.upper[j]) continue;
      if (std::abs(opt.reduced_costs[j]) > 1e-9) {
        face.lower[j] = face.upper[j] = opt.x[j];
      } else {
        face.c[j] = st == VarStatus::NonbasicUpper ? 1.0 : -1.0;
        candidates = true;
      }
    }
    bool unique = true;
    if (candidates) {
      const SimplexResult moved = solve(face, opt.basis);
      double displacement = 0.0;
      if (moved.status == SimplexStatus::Unbounded) {
        displacement = kInf;
      } else if (moved.status == SimplexStatus::Optimal) {
        for (int j = 0; j < n; ++j) {
          if (face.c[j] != 0.0) displacement += std::abs(moved.x[j] - opt.x[j]);
        }
      }
      unique = displacement <= 1e-9;
    }
    if (unique) ++report.unique;
    if (std::abs(lp.c.dot(opt.x) - oracle.objective) <= face_tol) ++report.in_face;
    const bool seen = std::any_of(report.vertices.begin(), report.vertices.end(), [&](const Vec& v) {
      return (v - opt.x).lpNorm<Eigen::Infinity>() <= 1e-9 * (1.0 + v.lpNorm<Eigen::Infinity>());
    });
    if (!seen) report.vertices.push_back(opt.x);
  }
  report.distinct_vertices = static_cast<int>(report.vertices.size());
  return report;
}

}  // namespace crossover
