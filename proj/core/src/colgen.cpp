#include "crossover/colgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace crossover {

std::string_view to_string(ColGenStatus status) {
  switch (status) {
    case ColGenStatus::Success: return "success";
    case ColGenStatus::Infeasible: return "infeasible";
    case ColGenStatus::Unbounded: return "unbounded";
    case ColGenStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point from, Clock::time_point to = Clock::now()) {
  return std::chrono::duration<double, std::milli>(to - from).count();
}

void check_ordering(std::span<const int> ordering, int n) {
  if (static_cast<int>(ordering.size()) != n) {
    throw std::invalid_argument("column ordering must list all " + std::to_string(n) + " columns");
  }
  std::vector<char> seen(n, 0);
  for (int j : ordering) {
    if (j < 0 || j >= n || seen[j]) throw std::invalid_argument("column ordering is not a permutation");
    seen[j] = 1;
  }
}

int prefix_length(double base, int k, int n) {
  const double len = std::pow(base, k);
  return len >= n ? n : static_cast<int>(len);
}

SimplexStatus as_simplex_status(ColGenStatus status) {
  switch (status) {
    case ColGenStatus::Success: return SimplexStatus::Optimal;
    case ColGenStatus::Infeasible: return SimplexStatus::Infeasible;
    case ColGenStatus::Unbounded: return SimplexStatus::Unbounded;
    case ColGenStatus::IterationLimit: return SimplexStatus::IterationLimit;
  }
  return SimplexStatus::IterationLimit;
}

SimplexResult failed(const ColBiResult& bi) {
  SimplexResult out;
  out.status = as_simplex_status(bi.status);
  out.x = bi.x;
  out.basis = bi.basis;
  out.iterations = bi.simplex_iterations;
  return out;
}

}  // namespace

ColBiResult col_bi(const StandardLp& lp, std::span<const int> ordering, const ColGenConfig& config) {
  lp.validate();
  const int n = lp.num_cols();
  const int m = lp.num_rows();
  check_ordering(ordering, n);
  if (!(config.theta_base > 1.0)) throw std::invalid_argument("col_bi: theta base must exceed 1");

  ColBiResult out;
  double max_cost = n > 0 ? lp.c.cwiseAbs().maxCoeff() : 0.0;
  double big_m = config.big_m;
  if (!(big_m > 0.0)) {
    big_m = 2.0 * std::max(n, 1) * (max_cost > 0.0 ? max_cost : 0.5);
    if (config.general_lp) big_m *= 10.0;
  }

  BoundedSimplex engine(lp, config.simplex);
  for (int j = 0; j < n; ++j) engine.set_active(j, false);
  const Vec start = engine.values();
  std::vector<char> retired(m, 0);
  auto set_artificial_costs = [&] {
    for (int i = 0; i < m; ++i) {
      if (retired[i]) continue;
      engine.set_cost(n + i, engine.upper(n + i) > 0.0 ? big_m : -big_m);
    }
  };
  for (int i = 0; i < m; ++i) {
    if (start[n + i] >= 0.0) {
      engine.set_bounds(n + i, 0.0, kInf);
    } else {
      engine.set_bounds(n + i, -kInf, 0.0);
    }
  }
  set_artificial_costs();

  const double tolerance = config.simplex.primal_tolerance * (1.0 + lp.b.lpNorm<Eigen::Infinity>());
  int prefix = 0;
  int escalations = 0;
  long base_iterations = engine.iterations();
  for (int k = 1;; ++k) {
    if (out.master_iterations >= config.max_master_iterations) {
      out.status = ColGenStatus::IterationLimit;
      break;
    }
    const int next = prefix_length(config.theta_base, k, n);
    for (; prefix < next; ++prefix) engine.set_active(ordering[prefix], true);
    const SimplexStatus status = engine.run(config.limits);
    ++out.master_iterations;
    if (status == SimplexStatus::Unbounded) {
      out.status = ColGenStatus::Unbounded;
      break;
    }
    if (status != SimplexStatus::Optimal) {
      out.status = status == SimplexStatus::Infeasible ? ColGenStatus::Infeasible : ColGenStatus::IterationLimit;
      break;
    }
    int positive = 0;
    for (int i = 0; i < m; ++i) {
      const int j = n + i;
      if (retired[i]) continue;
      if (engine.status(j) == VarStatus::Basic) {
        if (std::abs(engine.values()[j]) > tolerance) ++positive;
      } else {
        engine.set_bounds(j, 0.0, 0.0);
        engine.set_cost(j, 0.0);
        retired[i] = 1;
      }
    }
    out.artificial_counts.push_back(positive);
    out.master_objectives.push_back(engine.objective());
    if (positive == 0) {
      out.status = ColGenStatus::Success;
      break;
    }
    if (prefix == n) {
      if (config.general_lp && escalations < 3) {
        ++escalations;
        big_m *= 10.0;
        set_artificial_costs();
        continue;
      }
      out.status = ColGenStatus::Infeasible;
      break;
    }
  }

  if (out.status == ColGenStatus::Success) {
    for (int i = 0; i < m; ++i) {
      engine.set_bounds(n + i, 0.0, 0.0);
      engine.set_cost(n + i, 0.0);
    }
    engine.pivot_out_logicals();
    if (engine.primal_infeasibility() > config.simplex.primal_tolerance) {
      const SimplexStatus status = engine.run(config.limits);
      if (status != SimplexStatus::Optimal) out.status = ColGenStatus::Infeasible;
    }
  }
  out.big_m = big_m;
  out.x = engine.structural_values();
  out.basis = engine.basis();
  out.simplex_iterations = engine.iterations() - base_iterations;
  return out;
}

SimplexResult col_opt(const StandardLp& lp, const BasisState& start, std::span<const int> ordering,
                      const ColGenConfig& config, ColOptStats* stats) {
  lp.validate();
  const int n = lp.num_cols();
  check_ordering(ordering, n);
  ColOptStats local;
  ColOptStats& st = stats ? *stats : local;
  st = ColOptStats{};

  BoundedSimplex engine(lp, config.simplex);
  engine.load_basis(start);
  int active = 0;
  for (int j = 0; j < n; ++j) {
    const bool basic = engine.status(j) == VarStatus::Basic;
    engine.set_active(j, basic);
    active += basic ? 1 : 0;
  }

  int prefix = 0;
  for (int k = 1;; ++k) {
    const SimplexStatus status = engine.run(config.limits);
    st.simplex_iterations = engine.iterations();
    st.master_objectives.push_back(engine.objective());
    st.active_columns.push_back(active);
    if (status != SimplexStatus::Optimal) return engine.result(status);

    const Vec d = engine.reduced_costs();
    std::vector<int> violators;
    for (int j = 0; j < n; ++j) {
      if (engine.active(j) || engine.status(j) == VarStatus::Basic || engine.lower(j) == engine.upper(j)) continue;
      const bool free_var = !std::isfinite(engine.lower(j)) && !std::isfinite(engine.upper(j));
      const bool violated = free_var ? std::abs(d[j]) > config.epsilon
                            : engine.status(j) == VarStatus::NonbasicUpper ? d[j] > config.epsilon
                                                                           : d[j] < -config.epsilon;
      if (violated) violators.push_back(j);
    }
    if (violators.empty()) return engine.result(SimplexStatus::Optimal);
    if (st.master_iterations >= config.max_master_iterations) return engine.result(SimplexStatus::IterationLimit);
    ++st.master_iterations;
    for (int j : violators) {
      engine.set_active(j, true);
      ++active;
    }
    const int next = prefix_length(config.theta_base, k, n);
    for (; prefix < next; ++prefix) {
      const int j = ordering[prefix];
      if (!engine.active(j)) {
        engine.set_active(j, true);
        ++active;
      }
    }
  }
}

SimplexResult cnet_crossover(const McfProblem& p, std::span<const double> flow, const ColGenConfig& config,
                             CrossoverStats* stats) {
  const auto start = Clock::now();
  p.validate();
  const int n = p.num_arcs();
  if (static_cast<int>(flow.size()) != n) throw std::invalid_argument("cnet_crossover: flow has wrong length");
  std::vector<double> clamped(flow.begin(), flow.end());
  for (int k = 0; k < n; ++k) clamped[k] = std::clamp(clamped[k], 0.0, p.capacity[k]);

  const ShiftedMcf shifted = shift_mcf(p, clamped);
  const std::vector<double> shifted_flow = shift_flow(shifted.map, clamped);
  const Vec ratio = flow_ratio_mcf(shifted.problem, shifted_flow);
  const std::vector<int> order = column_ordering_network(p.num_nodes, shifted.problem.arcs, ratio);
  const StandardLp shifted_lp = mcf_to_lp(shifted.problem);

  CrossoverStats local;
  CrossoverStats& st = stats ? *stats : local;
  st.shift_offset = shifted.map.offset;
  st.bi = col_bi(shifted_lp, order, config);
  if (st.bi.status != ColGenStatus::Success) {
    SimplexResult out = failed(st.bi);
    out.x = Eigen::Map<const Vec>(unshift_flow(shifted.map, std::span<const double>(out.x.data(), n)).data(), n);
    st.identify_ms = elapsed_ms(start);
    return out;
  }
  const auto opt_start = Clock::now();
  st.identify_ms = elapsed_ms(start, opt_start);
  const SimplexResult opt = col_opt(shifted_lp, st.bi.basis, order, config, &st.opt);
  const auto opt_end = Clock::now();
  st.reoptimize_ms = elapsed_ms(opt_start, opt_end);

  BasisState basis = opt.basis;
  for (int k = 0; k < n; ++k) {
    if (!shifted.map.reversed[k]) continue;
    if (basis.status[k] == VarStatus::NonbasicLower) {
      basis.status[k] = VarStatus::NonbasicUpper;
    } else if (basis.status[k] == VarStatus::NonbasicUpper) {
      basis.status[k] = VarStatus::NonbasicLower;
    }
  }
  const StandardLp lp = mcf_to_lp(p);
  BoundedSimplex engine(lp, config.simplex);
  engine.load_basis(basis);
  SimplexResult out = engine.result(opt.status);
  out.iterations = st.bi.simplex_iterations + st.opt.simplex_iterations;
  st.identify_ms += elapsed_ms(opt_end);
  return out;
}

SimplexResult cnet_crossover(const StandardLp& lp, const Vec& x, const ColGenConfig& config, CrossoverStats* stats) {
  const auto start = Clock::now();
  lp.validate();
  if (x.size() != lp.num_cols()) throw std::invalid_argument("cnet_crossover: x has wrong length");
  const Vec ratio = flow_ratio_lp(lp, x.cwiseMax(0.0));
  const std::vector<int> order = column_ordering_general(ratio);
  ColGenConfig general = config;
  general.general_lp = true;

  CrossoverStats local;
  CrossoverStats& st = stats ? *stats : local;
  st.bi = col_bi(lp, order, general);
  if (st.bi.status != ColGenStatus::Success) {
    st.identify_ms = elapsed_ms(start);
    return failed(st.bi);
  }
  const auto opt_start = Clock::now();
  st.identify_ms = elapsed_ms(start, opt_start);
  SimplexResult out = col_opt(lp, st.bi.basis, order, general, &st.opt);
  st.reoptimize_ms = elapsed_ms(opt_start);
  out.iterations = st.bi.simplex_iterations + st.opt.simplex_iterations;
  return out;
}

SimplexResult tnet_crossover(const OtProblem& p, std::span<const double> plan, const ColGenConfig& config,
                             CrossoverStats* stats) {
  const auto start = Clock::now();
  const McfProblem mcf = ot_to_mcf(p);
  if (static_cast<int>(plan.size()) != mcf.num_arcs()) throw std::invalid_argument("tnet_crossover: plan has wrong size");
  CrossoverStats local;
  CrossoverStats& st = stats ? *stats : local;
  const TreeSolution tree = tree_bi(mcf, plan);
  const PushResult pushed = push_ot(p, tree);
  st.push_loops = pushed.loops;
  const Vec ratio = flow_ratio_mcf(mcf, plan);
  const std::vector<int> order = column_ordering_network(mcf.num_nodes, mcf.arcs, ratio);
  const StandardLp lp = mcf_to_lp(mcf);
  const auto opt_start = Clock::now();
  st.identify_ms = elapsed_ms(start, opt_start);
  SimplexResult out = col_opt(lp, pushed.basis, order, config, &st.opt);
  st.reoptimize_ms = elapsed_ms(opt_start);
  return out;
}

}  // namespace crossover
