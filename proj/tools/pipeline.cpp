#include "pipeline.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "crossover/colgen.hpp"
#include "crossover/ipm.hpp"
#include "crossover/perturb.hpp"
#include "crossover/sinkhorn.hpp"

namespace crossover::cli {

std::string read_input(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Problem parse_problem(const std::string& text) {
  Problem p;
  p.format = detect_format(text);
  std::istringstream in(text);
  switch (p.format) {
    case FileFormat::Dimacs:
      p.mcf = read_dimacs(in);
      p.lp = mcf_to_lp(*p.mcf);
      break;
    case FileFormat::Ot:
      p.ot = read_ot(in);
      p.ot->normalize();
      p.lp = ot_to_lp(*p.ot);
      break;
    case FileFormat::Mps:
      p.lp = read_mps(in);
      break;
    case FileFormat::Unknown:
      throw ParseError("unrecognized input format (expected DIMACS, OT or MPS)", 1);
  }
  return p;
}

Json RunRecord::to_json(bool with_timings) const {
  Json j;
  j["command"] = command;
  j["status"] = status;
  if (with_timings) {
    Json stage_list = Json::array();
    for (const Stage& s : stages) stage_list.push_back({{"name", s.name}, {"ms", s.ms}});
    j["stages"] = stage_list;
    j["total_ms"] = total_ms;
  } else {
    Json names = Json::array();
    for (const Stage& s : stages) names.push_back(s.name);
    j["stages"] = names;
  }
  j["objective"] = objective;
  j["vertex"] = vertex;
  j["iterations"] = iterations;
  j["seed"] = seed;
  j["config"] = config;
  return j;
}

StageClock::StageClock(RunRecord& record) : record_(record), start_(Clock::now()), last_(start_) {}

void StageClock::mark(const std::string& name) {
  const auto now = Clock::now();
  record_.stages.push_back({name, std::chrono::duration<double, std::milli>(now - last_).count()});
  last_ = now;
}

void StageClock::finish() { record_.total_ms = std::chrono::duration<double, std::milli>(last_ - start_).count(); }

Strategy parse_strategy(const std::string& name) {
  if (name == "cnet") return Strategy::Cnet;
  if (name == "tnet") return Strategy::Tnet;
  if (name == "perturb") return Strategy::Perturb;
  throw UsageError("unknown strategy " + name);
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Cnet: return "cnet";
    case Strategy::Tnet: return "tnet";
    case Strategy::Perturb: return "perturb";
  }
  return "unknown";
}

double PipelineConfig::effective_gap() const {
  if (ipm_gap) return *ipm_gap;
  return strategy == Strategy::Perturb ? 1e-8 : 0.01;
}

namespace {

std::string start_name(StartMethod m) {
  switch (m) {
    case StartMethod::Auto: return "auto";
    case StartMethod::Ipm: return "ipm";
    case StartMethod::Sinkhorn: return "sinkhorn";
    case StartMethod::File: return "file";
  }
  return "unknown";
}

StartMethod resolve_start(const Problem& problem, const PipelineConfig& config) {
  if (config.start != StartMethod::Auto) return config.start;
  if (config.strategy == Strategy::Tnet && problem.ot) return StartMethod::Sinkhorn;
  return StartMethod::Ipm;
}

void check_ipm(const PrimalDualPoint& point) {
  switch (point.status) {
    case IpmStatus::Converged:
      return;
    case IpmStatus::PrimalInfeasible:
      throw InfeasibleError("interior-point method: problem is infeasible");
    case IpmStatus::DualInfeasible:
      throw InfeasibleError("interior-point method: problem is unbounded");
    case IpmStatus::IterationLimit:
    case IpmStatus::NumericalFailure:
      throw InternalError("interior-point method stopped: " + std::string(to_string(point.status)));
  }
}

void check_simplex(SimplexStatus status, const std::string& who) {
  if (status == SimplexStatus::Optimal) return;
  if (status == SimplexStatus::Infeasible) throw InfeasibleError(who + ": problem is infeasible");
  if (status == SimplexStatus::Unbounded) throw InfeasibleError(who + ": problem is unbounded");
  throw InternalError(who + ": " + std::string(to_string(status)));
}

ColGenConfig colgen_config(const PipelineConfig& config) {
  ColGenConfig cfg;
  cfg.theta_base = config.theta_base;
  cfg.epsilon = config.epsilon;
  return cfg;
}

bool feasible_vertex(const StandardLp& lp, const Vec& x) {
  const double scale = 1.0 + (lp.b.size() > 0 ? lp.b.lpNorm<Eigen::Infinity>() : 0.0);
  const double residual = lp.b.size() > 0 ? lp.residual(x).lpNorm<Eigen::Infinity>() : 0.0;
  if (!(residual <= 1e-7 * scale)) return false;
  if (!(lp.bound_violation(x) <= 1e-7 * scale)) return false;
  return vertex_check(lp, x).is_vertex;
}

}  // namespace

Json PipelineConfig::echo() const {
  Json j;
  j["strategy"] = to_string(strategy);
  j["start"] = start_name(start);
  j["ipm_gap"] = effective_gap();
  j["reopt"] = reoptimize;
  j["delta"] = delta;
  j["theta_base"] = theta_base;
  j["epsilon"] = epsilon;
  j["eta"] = eta;
  j["sinkhorn_tolerance"] = sinkhorn_tolerance;
  return j;
}

PipelineOutcome run_crossover(const Problem& problem, const PipelineConfig& config) {
  const StandardLp& lp = problem.lp;
  PipelineOutcome out;
  RunRecord& rec = out.record;
  rec.command = "crossover";
  rec.seed = config.seed;
  rec.config = config.echo();
  const StartMethod start = resolve_start(problem, config);
  rec.config["start"] = start_name(start);

  if (config.strategy == Strategy::Tnet && !problem.ot) throw UsageError("tnet needs an OT instance");
  if (start == StartMethod::Sinkhorn && !problem.ot) throw UsageError("--sinkhorn needs an OT instance");
  if (config.strategy == Strategy::Perturb && start != StartMethod::Ipm) {
    throw UsageError("perturb needs an interior-point start (--ipm-gap)");
  }

  StageClock clock(rec);
  Vec x;
  PrimalDualPoint point;
  switch (start) {
    case StartMethod::Ipm: {
      point = ipm_solve(lp, config.effective_gap());
      check_ipm(point);
      rec.iterations["ipm"] = point.iterations;
      x = point.x;
      clock.mark("ipm");
      break;
    }
    case StartMethod::Sinkhorn: {
      SinkhornOptions opts;
      opts.eta = config.eta;
      opts.tolerance = config.sinkhorn_tolerance;
      const SinkhornResult sk = sinkhorn(*problem.ot, opts);
      rec.iterations["sinkhorn"] = sk.iterations;
      rec.config["eta"] = sk.eta;
      x = sk.flat_plan();
      clock.mark("sinkhorn");
      break;
    }
    case StartMethod::File:
      if (config.start_x.size() != lp.num_cols()) throw UsageError("--from: solution length does not match the problem");
      x = config.start_x;
      clock.mark("load");
      break;
    case StartMethod::Auto:
      break;
  }

  const ColGenConfig cg = colgen_config(config);
  SimplexResult result;
  double reopt_ms = 0.0;
  auto split_crossover = [&](const std::string& identify) {
    clock.mark("crossover");
    Stage whole = rec.stages.back();
    rec.stages.pop_back();
    rec.stages.push_back({identify, whole.ms - reopt_ms});
    rec.stages.push_back({"reoptimization", reopt_ms});
  };

  switch (config.strategy) {
    case Strategy::Cnet: {
      CrossoverStats st;
      std::vector<double> flow(x.data(), x.data() + x.size());
      if (problem.mcf) {
        result = cnet_crossover(*problem.mcf, flow, cg, &st);
      } else if (problem.ot) {
        result = cnet_crossover(ot_to_mcf(*problem.ot), flow, cg, &st);
      } else {
        result = cnet_crossover(lp, x, cg, &st);
      }
      reopt_ms = st.reoptimize_ms;
      rec.iterations["col_bi_masters"] = st.bi.master_iterations;
      rec.iterations["col_bi_pivots"] = st.bi.simplex_iterations;
      rec.iterations["col_opt_masters"] = st.opt.master_iterations;
      rec.iterations["col_opt_pivots"] = st.opt.simplex_iterations;
      split_crossover("col_bi");
      break;
    }
    case Strategy::Tnet: {
      CrossoverStats st;
      std::vector<double> plan(x.data(), x.data() + x.size());
      result = tnet_crossover(*problem.ot, plan, cg, &st);
      reopt_ms = st.reoptimize_ms;
      rec.iterations["push_loops"] = st.push_loops;
      rec.iterations["col_opt_masters"] = st.opt.master_iterations;
      rec.iterations["col_opt_pivots"] = st.opt.simplex_iterations;
      split_crossover("tree_bi");
      break;
    }
    case Strategy::Perturb: {
      PerturbConfig pc;
      pc.delta = config.delta;
      pc.seed = config.seed;
      pc.reoptimize = config.reoptimize;
      pc.colgen = cg;
      const PerturbResult pr = perturb_crossover(lp, point, pc);
      result = pr.result;
      rec.iterations["attempts"] = pr.attempts;
      rec.iterations["pivots"] = result.iterations;
      rec.config["fallback_used"] = pr.used_fallback;
      clock.mark("perturb");
      break;
    }
  }
  check_simplex(result.status, to_string(config.strategy));

  rec.vertex = feasible_vertex(lp, result.x);
  clock.mark("verify");
  clock.finish();
  rec.objective = result.objective;
  rec.status = rec.vertex ? "optimal_vertex" : "not_a_vertex";
  if (!rec.vertex) throw InternalError("crossover output failed the vertex check");
  out.result = std::move(result);
  return out;
}

Solution run_solve(const Problem& problem, const std::string& method, double gap, RunRecord& record) {
  record.command = "solve";
  record.config = Json{{"method", method}, {"gap", gap}};
  StageClock clock(record);
  Solution sol;
  if (method == "simplex") {
    const SimplexResult r = solve(problem.lp);
    clock.mark("simplex");
    check_simplex(r.status, "simplex");
    record.iterations["simplex"] = r.iterations;
    record.vertex = true;
    sol = make_solution(r);
  } else if (method == "ipm") {
    const PrimalDualPoint point = ipm_solve(problem.lp, gap);
    clock.mark("ipm");
    check_ipm(point);
    record.iterations["ipm"] = point.iterations;
    sol.status = "converged";
    sol.objective = problem.lp.objective(point.x);
    sol.x = point.x;
  } else {
    throw UsageError("unknown method " + method);
  }
  clock.finish();
  record.status = sol.status;
  record.objective = sol.objective;
  return sol;
}

}  // namespace crossover::cli
