#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bench.hpp"
#include "crossover/instances.hpp"
#include "crossover/io.hpp"
#include "crossover/perturb.hpp"
#include "crossover/sinkhorn.hpp"
#include "pipeline.hpp"

using namespace crossover;
using namespace crossover::cli;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kParse = 2, kInfeasible = 3, kInternal = 4 };

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

void write_record(const std::string& path, const RunRecord& record) {
  if (path.empty()) return;
  emit(path, record.to_json().dump(2) + "\n");
}

Raster load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  return read_pgm(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LP crossover: recover optimal vertices from approximate solutions"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string output;
  app.add_option("-o,--output", output, "Write the main output here instead of stdout");

  // gen-mcf
  McfSpec mcf_spec;
  auto* gen_mcf_cmd = app.add_subcommand("gen-mcf", "Random connected min-cost flow instance (DIMACS)");
  gen_mcf_cmd->add_option("--nodes", mcf_spec.nodes, "Node count")->capture_default_str();
  gen_mcf_cmd->add_option("--arcs", mcf_spec.arcs, "Arc count")->capture_default_str();
  gen_mcf_cmd->add_option("--seed", mcf_spec.seed, "Random seed")->capture_default_str();
  gen_mcf_cmd->add_option("--min-cost", mcf_spec.min_cost)->capture_default_str();
  gen_mcf_cmd->add_option("--max-cost", mcf_spec.max_cost)->capture_default_str();
  gen_mcf_cmd->add_option("--min-capacity", mcf_spec.min_capacity)->capture_default_str();
  gen_mcf_cmd->add_option("--max-capacity", mcf_spec.max_capacity)->capture_default_str();

  // gen-ot
  int ot_size = 8;
  int ot_sources = 0;
  int ot_sinks = 0;
  std::uint64_t ot_seed = 0;
  std::string image_a;
  std::string image_b;
  int alpha = 1;
  double power = 2.0;
  auto* gen_ot_cmd = app.add_subcommand("gen-ot", "Optimal transport instance from random points or two PGM images");
  gen_ot_cmd->add_option("--size", ot_size, "Sources and sinks of a random instance")->capture_default_str();
  gen_ot_cmd->add_option("--sources", ot_sources, "Override the source count");
  gen_ot_cmd->add_option("--sinks", ot_sinks, "Override the sink count");
  gen_ot_cmd->add_option("--seed", ot_seed, "Random seed")->capture_default_str();
  auto* image_a_opt = gen_ot_cmd->add_option("--image-a", image_a, "Source image (PGM)")->check(CLI::ExistingFile);
  auto* image_b_opt = gen_ot_cmd->add_option("--image-b", image_b, "Target image (PGM)")->check(CLI::ExistingFile);
  image_a_opt->needs(image_b_opt);
  image_b_opt->needs(image_a_opt);
  gen_ot_cmd->add_option("--alpha", alpha, "Image upscaling factor")->capture_default_str();
  gen_ot_cmd->add_option("--power", power, "Cost is pixel distance to this power")->capture_default_str();

  // sinkhorn
  std::string input = "-";
  SinkhornOptions sk_opts;
  auto* sinkhorn_cmd = app.add_subcommand("sinkhorn", "Entropic OT plan");
  sinkhorn_cmd->add_option("input", input, "OT instance, '-' for stdin")->capture_default_str();
  sinkhorn_cmd->add_option("--eta", sk_opts.eta, "Regularization (0: 0.01 max C)")->capture_default_str();
  sinkhorn_cmd->add_option("--tol", sk_opts.tolerance, "L1 marginal tolerance")->capture_default_str();
  sinkhorn_cmd->add_option("--max-iter", sk_opts.max_iterations)->capture_default_str();

  // solve
  std::string method = "simplex";
  double solve_gap = 1e-8;
  std::string record_path;
  auto* solve_cmd = app.add_subcommand("solve", "Solve from scratch");
  solve_cmd->add_option("input", input, "DIMACS, OT or MPS; '-' for stdin")->capture_default_str();
  solve_cmd->add_option("--method", method)->check(CLI::IsMember({"simplex", "ipm"}))->capture_default_str();
  solve_cmd->add_option("--gap", solve_gap, "Relative gap target of the ipm")->capture_default_str();
  solve_cmd->add_option("--record", record_path, "Write the JSON run record here");

  // crossover
  PipelineConfig pc;
  std::string strategy = "cnet";
  std::string from_path;
  double ipm_gap = 0.0;
  bool use_sinkhorn = false;
  bool json_output = false;
  auto* cross_cmd = app.add_subcommand("crossover", "Recover an optimal vertex from an approximate solution");
  cross_cmd->add_option("input", input, "DIMACS, OT or MPS; '-' for stdin")->capture_default_str();
  cross_cmd->add_option("--strategy", strategy)->check(CLI::IsMember({"cnet", "tnet", "perturb"}))->capture_default_str();
  auto* from_opt = cross_cmd->add_option("--from", from_path, "Start from a solution file")->check(CLI::ExistingFile);
  auto* sk_flag = cross_cmd->add_flag("--sinkhorn", use_sinkhorn, "Start from a Sinkhorn plan (OT only)");
  auto* gap_opt = cross_cmd->add_option("--ipm-gap", ipm_gap, "Start from the ipm at this gap (default 0.01; 1e-8 for perturb)");
  from_opt->excludes(sk_flag)->excludes(gap_opt);
  sk_flag->excludes(gap_opt);
  cross_cmd->add_flag("--reopt", pc.reoptimize, "perturb: reoptimize on the original costs");
  cross_cmd->add_option("--seed", pc.seed, "Seed of the perturbation")->capture_default_str();
  cross_cmd->add_option("--delta", pc.delta, "Perturbation size relative to max(|c|, 1)")->capture_default_str();
  cross_cmd->add_option("--theta", pc.theta_base, "Column generation schedule base: theta_k = theta^k")->capture_default_str();
  cross_cmd->add_option("--epsilon", pc.epsilon, "Reduced-cost tolerance of the final pricing")->capture_default_str();
  cross_cmd->add_option("--eta", pc.eta, "Sinkhorn regularization (0: 0.01 max C)")->capture_default_str();
  cross_cmd->add_option("--sinkhorn-tol", pc.sinkhorn_tolerance)->capture_default_str();
  cross_cmd->add_option("--record", record_path, "Write the JSON run record here");
  cross_cmd->add_flag("--json", json_output, "Print the run record instead of the solution");

  // bench
  std::string suite = "mcf-small";
  std::uint64_t bench_seed = 1;
  int threads = 0;
  std::string bench_json;
  auto* bench_cmd = app.add_subcommand("bench", "Cold simplex versus start method plus crossover");
  bench_cmd->add_option("--suite", suite)->check(CLI::IsMember(bench_suites()))->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed)->capture_default_str();
  bench_cmd->add_option("--threads", threads, "Workers (default CROSSOVER_THREADS or 1)");
  bench_cmd->add_option("--json", bench_json, "Write one JSON record per instance here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_mcf_cmd) {
      std::ostringstream out;
      write_dimacs(out, gen_mcf(mcf_spec));
      emit(output, out.str());
    } else if (*gen_ot_cmd) {
      OtProblem p;
      if (!image_a.empty()) {
        p = gen_ot_from_images(load_pgm(image_a), load_pgm(image_b), alpha, power);
      } else {
        p = gen_ot_random(ot_sources > 0 ? ot_sources : ot_size, ot_sinks > 0 ? ot_sinks : ot_size, ot_seed);
      }
      std::ostringstream out;
      write_ot(out, p);
      emit(output, out.str());
    } else if (*sinkhorn_cmd) {
      std::istringstream in(read_input(input));
      OtProblem p = read_ot(in);
      p.normalize();
      const SinkhornResult r = sinkhorn(p, sk_opts);
      Solution sol;
      sol.status = r.converged ? "converged" : "not_converged";
      sol.x = r.flat_plan();
      sol.objective = ot_to_lp(p).objective(sol.x);
      std::ostringstream out;
      write_solution(out, sol);
      emit(output, out.str());
      if (!r.converged) return kInternal;
    } else if (*solve_cmd) {
      const Problem problem = parse_problem(read_input(input));
      RunRecord record;
      const Solution sol = run_solve(problem, method, solve_gap, record);
      std::ostringstream out;
      write_solution(out, sol);
      emit(output, out.str());
      write_record(record_path, record);
    } else if (*cross_cmd) {
      const Problem problem = parse_problem(read_input(input));
      pc.strategy = parse_strategy(strategy);
      if (!from_path.empty()) {
        std::istringstream in(read_input(from_path));
        pc.start = StartMethod::File;
        pc.start_x = read_solution(in, problem.lp.num_cols()).x;
      } else if (use_sinkhorn) {
        pc.start = StartMethod::Sinkhorn;
      } else if (*gap_opt) {
        pc.start = StartMethod::Ipm;
        pc.ipm_gap = ipm_gap;
      }
      const PipelineOutcome outcome = run_crossover(problem, pc);
      std::ostringstream out;
      if (json_output) {
        out << outcome.record.to_json().dump(2) << "\n";
      } else {
        write_solution(out, make_solution(outcome.result));
      }
      emit(output, out.str());
      write_record(record_path, outcome.record);
    } else if (*bench_cmd) {
      const std::vector<BenchRow> rows = run_bench(suite, bench_seed, threads > 0 ? threads : threads_from_env());
      std::ostringstream out;
      print_bench_table(out, rows);
      emit(output, out.str());
      if (!bench_json.empty()) {
        std::ostringstream records;
        for (const BenchRow& r : rows) records << r.to_json().dump() << "\n";
        emit(bench_json, records.str());
      }
      for (const BenchRow& r : rows) {
        if (!r.objective_equal || !r.vertex) return kInternal;
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kParse;
  } catch (const InfeasibleError& e) {
    std::cerr << e.what() << "\n";
    return kInfeasible;
  } catch (const BoundViolation& e) {
    std::cerr << "bound violation: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
