#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>

#include "crossover/instances.hpp"

namespace crossover::cli {

namespace {

struct BenchCase {
  std::string name;
  std::function<Problem()> make;
  Strategy strategy;
  double tolerance;  // relative objective tolerance
};

std::vector<BenchCase> suite_cases(const std::string& suite, std::uint64_t seed) {
  std::vector<BenchCase> cases;
  auto mcf_cases = [&](int count, int nodes, int arcs) {
    for (int k = 0; k < count; ++k) {
      const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
      cases.push_back({"mcf-" + std::to_string(nodes) + "-" + std::to_string(arcs) + "-s" + std::to_string(s),
                       [=] {
                         McfSpec spec;
                         spec.nodes = nodes;
                         spec.arcs = arcs;
                         spec.seed = s;
                         Problem p;
                         p.format = FileFormat::Dimacs;
                         p.mcf = gen_mcf(spec);
                         p.lp = mcf_to_lp(*p.mcf);
                         return p;
                       },
                       Strategy::Cnet, 1e-9});
    }
  };
  if (suite == "mcf-small") {
    mcf_cases(10, 50, 200);
  } else if (suite == "mcf-large") {
    mcf_cases(5, 500, 2500);
  } else if (suite == "ot-small") {
    for (int k = 0; k < 5; ++k) {
      const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
      cases.push_back({"ot-30x30-s" + std::to_string(s),
                       [=] {
                         Problem p;
                         p.format = FileFormat::Ot;
                         p.ot = gen_ot_random(30, 30, s);
                         p.lp = ot_to_lp(*p.ot);
                         return p;
                       },
                       Strategy::Tnet, 1e-6});
    }
  } else {
    throw UsageError("unknown bench suite " + suite);
  }
  return cases;
}

double stage_ms(const RunRecord& rec, const std::string& name) {
  for (const Stage& s : rec.stages) {
    if (s.name == name) return s.ms;
  }
  return 0.0;
}

BenchRow run_case(const BenchCase& c, std::uint64_t seed) {
  const Problem problem = c.make();
  BenchRow row;
  row.instance = c.name;
  row.rows = problem.lp.num_rows();
  row.cols = problem.lp.num_cols();

  const auto t0 = std::chrono::steady_clock::now();
  const SimplexResult cold = solve(problem.lp);
  row.cold_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  row.cold_objective = cold.objective;

  PipelineConfig cfg;
  cfg.strategy = c.strategy;
  cfg.seed = seed;
  try {
    const PipelineOutcome out = run_crossover(problem, cfg);
    const RunRecord& rec = out.record;
    row.start = rec.config["start"].get<std::string>();
    row.start_ms = stage_ms(rec, row.start);
    row.crossover_ms = stage_ms(rec, c.strategy == Strategy::Tnet ? "tree_bi" : "col_bi");
    row.reopt_ms = stage_ms(rec, "reoptimization");
    row.objective = out.result.objective;
    row.vertex = rec.vertex;
  } catch (const std::exception&) {
    row.vertex = false;
    row.objective = std::nan("");
  }
  row.objective_equal = cold.status == SimplexStatus::Optimal &&
                        std::abs(row.objective - row.cold_objective) <= c.tolerance * std::max(1.0, std::abs(row.cold_objective));
  return row;
}

}  // namespace

Json BenchRow::to_json() const {
  return Json{{"instance", instance},       {"rows", rows},
              {"cols", cols},               {"start", start},
              {"cold_ms", cold_ms},         {"start_ms", start_ms},
              {"crossover_ms", crossover_ms}, {"reopt_ms", reopt_ms},
              {"pipeline_ms", pipeline_ms()}, {"cold_objective", cold_objective},
              {"objective", objective},     {"objective_equal", objective_equal},
              {"vertex", vertex}};
}

std::vector<std::string> bench_suites() { return {"mcf-small", "mcf-large", "ot-small"}; }

std::vector<BenchRow> run_bench(const std::string& suite, std::uint64_t seed, int threads) {
  const std::vector<BenchCase> cases = suite_cases(suite, seed);
  std::vector<BenchRow> rows(cases.size());
  std::vector<std::exception_ptr> errors(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cases.size(); k = next++) {
      try {
        rows[k] = run_case(cases[k], seed);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int count = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(cases.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

void print_bench_table(std::ostream& out, const std::vector<BenchRow>& rows) {
  char line[256];
  std::snprintf(line, sizeof line, "%-22s %6s %7s %-8s %10s %10s %10s %10s %10s %6s %6s\n", "instance", "rows", "cols",
                "start", "cold_ms", "start_ms", "cross_ms", "reopt_ms", "pipe_ms", "objeq", "vertex");
  out << line;
  for (const BenchRow& r : rows) {
    std::snprintf(line, sizeof line, "%-22s %6d %7d %-8s %10.2f %10.2f %10.2f %10.2f %10.2f %6s %6s\n",
                  r.instance.c_str(), r.rows, r.cols, r.start.c_str(), r.cold_ms, r.start_ms, r.crossover_ms, r.reopt_ms,
                  r.pipeline_ms(), r.objective_equal ? "true" : "false", r.vertex ? "true" : "false");
    out << line;
  }
}

int threads_from_env() {
  const char* value = std::getenv("CROSSOVER_THREADS");
  if (!value) return 1;
  const int n = std::atoi(value);
  return n > 0 ? n : 1;
}

}  // namespace crossover::cli
