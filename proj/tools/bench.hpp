#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "pipeline.hpp"

namespace crossover::cli {

struct BenchRow {
  std::string instance;
  int rows = 0;
  int cols = 0;
  std::string start;  // "ipm" or "sinkhorn"
  double cold_ms = 0.0;
  double start_ms = 0.0;
  double crossover_ms = 0.0;
  double reopt_ms = 0.0;
  double cold_objective = 0.0;
  double objective = 0.0;
  bool objective_equal = false;
  bool vertex = false;

  double pipeline_ms() const { return start_ms + crossover_ms + reopt_ms; }
  Json to_json() const;
};

/// Suites: mcf-small (10 x 50 nodes / 200 arcs), mcf-large (5 x 500 nodes /
/// 2500 arcs), ot-small (5 x 30 x 30 random OT).
std::vector<std::string> bench_suites();

/// Instances run on `threads` workers; each pipeline is sequential. The
/// objective-equal flag compares against a cold simplex solve of the same
/// instance.
std::vector<BenchRow> run_bench(const std::string& suite, std::uint64_t seed, int threads);

void print_bench_table(std::ostream& out, const std::vector<BenchRow>& rows);

/// Worker count from CROSSOVER_THREADS, default 1.
int threads_from_env();

}  // namespace crossover::cli
