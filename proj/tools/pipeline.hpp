#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "crossover/io.hpp"
#include "crossover/model.hpp"
#include "crossover/simplex.hpp"

namespace crossover::cli {

using Json = nlohmann::ordered_json;

/// Bad flag combination or missing input; exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Infeasible or unbounded problem; exit code 3.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failed internal check (vertex check, solver breakdown); exit code 4.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Problem {
  FileFormat format = FileFormat::Unknown;
  std::optional<McfProblem> mcf;
  std::optional<OtProblem> ot;
  StandardLp lp;
};

Problem parse_problem(const std::string& text);
/// Reads a whole file, or stdin for "-".
std::string read_input(const std::string& path);

struct Stage {
  std::string name;
  double ms = 0.0;
};

struct RunRecord {
  std::string command;
  std::string status;
  std::vector<Stage> stages;
  double total_ms = 0.0;
  double objective = 0.0;
  bool vertex = false;
  Json iterations = Json::object();
  std::uint64_t seed = 0;
  Json config = Json::object();

  Json to_json(bool with_timings = true) const;
};

/// Contiguous stage timer: each mark closes the interval since the previous
/// one, so the stages add up to the total.
class StageClock {
 public:
  explicit StageClock(RunRecord& record);
  void mark(const std::string& name);
  void finish();

 private:
  using Clock = std::chrono::steady_clock;
  RunRecord& record_;
  Clock::time_point start_;
  Clock::time_point last_;
};

enum class Strategy { Cnet, Tnet, Perturb };
enum class StartMethod { Auto, Ipm, Sinkhorn, File };

Strategy parse_strategy(const std::string& name);
std::string to_string(Strategy s);

struct PipelineConfig {
  Strategy strategy = Strategy::Cnet;
  StartMethod start = StartMethod::Auto;
  Vec start_x;                      // StartMethod::File
  std::optional<double> ipm_gap;    // default 0.01, 1e-8 for perturb
  bool reoptimize = false;
  std::uint64_t seed = 0;
  double delta = 1e-6;
  double theta_base = 2.0;
  double epsilon = 1e-9;
  double eta = 0.0;                 // 0: 0.01 max|C|
  double sinkhorn_tolerance = 1e-6;

  double effective_gap() const;
  Json echo() const;
};

struct PipelineOutcome {
  SimplexResult result;
  RunRecord record;
};

/// Start point, crossover, then vertex_check on the original LP. Throws
/// InternalError when the output is not a feasible vertex.
PipelineOutcome run_crossover(const Problem& problem, const PipelineConfig& config);

/// Cold solve with the simplex engine or the interior-point method.
Solution run_solve(const Problem& problem, const std::string& method, double gap, RunRecord& record);

}  // namespace crossover::cli
