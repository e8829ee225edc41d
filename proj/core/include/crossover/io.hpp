#pragma once

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crossover/model.hpp"
#include "crossover/simplex.hpp"

namespace crossover {

/// Malformed input; `line()` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Shortest decimal text that reads back to the same double ("inf"/"-inf"
/// for infinities).
std::string format_double(double value);

// DIMACS min-cost flow: "p min N A", "n id supply", "a tail head low cap cost"
// with 1-based node ids. Lower bounds must be zero; "inf" marks an
// uncapacitated arc.
McfProblem read_dimacs(std::istream& in);
void write_dimacs(std::ostream& out, const McfProblem& p);

// OT text: "ot m n", the m supplies, the n demands, then m rows of n costs.
// '#' starts a comment. Values are returned as written; the marginals must
// balance to within 1e-9 relative.
OtProblem read_ot(std::istream& in);
void write_ot(std::ostream& out, const OtProblem& p);

// MPS subset: NAME, ROWS (N and E), COLUMNS, RHS, BOUNDS (LO, UP, FR),
// ENDATA. Fields are whitespace separated on input.
StandardLp read_mps(std::istream& in);
void write_mps(std::ostream& out, const StandardLp& lp, std::string_view name = "CROSSOVER");

struct Solution {
  std::string status;
  double objective = 0.0;
  Vec x;                   // dense; only nonzeros are written
  std::vector<int> basis;  // basic columns, ascending
};

/// "status", "objective", "nnz", "index value" pairs, "basis" line.
void write_solution(std::ostream& out, const Solution& s);
/// `num_cols` sizes the dense x.
Solution read_solution(std::istream& in, int num_cols);
Solution make_solution(const SimplexResult& result);

enum class FileFormat { Dimacs, Ot, Mps, Unknown };

/// Guesses the format from the first meaningful token.
FileFormat detect_format(std::string_view text);

}  // namespace crossover
