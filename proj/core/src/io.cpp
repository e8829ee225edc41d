#include "crossover/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

namespace crossover {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream is(line);
  std::string token;
  while (is >> token) tokens.push_back(token);
  return tokens;
}

double parse_double(const std::string& token, int line) {
  if (token == "inf" || token == "+inf" || token == "infinity" || token == "Infinity") return kInf;
  if (token == "-inf" || token == "-infinity" || token == "-Infinity") return -kInf;
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ParseError("expected a number, got '" + token + "'", line);
  return value;
}

long parse_int(const std::string& token, int line) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("expected an integer, got '" + token + "'", line);
  }
  return value;
}

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

/// Non-empty lines split into tokens; text after `comment` is dropped.
std::vector<Line> tokenize(std::istream& in, char comment, int& total_lines) {
  std::vector<Line> lines;
  std::string text;
  total_lines = 0;
  while (std::getline(in, text)) {
    ++total_lines;
    if (comment != '\0') {
      const auto cut = text.find(comment);
      if (cut != std::string::npos) text.erase(cut);
    }
    std::vector<std::string> tokens = split(text);
    if (!tokens.empty()) lines.push_back({total_lines, std::move(tokens)});
  }
  return lines;
}

}  // namespace

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

McfProblem read_dimacs(std::istream& in) {
  int total = 0;
  const std::vector<Line> lines = tokenize(in, '\0', total);
  McfProblem p;
  long expected_arcs = -1;
  int header_line = 0;
  for (const Line& line : lines) {
    const auto& t = line.tokens;
    const std::string& kind = t[0];
    if (kind == "c") continue;
    if (kind == "p") {
      if (expected_arcs >= 0) throw ParseError("duplicate problem line", line.number);
      if (t.size() != 4 || t[1] != "min") throw ParseError("expected 'p min NODES ARCS'", line.number);
      const long nodes = parse_int(t[2], line.number);
      expected_arcs = parse_int(t[3], line.number);
      if (nodes < 0 || expected_arcs < 0) throw ParseError("negative size", line.number);
      p.num_nodes = static_cast<int>(nodes);
      p.supply.assign(nodes, 0.0);
      header_line = line.number;
      continue;
    }
    if (expected_arcs < 0) throw ParseError("record before the problem line", line.number);
    auto node = [&](const std::string& token) {
      const long id = parse_int(token, line.number);
      if (id < 1 || id > p.num_nodes) throw ParseError("node id " + token + " out of range", line.number);
      return static_cast<int>(id - 1);
    };
    if (kind == "n") {
      if (t.size() != 3) throw ParseError("expected 'n ID SUPPLY'", line.number);
      p.supply[node(t[1])] = parse_double(t[2], line.number);
    } else if (kind == "a") {
      if (t.size() != 6) throw ParseError("expected 'a TAIL HEAD LOW CAP COST'", line.number);
      if (static_cast<long>(p.arcs.size()) == expected_arcs) throw ParseError("more arc records than declared", line.number);
      const Arc arc{node(t[1]), node(t[2])};
      if (parse_double(t[3], line.number) != 0.0) throw ParseError("nonzero arc lower bounds are not supported", line.number);
      p.arcs.push_back(arc);
      p.capacity.push_back(parse_double(t[4], line.number));
      p.cost.push_back(parse_double(t[5], line.number));
    } else {
      throw ParseError("unknown record '" + kind + "'", line.number);
    }
  }
  if (expected_arcs < 0) throw ParseError("missing problem line", total + 1);
  if (static_cast<long>(p.arcs.size()) != expected_arcs) {
    throw ParseError("expected " + std::to_string(expected_arcs) + " arc records, found " +
                         std::to_string(p.arcs.size()),
                     total + 1);
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), header_line);
  }
  return p;
}

void write_dimacs(std::ostream& out, const McfProblem& p) {
  out << "p min " << p.num_nodes << ' ' << p.num_arcs() << '\n';
  for (int i = 0; i < p.num_nodes; ++i) {
    if (p.supply[i] != 0.0) out << "n " << i + 1 << ' ' << format_double(p.supply[i]) << '\n';
  }
  for (int k = 0; k < p.num_arcs(); ++k) {
    out << "a " << p.arcs[k].tail + 1 << ' ' << p.arcs[k].head + 1 << " 0 " << format_double(p.capacity[k]) << ' '
        << format_double(p.cost[k]) << '\n';
  }
}

OtProblem read_ot(std::istream& in) {
  int total = 0;
  const std::vector<Line> lines = tokenize(in, '#', total);
  std::vector<std::pair<const std::string*, int>> tokens;
  for (const Line& line : lines) {
    for (const std::string& t : line.tokens) tokens.emplace_back(&t, line.number);
  }
  std::size_t pos = 0;
  auto next = [&](const char* what) -> std::pair<const std::string*, int> {
    if (pos >= tokens.size()) throw ParseError(std::string("unexpected end of input, expected ") + what, total + 1);
    return tokens[pos++];
  };
  const auto head = next("'ot'");
  if (*head.first != "ot") throw ParseError("expected 'ot m n' header", head.second);
  const auto tm = next("m");
  const auto tn = next("n");
  const long m = parse_int(*tm.first, tm.second);
  const long n = parse_int(*tn.first, tn.second);
  if (m <= 0 || n <= 0) throw ParseError("sizes must be positive", tn.second);
  OtProblem p;
  p.supply.resize(m);
  p.demand.resize(n);
  p.cost.resize(m, n);
  for (long i = 0; i < m; ++i) {
    const auto t = next("supply");
    p.supply[i] = parse_double(*t.first, t.second);
  }
  for (long j = 0; j < n; ++j) {
    const auto t = next("demand");
    p.demand[j] = parse_double(*t.first, t.second);
  }
  for (long i = 0; i < m; ++i) {
    for (long j = 0; j < n; ++j) {
      const auto t = next("cost");
      p.cost(i, j) = parse_double(*t.first, t.second);
    }
  }
  if (pos < tokens.size()) throw ParseError("trailing data after the cost matrix", tokens[pos].second);
  try {
    OtProblem balanced = p;
    balanced.normalize();
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), head.second);
  }
  return p;
}

void write_ot(std::ostream& out, const OtProblem& p) {
  out << "ot " << p.num_sources() << ' ' << p.num_sinks() << '\n';
  auto row = [&](auto&& values, Eigen::Index count) {
    for (Eigen::Index k = 0; k < count; ++k) out << (k ? " " : "") << format_double(values(k));
    out << '\n';
  };
  row([&](Eigen::Index k) { return p.supply[k]; }, p.supply.size());
  row([&](Eigen::Index k) { return p.demand[k]; }, p.demand.size());
  for (int i = 0; i < p.num_sources(); ++i) row([&](Eigen::Index j) { return p.cost(i, j); }, p.cost.cols());
}

StandardLp read_mps(std::istream& in) {
  int total = 0;
  std::vector<Line> lines;
  {
    std::vector<Line> raw = tokenize(in, '\0', total);
    for (Line& l : raw) {
      if (l.tokens[0][0] != '*') lines.push_back(std::move(l));
    }
  }
  enum class Section { None, Rows, Columns, Rhs, Bounds, Done };
  Section section = Section::None;
  std::string objective;
  std::unordered_map<std::string, int> row_index;
  std::unordered_map<std::string, int> col_index;
  std::vector<std::string> col_names;
  std::vector<Eigen::Triplet<double>> entries;
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::map<int, double> rhs;
  int num_rows = 0;

  for (const Line& line : lines) {
    const auto& t = line.tokens;
    const std::string& first = t[0];
    if (section == Section::Done) throw ParseError("data after ENDATA", line.number);
    if (first == "NAME") {
      continue;
    } else if (first == "ROWS") {
      section = Section::Rows;
      continue;
    } else if (first == "COLUMNS") {
      section = Section::Columns;
      continue;
    } else if (first == "RHS" && t.size() == 1) {
      section = Section::Rhs;
      continue;
    } else if (first == "BOUNDS") {
      section = Section::Bounds;
      continue;
    } else if (first == "RANGES") {
      throw ParseError("RANGES section is not supported", line.number);
    } else if (first == "ENDATA") {
      section = Section::Done;
      continue;
    }
    switch (section) {
      case Section::None: throw ParseError("data before a section header", line.number);
      case Section::Rows: {
        if (t.size() != 2) throw ParseError("expected 'TYPE NAME' in ROWS", line.number);
        if (first == "N") {
          if (objective.empty()) objective = t[1];
        } else if (first == "E") {
          if (!row_index.emplace(t[1], num_rows).second) throw ParseError("duplicate row " + t[1], line.number);
          ++num_rows;
        } else {
          throw ParseError("row type " + first + " is not supported (only N and E)", line.number);
        }
        break;
      }
      case Section::Columns: {
        if (t.size() != 3 && t.size() != 5) throw ParseError("expected 'COLUMN ROW VALUE [ROW VALUE]'", line.number);
        auto [it, inserted] = col_index.emplace(first, static_cast<int>(col_names.size()));
        if (inserted) {
          col_names.push_back(first);
          cost.push_back(0.0);
          lower.push_back(0.0);
          upper.push_back(kInf);
        }
        const int col = it->second;
        for (std::size_t k = 1; k + 1 < t.size(); k += 2) {
          const double value = parse_double(t[k + 1], line.number);
          if (t[k] == objective) {
            cost[col] = value;
          } else {
            const auto row = row_index.find(t[k]);
            if (row == row_index.end()) throw ParseError("unknown row " + t[k], line.number);
            entries.emplace_back(row->second, col, value);
          }
        }
        break;
      }
      case Section::Rhs: {
        if (t.size() != 3 && t.size() != 5) throw ParseError("expected 'SET ROW VALUE [ROW VALUE]'", line.number);
        for (std::size_t k = 1; k + 1 < t.size(); k += 2) {
          const double value = parse_double(t[k + 1], line.number);
          if (t[k] == objective) continue;
          const auto row = row_index.find(t[k]);
          if (row == row_index.end()) throw ParseError("unknown row " + t[k], line.number);
          rhs[row->second] = value;
        }
        break;
      }
      case Section::Bounds: {
        if (t.size() < 3) throw ParseError("expected 'TYPE SET COLUMN [VALUE]'", line.number);
        const auto col = col_index.find(t[2]);
        if (col == col_index.end()) throw ParseError("unknown column " + t[2], line.number);
        const int j = col->second;
        if (first == "FR") {
          if (t.size() != 3) throw ParseError("FR bound takes no value", line.number);
          lower[j] = -kInf;
          upper[j] = kInf;
        } else if (first == "LO" || first == "UP") {
          if (t.size() != 4) throw ParseError(first + " bound needs a value", line.number);
          (first == "LO" ? lower[j] : upper[j]) = parse_double(t[3], line.number);
        } else {
          throw ParseError("bound type " + first + " is not supported (only LO, UP, FR)", line.number);
        }
        break;
      }
      case Section::Done: break;
    }
  }
  if (section != Section::Done) throw ParseError("missing ENDATA", total + 1);
  if (objective.empty()) throw ParseError("missing objective row", total + 1);

  const int n = static_cast<int>(col_names.size());
  StandardLp lp;
  lp.a.resize(num_rows, n);
  lp.a.setFromTriplets(entries.begin(), entries.end());
  lp.a.makeCompressed();
  lp.b = Vec::Zero(num_rows);
  for (const auto& [row, value] : rhs) lp.b[row] = value;
  lp.c = Eigen::Map<Vec>(cost.data(), n);
  lp.lower = Eigen::Map<Vec>(lower.data(), n);
  lp.upper = Eigen::Map<Vec>(upper.data(), n);
  for (int j = 0; j < n; ++j) {
    if (lp.a.col(j).nonZeros() == 0) lp.allow_empty_columns = true;
  }
  try {
    lp.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), total);
  }
  return lp;
}

void write_mps(std::ostream& out, const StandardLp& lp, std::string_view name) {
  char buffer[160];
  auto field_line = [&](const char* type, const std::string& a, const std::string& b, const std::string& value) {
    std::snprintf(buffer, sizeof(buffer), " %-2s %-8s  %-8s  %s", type, a.c_str(), b.c_str(), value.c_str());
    out << buffer << '\n';
  };
  auto row_name = [](int i) { return "R" + std::to_string(i + 1); };
  auto col_name = [](int j) { return "C" + std::to_string(j + 1); };
  out << "NAME          " << name << '\n';
  out << "ROWS\n";
  out << " N  OBJ\n";
  for (int i = 0; i < lp.num_rows(); ++i) out << " E  " << row_name(i) << '\n';
  out << "COLUMNS\n";
  for (int j = 0; j < lp.num_cols(); ++j) {
    field_line("", col_name(j), "OBJ", format_double(lp.c[j]));
    for (SparseMat::InnerIterator it(lp.a, j); it; ++it) {
      field_line("", col_name(j), row_name(static_cast<int>(it.row())), format_double(it.value()));
    }
  }
  out << "RHS\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    if (lp.b[i] != 0.0) field_line("", "RHS", row_name(i), format_double(lp.b[i]));
  }
  out << "BOUNDS\n";
  for (int j = 0; j < lp.num_cols(); ++j) {
    const double l = lp.lower[j];
    const double u = lp.upper[j];
    if (std::isinf(l) && std::isinf(u)) {
      field_line("FR", "BND", col_name(j), "");
      continue;
    }
    if (l != 0.0) field_line("LO", "BND", col_name(j), format_double(l));
    if (!std::isinf(u)) field_line("UP", "BND", col_name(j), format_double(u));
  }
  out << "ENDATA\n";
}

void write_solution(std::ostream& out, const Solution& s) {
  out << "status " << s.status << '\n';
  out << "objective " << format_double(s.objective) << '\n';
  std::vector<int> nonzero;
  for (Eigen::Index j = 0; j < s.x.size(); ++j) {
    if (s.x[j] != 0.0) nonzero.push_back(static_cast<int>(j));
  }
  out << "nnz " << nonzero.size() << '\n';
  for (int j : nonzero) out << j << ' ' << format_double(s.x[j]) << '\n';
  out << "basis";
  for (int j : s.basis) out << ' ' << j;
  out << '\n';
}

Solution read_solution(std::istream& in, int num_cols) {
  int total = 0;
  const std::vector<Line> lines = tokenize(in, '\0', total);
  Solution s;
  s.x = Vec::Zero(num_cols);
  std::size_t k = 0;
  auto expect = [&](const char* key, std::size_t count) -> const Line& {
    if (k >= lines.size()) throw ParseError(std::string("missing '") + key + "' line", total + 1);
    const Line& line = lines[k++];
    if (line.tokens[0] != key || (count > 0 && line.tokens.size() != count)) {
      throw ParseError(std::string("expected '") + key + "'", line.number);
    }
    return line;
  };
  s.status = expect("status", 2).tokens[1];
  const Line& obj = expect("objective", 2);
  s.objective = parse_double(obj.tokens[1], obj.number);
  const Line& nnz = expect("nnz", 2);
  const long count = parse_int(nnz.tokens[1], nnz.number);
  for (long e = 0; e < count; ++e) {
    if (k >= lines.size()) throw ParseError("missing solution entries", total + 1);
    const Line& line = lines[k++];
    if (line.tokens.size() != 2) throw ParseError("expected 'index value'", line.number);
    const long j = parse_int(line.tokens[0], line.number);
    if (j < 0 || j >= num_cols) throw ParseError("column index out of range", line.number);
    s.x[j] = parse_double(line.tokens[1], line.number);
  }
  const Line& basis = expect("basis", 0);
  for (std::size_t t = 1; t < basis.tokens.size(); ++t) s.basis.push_back(static_cast<int>(parse_int(basis.tokens[t], basis.number)));
  if (k < lines.size()) throw ParseError("trailing data", lines[k].number);
  return s;
}

Solution make_solution(const SimplexResult& result) {
  Solution s;
  s.status = std::string(to_string(result.status));
  s.objective = result.objective;
  s.x = result.x;
  s.basis = result.basis.basic;
  std::sort(s.basis.begin(), s.basis.end());
  return s;
}

FileFormat detect_format(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    const std::vector<std::string> tokens = split(line);
    if (tokens.empty()) continue;
    const std::string& first = tokens[0];
    if (first == "c" || first[0] == '#' || first[0] == '*') continue;
    if (first == "p") return FileFormat::Dimacs;
    if (first == "ot") return FileFormat::Ot;
    if (first == "NAME" || first == "ROWS") return FileFormat::Mps;
    return FileFormat::Unknown;
  }
  return FileFormat::Unknown;
}

}  // namespace crossover
