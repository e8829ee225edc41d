#include <gtest/gtest.h>

#include <sstream>

#include "crossover/instances.hpp"
#include "crossover/io.hpp"
#include "crossover/random.hpp"
#include "fixtures.hpp"

using namespace crossover;

namespace {

StandardLp random_bounded_lp(std::uint64_t seed) {
  Rng rng(seed);
  const int m = 2 + static_cast<int>(rng.uniform_int(0, 4));
  const int n = m + 1 + static_cast<int>(rng.uniform_int(0, 6));
  DenseMat a = DenseMat::Zero(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (rng.uniform() < 0.6) a(i, j) = rng.normal() / 3.0;
    }
  }
  Vec b(m), c(n);
  for (int i = 0; i < m; ++i) b[i] = rng.uniform(-10, 10);
  for (int j = 0; j < n; ++j) c[j] = rng.uniform_int(-50, 50) / 7.0;
  StandardLp lp = fixtures::dense_lp(a, b, c);
  lp.allow_empty_columns = true;
  for (int j = 0; j < n; ++j) {
    const double u = rng.uniform();
    if (u < 0.2) {
      lp.lower[j] = -kInf;
    } else if (u < 0.4) {
      lp.lower[j] = rng.uniform(-3, 0);
      lp.upper[j] = rng.uniform(0.1, 5);
    } else if (u < 0.5) {
      lp.upper[j] = 1e-3 * rng.uniform();
    }
  }
  return lp;
}

template <typename F>
int parse_error_line(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Dimacs, HandExample) {
  std::istringstream in("p min 2 1\nn 1 1\nn 2 -1\na 1 2 0 10 3\n");
  const McfProblem p = read_dimacs(in);
  EXPECT_EQ(p.num_nodes, 2);
  ASSERT_EQ(p.num_arcs(), 1);
  EXPECT_EQ(p.arcs[0], (Arc{0, 1}));
  EXPECT_EQ(p.capacity[0], 10.0);
  EXPECT_EQ(p.cost[0], 3.0);
  EXPECT_EQ(p.supply, (std::vector<double>{1.0, -1.0}));
}

TEST(Dimacs, CommentsAndInfiniteCapacity) {
  std::istringstream in("c hello\np min 2 1\nn 1 4\nn 2 -4\na 1 2 0 inf 3\n");
  EXPECT_EQ(read_dimacs(in).capacity[0], kInf);
}

TEST(Dimacs, RoundTrip) {
  for (int seed = 0; seed < 100; ++seed) {
    McfSpec spec;
    spec.nodes = 5 + seed % 20;
    spec.arcs = spec.nodes * 2;
    spec.seed = seed;
    const McfProblem p = gen_mcf(spec);
    std::ostringstream out;
    write_dimacs(out, p);
    std::istringstream in(out.str());
    const McfProblem q = read_dimacs(in);
    EXPECT_EQ(q.num_nodes, p.num_nodes);
    EXPECT_EQ(q.arcs, p.arcs);
    EXPECT_EQ(q.cost, p.cost);
    EXPECT_EQ(q.capacity, p.capacity);
    EXPECT_EQ(q.supply, p.supply);
    std::ostringstream again;
    write_dimacs(again, q);
    EXPECT_EQ(again.str(), out.str());
  }
}

TEST(Dimacs, TruncatedFileNamesLine) {
  const int line = parse_error_line([] {
    std::istringstream in("p min 2 2\nn 1 1\nn 2 -1\na 1 2 0 10 3\n");
    read_dimacs(in);
  });
  EXPECT_EQ(line, 5);
}

TEST(Dimacs, BadRecordNamesLine) {
  const int line = parse_error_line([] {
    std::istringstream in("p min 2 1\nn 1 1\nn 2 -1\na 1 x 0 10 3\n");
    read_dimacs(in);
  });
  EXPECT_EQ(line, 4);
}

TEST(Dimacs, RejectsNonzeroLowerBound) {
  std::istringstream in("p min 2 1\nn 1 1\nn 2 -1\na 1 2 1 10 3\n");
  EXPECT_THROW(read_dimacs(in), ParseError);
}

TEST(OtFormat, RoundTrip) {
  for (int seed = 0; seed < 100; ++seed) {
    const OtProblem p = gen_ot_random(1 + seed % 6, 1 + seed % 5, seed);
    std::ostringstream out;
    write_ot(out, p);
    std::istringstream in(out.str());
    const OtProblem q = read_ot(in);
    EXPECT_EQ(q.supply, p.supply);
    EXPECT_EQ(q.demand, p.demand);
    EXPECT_EQ(q.cost, p.cost);
  }
}

TEST(OtFormat, CommentsAndTruncation) {
  std::istringstream ok("# two by one\not 2 1\n0.5 0.5 # supplies\n1\n3\n4\n");
  const OtProblem p = read_ot(ok);
  EXPECT_EQ(p.cost(1, 0), 4.0);
  const int line = parse_error_line([] {
    std::istringstream in("ot 2 2\n0.5 0.5\n0.5 0.5\n1 2\n");
    read_ot(in);
  });
  EXPECT_EQ(line, 5);
}

TEST(Mps, RoundTrip) {
  for (int seed = 0; seed < 100; ++seed) {
    const StandardLp lp = random_bounded_lp(seed);
    std::ostringstream out;
    write_mps(out, lp);
    std::istringstream in(out.str());
    const StandardLp q = read_mps(in);
    EXPECT_EQ(DenseMat(q.a), DenseMat(lp.a)) << out.str();
    EXPECT_EQ(q.b, lp.b);
    EXPECT_EQ(q.c, lp.c);
    EXPECT_EQ(q.lower, lp.lower);
    EXPECT_EQ(q.upper, lp.upper);
  }
}

TEST(Mps, HandWritten) {
  std::istringstream in(
      "NAME          TINY\n"
      "ROWS\n"
      " N  COST\n"
      " E  R1\n"
      "COLUMNS\n"
      "    X1        COST      -2.0         R1        1.0\n"
      "    X2        COST      -1.0         R1        1.0\n"
      "RHS\n"
      "    RHS       R1        1.0\n"
      "BOUNDS\n"
      " UP BND       X2        0.5\n"
      "ENDATA\n");
  const StandardLp lp = read_mps(in);
  EXPECT_EQ(lp.num_rows(), 1);
  EXPECT_EQ(lp.num_cols(), 2);
  EXPECT_EQ(lp.c[0], -2.0);
  EXPECT_EQ(lp.upper[1], 0.5);
  EXPECT_EQ(lp.b[0], 1.0);
}

TEST(Mps, RejectsUnsupportedRowType) {
  std::istringstream in("NAME X\nROWS\n N  COST\n L  R1\nCOLUMNS\nENDATA\n");
  EXPECT_EQ(parse_error_line([&] { read_mps(in); }), 4);
}

TEST(Mps, TruncatedFileIsParseError) {
  std::istringstream in("NAME X\nROWS\n N  COST\n E  R1\nCOLUMNS\n    X1  COST  1  R1  1\n");
  EXPECT_THROW(read_mps(in), ParseError);
}

TEST(SolutionFormat, RoundTripAndStableOrder) {
  Solution s;
  s.status = "optimal";
  s.objective = -2.5;
  s.x = Vec::Zero(6);
  s.x[4] = 0.1;
  s.x[1] = 3.0;
  s.basis = {1, 4, 7};
  std::ostringstream out;
  write_solution(out, s);
  EXPECT_EQ(out.str(), "status optimal\nobjective -2.5\nnnz 2\n1 3\n4 0.1\nbasis 1 4 7\n");
  std::istringstream in(out.str());
  const Solution t = read_solution(in, 6);
  EXPECT_EQ(t.status, s.status);
  EXPECT_EQ(t.objective, s.objective);
  EXPECT_EQ(t.x, s.x);
  EXPECT_EQ(t.basis, s.basis);
}

TEST(SolutionFormat, IndexOutOfRange) {
  std::istringstream in("status optimal\nobjective 0\nnnz 1\n9 1\nbasis\n");
  EXPECT_EQ(parse_error_line([&] { read_solution(in, 3); }), 4);
}

TEST(FormatDoubleTest, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(kInf), "inf");
  EXPECT_EQ(format_double(-kInf), "-inf");
  EXPECT_EQ(format_double(-0.0), "0");
  Rng rng(1);
  for (int k = 0; k < 1000; ++k) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform_int(-20, 20));
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(DetectFormat, FirstMeaningfulToken) {
  EXPECT_EQ(detect_format("c comment\np min 2 1\n"), FileFormat::Dimacs);
  EXPECT_EQ(detect_format("# x\not 1 1\n"), FileFormat::Ot);
  EXPECT_EQ(detect_format("* note\nNAME foo\n"), FileFormat::Mps);
  EXPECT_EQ(detect_format("hello\n"), FileFormat::Unknown);
  EXPECT_EQ(detect_format(""), FileFormat::Unknown);
}
