#include "kgal/scalars.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace kgal;

TEST(ExactComplex, ArithmeticIsExact) {
  ExactComplex a(rational(1, 2), rational(3));
  ExactComplex b(rational(-1, 3), rational(1, 4));
  EXPECT_EQ((a * b) / b, a);
  EXPECT_EQ(a - a, ExactComplex());
  EXPECT_EQ(ExactComplex::i() * ExactComplex::i(), ExactComplex(-1));
  EXPECT_EQ(a.conj().im(), rational(-3));
  EXPECT_EQ(a.norm2(), rational(37, 4));
  EXPECT_THROW(a / ExactComplex(), std::domain_error);
}

TEST(ExactComplex, PlainTextForm) {
  EXPECT_EQ(ExactComplex(rational(1, 2), rational(3)).str(), "1/2+3*I");
  EXPECT_EQ((-ExactComplex::i()).str(), "-I");
  EXPECT_EQ(ExactComplex().str(), "0");
}

TEST(GradedScalar, TruncatedProduct) {
  GradedScalar x = GradedScalar(ExactComplex(1)) + GradedScalar::lambda();
  auto sq = graded_mul(x, x, 1);
  EXPECT_EQ(sq.coeff(0, 0), ExactComplex(1));
  EXPECT_EQ(sq.coeff(1, 0), ExactComplex(2));
  EXPECT_TRUE(sq.coeff(2, 0).is_zero());
  EXPECT_EQ(graded_mul(x, x, 2).coeff(2, 0), ExactComplex(1));
  EXPECT_THROW(GradedScalar(ExactComplex(1), -1), std::invalid_argument);
}

TEST(ExactSolve, FeasibleSystemSolvesExactly) {
  std::vector<std::vector<ExactComplex>> A{{1, 2}, {3, 4}, {4, 6}};
  std::vector<ExactComplex> b{5, 6, 11};
  auto res = solve_linear_exact(A, b);
  ASSERT_TRUE(std::holds_alternative<Solution>(res));
  const auto& s = std::get<Solution>(res);
  EXPECT_EQ(s.rank, 2);
  EXPECT_EQ(s.x[0], ExactComplex(-4));
  EXPECT_EQ(s.x[1], ExactComplex(rational(9, 2)));
}

TEST(ExactSolve, InfeasibleSystemReturnsReplayableWitness) {
  SparseSystem sys;
  sys.cols = 2;
  sys.add_row({{0, 1}, {1, ExactComplex::i()}}, 1);
  sys.add_row({{0, 2}, {1, ExactComplex(0, 2)}}, 3);
  auto res = solve_linear_exact(sys);
  ASSERT_TRUE(std::holds_alternative<Infeasible>(res));
  EXPECT_TRUE(verify_witness(sys, std::get<Infeasible>(res).witness));
  EXPECT_FALSE(verify_witness(sys, {ExactComplex(1), ExactComplex(0)}));
}

TEST(ExactSolve, ShapeMismatchIsUsageError) {
  std::vector<std::vector<ExactComplex>> A{{1, 2}};
  EXPECT_THROW(solve_linear_exact(A, {1, 2}), std::invalid_argument);
  EXPECT_THROW(solve_linear_exact({{1, 2}, {1}}, {1, 2}), std::invalid_argument);
  SparseSystem sys;
  sys.cols = 1;
  EXPECT_THROW(sys.add_row({{3, 1}}, 0), std::invalid_argument);
}

TEST(ExactSolve, RandomConsistentSystemsRoundTrip) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    SparseSystem sys;
    sys.cols = 6;
    std::vector<ExactComplex> x0(6);
    for (auto& x : x0) x = ExactComplex(rational(d(rng)), rational(d(rng)));
    for (int r = 0; r < 8; ++r) {
      SparseRow row;
      ExactComplex b;
      for (int c = 0; c < 6; ++c) {
        int v = trial % 2 == 0 && c == 5 ? 0 : d(rng);
        if (v != 0) row[c] = v;
        b += ExactComplex(v) * x0[c];
      }
      sys.add_row(row, b);
    }
    auto res = solve_linear_exact(sys);
    ASSERT_TRUE(std::holds_alternative<Solution>(res));
    EXPECT_TRUE(verify_solution(sys, std::get<Solution>(res).x));
  }
}
