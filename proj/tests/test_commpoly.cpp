#include "kgal/commpoly.hpp"

#include <gtest/gtest.h>

#include <array>
#include <random>

using namespace kgal;

namespace {

using Mat = std::array<std::array<Rational, 3>, 3>;

// Cayley transform (I - S)(I + S)^{-1} of a skew matrix: rational, orthogonal, det +1.
Mat cayley(long a, long b, long c) {
  Rational x(a), y(b), z(c);
  Rational n = 1 + x * x + y * y + z * z;
  Mat q;
  q[0] = {(1 + x * x - y * y - z * z) / n, 2 * (x * y - z) / n, 2 * (x * z + y) / n};
  q[1] = {2 * (x * y + z) / n, (1 - x * x + y * y - z * z) / n, 2 * (y * z - x) / n};
  q[2] = {2 * (x * z - y) / n, 2 * (y * z + x) / n, (1 - x * x - y * y + z * z) / n};
  return q;
}

Rational eval(const Monomial& m, const Mat& q) {
  Rational v(1);
  for (char c : m) v *= q[c / 3][c % 3];
  return v;
}

int rank_of(std::vector<std::vector<Rational>> a) {
  int rank = 0;
  const int cols = a.empty() ? 0 : static_cast<int>(a[0].size());
  for (int c = 0; c < cols && rank < static_cast<int>(a.size()); ++c) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(a.size()); ++r)
      if (sgn(a[r][c]) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[piv], a[rank]);
    for (int r = rank + 1; r < static_cast<int>(a.size()); ++r) {
      if (sgn(a[r][c]) == 0) continue;
      Rational f = a[r][c] / a[rank][c];
      for (int k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST(Orthogonality, GeneratorsVanishOnOrthogonalMatrices) {
  auto gens = orthogonality_generators(1);
  ASSERT_EQ(gens.size(), 12u);
  Mat q = cayley(1, -2, 3);
  for (const auto& g : gens) {
    Rational acc(0);
    for (const auto& [m, c] : g.terms()) acc += c.re() * eval(m, q);
    EXPECT_EQ(acc, 0);
  }
}

TEST(Orthogonality, QuotientDimensionsMatchPeterWeylCounts) {
  const auto& nf = OrthoNormalForm::instance(4);
  // dim of polynomials of degree <= d in 9 variables minus the ideal part.
  EXPECT_EQ(55 - nf.ideal_dimension(2), 44u);
  EXPECT_EQ(220 - nf.ideal_dimension(3), 119u);
  EXPECT_EQ(715 - nf.ideal_dimension(4), 249u);
}

TEST(Orthogonality, StandardMonomialsAreIndependentOnO3) {
  const int d = 3;
  const auto& nf = OrthoNormalForm::instance(d);
  std::vector<Monomial> standard;
  for (const auto& m : monomials_up_to({0, 1, 2, 3, 4, 5, 6, 7, 8}, d))
    if (nf.reduce(m) == OrthoNormalForm::Poly{{m, Rational(1)}}) standard.push_back(m);
  ASSERT_EQ(standard.size(), 119u);
  std::mt19937 rng(17);
  std::uniform_int_distribution<long> dist(-4, 4);
  std::vector<std::vector<Rational>> rows;
  while (rows.size() < 2 * standard.size()) {
    Mat q = cayley(dist(rng), dist(rng), dist(rng));
    for (int sign : {1, -1}) {
      Mat p = q;
      for (auto& r : p)
        for (auto& x : r) x *= sign;
      std::vector<Rational> row;
      for (const auto& m : standard) row.push_back(eval(m, p));
      rows.push_back(std::move(row));
    }
  }
  EXPECT_EQ(rank_of(rows), static_cast<int>(standard.size()));
}

TEST(Orthogonality, NormalFormAgreesPointwise) {
  const auto& nf = OrthoNormalForm::instance(4);
  Mat q = cayley(2, 1, -1);
  for (auto sign : {1, -1}) {
    Mat p = q;
    for (auto& r : p)
      for (auto& x : r) x *= sign;
    for (const auto& m : monomials_up_to({0, 1, 2, 3, 4, 5, 6, 7, 8}, 4)) {
      Rational acc(0);
      for (const auto& [mm, c] : nf.reduce(m)) acc += c * eval(mm, p);
      ASSERT_EQ(acc, eval(m, p));
    }
  }
}

TEST(Orthogonality, MembershipCertificateReplays) {
  // (R^T R)_11 - 1 times r11 r22 lies in the ideal.
  CommPoly g = orthogonality_generators(2)[0];
  CommPoly p = g * CommPoly::r(2, 1, 1) * CommPoly::r(2, 2, 2);
  auto res = ideal_membership(p, 2, 4);
  ASSERT_TRUE(std::holds_alternative<MemberCertificate>(res));
  EXPECT_EQ(replay_certificate(std::get<MemberCertificate>(res)), p);
  auto miss = ideal_membership(CommPoly::r(2, 1, 1), 2, 4);
  EXPECT_TRUE(std::holds_alternative<NotFoundAtBound>(miss));
  EXPECT_THROW(ideal_membership(p, 1, 4), std::invalid_argument);
}

TEST(Orthogonality, MultiSlotReductionDetectsSumOfIdeals) {
  auto g1 = orthogonality_generators(1)[3];
  auto g3 = orthogonality_generators(3)[7];
  CommPoly p = g1 * CommPoly::r(2, 1, 2) + g3 * CommPoly::r(1, 3, 3) * CommPoly::r(1, 1, 1);
  EXPECT_TRUE(reduce_orthogonality(p).terms().empty());
  EXPECT_FALSE(reduce_orthogonality(p + CommPoly::r(2, 1, 2)).terms().empty());
}
