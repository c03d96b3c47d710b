#include "kgal/ncpoly.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace kgal;
using G = GroupAlgebra;

namespace {

const ExactComplex I = ExactComplex::i();
const Policy kPol{3, 8};

NCElement L(Letter x) { return NCElement::letter(x, kPol); }

NCElement mono(std::initializer_list<Letter> ls, ExactComplex c, int lambda = 0) {
  NCElement e(1, kPol);
  NCElement::Words w{};
  for (Letter l : ls) w[0].push_back(static_cast<char>(l));
  e.add_word(lambda, 0, w, c);
  return e;
}

NCElement vsq() {
  NCElement s(1, kPol);
  for (int m = 1; m <= 3; ++m) s += mono({G::v(m), G::v(m)}, 1);
  return s;
}

int delta(int i, int j) { return i == j ? 1 : 0; }

// [x, y] written out from the defining relations, independent of the rewrite table.
NCElement expected_commutator(Letter x, Letter y) {
  NCElement out(1, kPol);
  auto lam = [](NCElement e) { return e.scaled(GradedScalar::lambda()); };
  if (G::is_time(x) && (G::is_trans(y) || G::is_boost(y))) return lam(L(y).scaled(I));
  if (G::is_time(y) && (G::is_trans(x) || G::is_boost(x))) return lam(L(x).scaled(-I));
  if (G::is_boost(x) && G::is_trans(y)) {
    int i = G::index(x), j = G::index(y);
    NCElement e = vsq().scaled(ExactComplex(rational(delta(i, j), 2))) - mono({G::v(i), G::v(j)}, 1);
    return lam(e.scaled(I));
  }
  if (G::is_trans(x) && G::is_boost(y)) return -expected_commutator(y, x);
  if (G::is_rot(x) && G::is_trans(y)) {
    int i = G::rot_row(x), j = G::rot_col(x), k = G::index(y);
    NCElement e(1, kPol);
    for (int m = 1; m <= 3; ++m) e += mono({G::v(m), G::R(m, j)}, delta(i, k));
    e -= mono({G::v(i), G::R(k, j)}, 1);
    return lam(e.scaled(I));
  }
  if (G::is_trans(x) && G::is_rot(y)) return -expected_commutator(y, x);
  return out;
}

Word random_word(std::mt19937& rng, int len, int letters) {
  std::uniform_int_distribution<int> d(0, letters - 1);
  Word w;
  for (int i = 0; i < len; ++i) w.push_back(static_cast<char>(d(rng)));
  return w;
}

NCElement random_element(std::mt19937& rng) {
  std::uniform_int_distribution<int> len(0, 3), c(-2, 2);
  NCElement e(1, kPol);
  for (int t = 0; t < 3; ++t) {
    NCElement::Words w{};
    w[0] = random_word(rng, len(rng), G::kLetters);
    e.add_word(0, 0, w, ExactComplex(rational(c(rng)), rational(c(rng))));
  }
  return e;
}

std::map<std::pair<Word, int>, ExactComplex> as_map(const std::vector<NFTerm>& v) {
  std::map<std::pair<Word, int>, ExactComplex> m;
  for (const auto& t : v) m[{t.word, t.lambda}] = t.coeff;
  return m;
}

}  // namespace

TEST(GroupAlgebra, TimeTranslationSwap) {
  auto e = L(G::tau()) * L(G::a(1));
  auto expect = mono({G::a(1), G::tau()}, 1) + mono({G::a(1)}, I, 1);
  EXPECT_EQ(e, expect) << e.str();
}

TEST(GroupAlgebra, BoostTranslationSwap) {
  auto e = L(G::v(1)) * L(G::a(2));
  auto expect = mono({G::a(2), G::v(1)}, 1) + mono({G::v(1), G::v(2)}, -I, 1);
  EXPECT_EQ(e, expect) << e.str();
  auto d = L(G::v(1)) * L(G::a(1));
  auto expect_d = mono({G::a(1), G::v(1)}, 1) + mono({G::v(1), G::v(1)}, ExactComplex(0, rational(-1, 2)), 1) +
                  mono({G::v(2), G::v(2)}, ExactComplex(0, rational(1, 2)), 1) +
                  mono({G::v(3), G::v(3)}, ExactComplex(0, rational(1, 2)), 1);
  EXPECT_EQ(d, expect_d) << d.str();
}

TEST(GroupAlgebra, RotationTranslationSwap) {
  auto e = L(G::R(1, 1)) * L(G::a(1));
  auto expect = mono({G::a(1), G::R(1, 1)}, 1) + mono({G::v(2), G::R(2, 1)}, I, 1) + mono({G::v(3), G::R(3, 1)}, I, 1);
  EXPECT_EQ(e, expect) << e.str();
}

TEST(GroupAlgebra, FullCommutatorTable) {
  for (int x = 0; x < G::kLetters; ++x)
    for (int y = 0; y < G::kLetters; ++y) {
      auto got = commutator(L(static_cast<Letter>(x)), L(static_cast<Letter>(y)));
      auto want = expected_commutator(static_cast<Letter>(x), static_cast<Letter>(y));
      EXPECT_EQ(got, want) << G::name(x) << "," << G::name(y) << ": " << got.str();
    }
}

TEST(GroupAlgebra, RewritingIsConfluent) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> len(2, 6);
  for (int n = 0; n < 200; ++n) {
    Word w = random_word(rng, len(rng), G::kLetters);
    auto left = normal_form_word<G>(w, RewriteStrategy::LeftInnermost, nullptr);
    auto right = normal_form_word<G>(w, RewriteStrategy::RightInnermost, nullptr);
    EXPECT_EQ(as_map(left), as_map(right));
    for (const auto& t : left) EXPECT_TRUE(is_canonical<G>(t.word));
  }
}

TEST(GroupAlgebra, RewriteChainsAreQuadraticallyBounded) {
  std::mt19937 rng(99);
  for (int len = 2; len <= 7; ++len)
    for (int n = 0; n < 20; ++n) {
      RewriteStats st;
      normal_form_word<G>(random_word(rng, len, G::kLetters), RewriteStrategy::LeftInnermost, &st);
      EXPECT_LE(st.max_steps, len * len);
    }
}

TEST(GroupAlgebra, MultiplicationIsAssociative) {
  std::mt19937 rng(5);
  for (int n = 0; n < 30; ++n) {
    auto a = random_element(rng), b = random_element(rng), c = random_element(rng);
    EXPECT_EQ((a * b) * c, a * (b * c));
  }
}

TEST(GroupAlgebra, StarIsAntiMultiplicative) {
  std::mt19937 rng(11);
  for (int n = 0; n < 30; ++n) {
    auto a = random_element(rng), b = random_element(rng);
    EXPECT_EQ((a * b).star(), b.star() * a.star());
    EXPECT_EQ(a.star().star(), a);
  }
}

TEST(GroupAlgebra, GeneratorsAreSelfAdjoint) {
  for (int x = 0; x < G::kLetters; ++x) EXPECT_EQ(L(x).star(), L(x));
}

TEST(GroupAlgebra, NormalFormIsIdempotent) {
  std::mt19937 rng(3);
  for (int n = 0; n < 20; ++n) {
    auto a = random_element(rng);
    EXPECT_EQ(normal_form(a), a);
  }
}

TEST(Truncation, LambdaDropsAreCounted) {
  Policy p{1, 8};
  NCElement x = NCElement::one(1, p);
  NCElement::Words w{};
  x.add_canonical(1, 0, w, 1);
  auto sq = x * x;
  EXPECT_EQ(sq.coeff(0, 0, w), ExactComplex(1));
  EXPECT_EQ(sq.coeff(1, 0, w), ExactComplex(2));
  EXPECT_EQ(sq.drops().count, 1u);
  EXPECT_EQ(sq.drops().min_lambda, 2);
  EXPECT_EQ(sq.drops().degree_drops, 0u);
}

TEST(Truncation, DegreeDropsAreCounted) {
  Policy p{2, 2};
  auto v = NCElement::letter(G::v(1), p);
  auto cube = v * v * v;
  EXPECT_TRUE(cube.is_zero());
  EXPECT_EQ(cube.drops().degree_drops, 1u);
  EXPECT_EQ(cube.drops().min_degree, 3);
}

TEST(Truncation, ExpSeriesRejectsDegreeZeroTerms) {
  EXPECT_THROW(exp_series(NCElement::one(1, kPol)), std::invalid_argument);
  EXPECT_THROW(exp_series(L(G::tau())), std::invalid_argument);
  auto e = exp_series(L(G::v(1)));
  NCElement::Words w{};
  w[0] = Word(3, static_cast<char>(G::v(1)));
  EXPECT_EQ(e.coeff(0, 0, w), ExactComplex(rational(1, 6)));
}

TEST(Element, TensorSlotsAreIndependent) {
  Policy p{2, 4};
  auto x = NCElement::letter(G::tau(), p, 2, 1);
  auto y = NCElement::letter(G::a(1), p, 2, 2);
  EXPECT_EQ(x * y, y * x);
  auto z = NCElement::letter(G::a(1), p, 2, 1);
  EXPECT_FALSE((x * z) == (z * x));
  EXPECT_THROW(x * NCElement::letter(G::tau(), p), std::invalid_argument);
  EXPECT_THROW(NCElement(4, p), std::invalid_argument);
}
