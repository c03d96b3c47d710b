#include "kgal/multiplier.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace kgal;

namespace {

const Policy kPol{2, 6};

NCElement::Words words(std::initializer_list<Letter> s1, std::initializer_list<Letter> s2) {
  NCElement::Words w{};
  for (Letter l : s1) w[0].push_back(static_cast<char>(l));
  for (Letter l : s2) w[1].push_back(static_cast<char>(l));
  return w;
}

bool is_boost(Letter x) { return G::is_boost(x); }

}  // namespace

TEST(Omega, QuarticBoostCoefficient) {
  auto w = build_omega(kPol).body;
  Letter v1 = G::v(1);
  EXPECT_EQ(w.coeff(1, 2, words({v1, v1, v1, v1}, {G::tau()})), ExactComplex(0, rational(1, 8)));
  // lambda^0: -i M/2 v1 v1 (x) tau
  EXPECT_EQ(w.coeff(0, 1, words({v1, v1}, {G::tau()})), ExactComplex(0, rational(-1, 2)));
}

TEST(Omega, IdentityAtZeroBoost) {
  for (const auto& w : {build_omega(kPol), build_omega_bch(kPol)})
    EXPECT_EQ(kill_letters(w.body, 1, is_boost), NCElement::one(2, kPol));
}

TEST(Omega, LeadingGradeIsGalileiMultiplier) {
  EXPECT_TRUE(classical_limit_check(kPol).passed());
  auto a = build_omega(kPol).body.with_policy({0, 6});
  auto b = build_omega_bch(kPol).body.with_policy({0, 6});
  EXPECT_EQ(a, b);
}

TEST(Omega, TwoFormsAgree) {
  for (Policy p : {Policy{0, 4}, Policy{1, 4}, Policy{2, 6}}) EXPECT_TRUE(form_equivalence_check(p).passed());
}

TEST(Omega, UnitaryAndCounitNormalized) {
  for (Policy p : {Policy{1, 4}, Policy{2, 6}}) {
    EXPECT_TRUE(unitarity_check(build_omega(p)).passed());
    EXPECT_TRUE(unitarity_check(build_omega_bch(p)).passed());
    EXPECT_TRUE(counit_normalization_check(build_omega(p)).passed());
    EXPECT_TRUE(counit_normalization_check(build_omega_bch(p)).passed());
  }
}

TEST(Omega, TypesetSecondExponentialIsNotUnitary) {
  auto r = missing_i_probe(kPol);
  EXPECT_EQ(r.status, Status::ReportOnly);
  EXPECT_FALSE(r.artifacts["typeset_form_unitary"].get<bool>());
}

TEST(TauCommutator, HoldsWithHalfBoostSquare) {
  auto r = tau_commutator_check(kPol);
  EXPECT_TRUE(r.passed()) << r.artifacts.dump();
  EXPECT_TRUE(r.artifacts["grading_agrees"].get<bool>());
  EXPECT_TRUE(tau_commutator_check({1, 5}).passed());
}

TEST(TauCommutator, VanishesAtZeroBoost) {
  auto w = kill_letters(build_omega(kPol).body, 1, is_boost);
  EXPECT_TRUE(tau_commutator_product(w).is_zero());
  EXPECT_TRUE(tau_commutator_rhs(w).lambda_part(1).filtered([](const auto& t) { return t.mass == 0; }).is_zero());
}

TEST(TauCommutator, TypesetFullBoostSquareFails) {
  auto r = tau_commutator_typeset_probe(kPol);
  EXPECT_EQ(r.status, Status::ReportOnly);
  EXPECT_FALSE(r.artifacts["typeset_form_holds"].get<bool>());
}

TEST(Cocycle, TrivialMultiplierPassesBothConventions) {
  auto one = NCElement::one(2, kPol);
  EXPECT_TRUE(cocycle_check(one, CocycleConvention::Left).passed());
  EXPECT_TRUE(cocycle_check(one, CocycleConvention::Right).passed());
}

TEST(Cocycle, ExactlyLeftConventionHolds) {
  auto s = cocycle_sweep({1, 4});
  EXPECT_TRUE(s.left.passed());
  EXPECT_FALSE(s.right.passed());
  EXPECT_EQ(s.passing_conventions(), 1);
  EXPECT_TRUE(s.classical_left.passed());
  EXPECT_TRUE(s.classical_right.passed());
}

TEST(Gauge, IdentityLeavesMultiplierUnchanged) {
  auto w = build_omega({1, 4});
  EXPECT_EQ(gauge_transform(w, NCElement::one(1, {1, 4})).body, w.body);
}

TEST(Gauge, RejectsNonUnitaryPhase) {
  Policy p{1, 4};
  auto z = NCElement::one(1, p) + NCElement::letter(G::v(1), p);
  EXPECT_THROW(gauge_transform(build_omega(p), z), std::invalid_argument);
  EXPECT_THROW(trivial_multiplier(z), std::invalid_argument);
}

TEST(Gauge, BoostPhaseGivesTrivialCocycle) {
  Policy p{2, 4};
  NCElement h(1, p);
  for (int m = 1; m <= 3; ++m) h += NCElement::letter(G::v(m), p) * NCElement::letter(G::v(m), p);
  auto z = exp_series(h.scaled(GradedScalar(ExactComplex::i(), 1, 0)));
  auto w = gauge_transform({NCElement::one(2, p), MultiplierForm::Product}, z).body;
  // (z (x) z) Delta(z*) is the triviality form for z*.
  auto w2 = trivial_multiplier(z.star());
  EXPECT_TRUE(reduce_orthogonality(w - w2).is_zero());
  EXPECT_TRUE(cocycle_check(w, CocycleConvention::Left).passed());
}

TEST(Gauge, TrivialityBuilderAlwaysGivesCocycles) {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> letter(0, G::kLetters - 1), coeff(-2, 2), len(1, 2);
  Policy p{2, 4};
  for (int trial = 0; trial < 6; ++trial) {
    NCElement q(1, p);
    for (int t = 0; t < 3; ++t) {
      NCElement::Words w{};
      for (int n = len(rng); n > 0; --n) w[0].push_back(static_cast<char>(letter(rng)));
      q.add_word(1, 0, w, ExactComplex(rational(coeff(rng)), rational(coeff(rng))));
    }
    auto h = q + q.star();
    auto z = exp_series(h.scaled(ExactComplex::i()));
    auto w = trivial_multiplier(z);
    auto r = cocycle_check(w, CocycleConvention::Left);
    EXPECT_TRUE(r.passed()) << r.artifacts.dump();
    EXPECT_EQ(w.drops().degree_drops, 0u);
    auto g = gauge_transform(build_omega(p), z);
    EXPECT_TRUE(unitarity_check(g).passed());
  }
}
