#include "kgal/contraction.hpp"
#include "kgal/replab.hpp"

#include <gtest/gtest.h>

using namespace kgal::contract;

namespace {

Mat3 some_rotation() { return Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix(); }

}  // namespace

TEST(LorentzEmbed, IdentityAtRest) {
  auto L = lorentz_embed({Vec3::Zero(), Mat3::Identity(), 3});
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) EXPECT_EQ(to_double(L[a][b]), a == b ? 1.0 : 0.0);
}

TEST(LorentzEmbed, BoostAlongX) {
  auto L = lorentz_embed({Vec3(6, 0, 0), Mat3::Identity(), 10});
  EXPECT_NEAR(to_double(L[0][0]), 1.25, 1e-15);
  EXPECT_NEAR(to_double(L[0][1]), 0.75, 1e-15);
  EXPECT_NEAR(to_double(L[1][0]), 0.75, 1e-15);
}

TEST(LorentzEmbed, PseudoOrthogonalWithRotation) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 20; ++i) {
    Vec3 v(u(rng), u(rng), u(rng));
    Mat3 R = Eigen::AngleAxisd(3 * u(rng), Vec3(u(rng), u(rng), 1).normalized()).toRotationMatrix();
    EXPECT_LT(pseudo_orthogonality_defect(lorentz_embed({v, R, 1})), 1e-12);
  }
}

TEST(LorentzEmbed, TimeRowCarriesRotation) {
  // Without R in Lambda^0_k the matrix would not preserve eta.
  Mat3 R = some_rotation();
  Vec3 v(0.3, -0.1, 0.2);
  auto L = lorentz_embed({v, R, 1});
  Vec3 rv = R.transpose() * v;
  double gamma = to_double(L[0][0]);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(to_double(L[0][k + 1]), gamma * rv(k), 1e-15);
}

TEST(LorentzEmbed, SuperluminalThrows) {
  EXPECT_THROW(lorentz_embed({Vec3(2, 0, 0), Mat3::Identity(), 1}), std::invalid_argument);
}

TEST(MassSchedule, Example) { EXPECT_NEAR(to_double(mass_of(1, -2, 10)), std::log(101.0) / 100, 1e-15); }

TEST(MassSchedule, PositiveKIsDomainError) {
  EXPECT_THROW(mass_of(1, 1, 10), std::domain_error);
  EXPECT_THROW(mass_of(1, 0, 10), std::invalid_argument);
}

TEST(MassSchedule, SmallMassAndLargeRestEnergyOnRamp) {
  mp prev_m = 1e9, prev_e = 0;
  for (double c : parse_grid("1e1:1e6:6")) {
    mp m = mass_of(1, -1, c);
    EXPECT_GT(m, 0);
    EXPECT_LT(m, prev_m);
    EXPECT_GT(m * c * c, prev_e);
    prev_m = m;
    prev_e = m * c * c;
  }
  EXPECT_LT(to_double(prev_m), 1e-10);
  EXPECT_NEAR(to_double(mass_of(1e-30, -1, 10)), 1e-30, 1e-40);
}

TEST(MultiplierCoeffs, TrivialCases) {
  auto id = multiplier_coeffs(1, {0, 0, 0}, 0.3, 1.5, 2);
  EXPECT_EQ(to_double(id.phi0), 0.0);
  auto massless = multiplier_coeffs(2, {1, 0, 0}, 0, 1, 1);
  EXPECT_EQ(to_double(massless.phi0), 0.0);
  EXPECT_EQ(to_double(massless.phik[0]), 0.0);
}

TEST(MultiplierCoeffs, StableMatchesNaive) {
  auto s = multiplier_coeffs(2, {std::sqrt(3.0), 0, 0}, 1, 1, 1);
  auto n = multiplier_coeffs_naive(2, {std::sqrt(3.0), 0, 0}, 1, 1, 1);
  EXPECT_LT(to_double(abs(s.phi0 - n.phi0)), 1e-25);
  EXPECT_LT(to_double(abs(s.phik[0] - n.phik[0])), 1e-25);
  EXPECT_NEAR(to_double(s.phi0), 1 - std::log(std::cosh(1.0) + 2 * std::sinh(1.0)), 1e-15);
  EXPECT_NEAR(to_double(s.phi0), -0.3593041355, 1e-9);
  // Negative kappa as in the contraction regime.
  auto s2 = multiplier_coeffs(1.05, {0.2, 0.1, 0}, 0.1, -0.7, 3);
  auto n2 = multiplier_coeffs_naive(1.05, {0.2, 0.1, 0}, 0.1, -0.7, 3);
  EXPECT_LT(to_double(abs(s2.phi0 - n2.phi0)), 1e-25);
  EXPECT_LT(to_double(abs(s2.phik[1] - n2.phik[1])), 1e-25);
}

TEST(MultiplierLimit, ExampleTargets) {
  auto T = multiplier_targets(1, -1, Vec3(0.1, 0, 0), Mat3::Identity());
  EXPECT_NEAR(T.phase, -0.00501254, 1e-8);
  EXPECT_NEAR(T.lin[0], -0.100503, 1e-6);
}

TEST(MultiplierLimit, ConvergesAtOrderTwo) {
  auto r = multiplier_limit_check(1, -1, Vec3(0.1, 0, 0));
  EXPECT_TRUE(r.passed());
  double order = r.artifacts["convergence"]["order"];
  EXPECT_GT(order, 1.8);
  EXPECT_LT(order, 2.2);
  EXPECT_LT(r.artifacts["convergence"]["final_rel_error"].get<double>(), 1e-5);
}

TEST(MultiplierLimit, RotatedBoost) {
  auto r = multiplier_limit_check(2, -3, Vec3(0.4, -0.3, 0.5), some_rotation());
  EXPECT_TRUE(r.passed());
}

TEST(MultiplierLimit, ZeroVelocityIsExact) {
  auto c = multiplier_limit(1, -1, Vec3::Zero(), Mat3::Identity(), default_c_grid());
  EXPECT_TRUE(c.exact);
  EXPECT_TRUE(convergence_ok(c));
}

TEST(MultiplierLimit, IrregularVelocityRejected) {
  EXPECT_THROW(multiplier_limit(1, -1, Vec3(1.5, 0, 0), Mat3::Identity(), default_c_grid()), std::invalid_argument);
}

TEST(MultiplierLimit, ClassicalChain) {
  auto c = classical_multiplier_limit(1.3, Vec3(0.1, 0.2, -0.1), some_rotation(), default_c_grid());
  EXPECT_TRUE(convergence_ok(c));
  EXPECT_LT(c.final_rel_error, 1e-10);
}

TEST(MultiplierLimit, ComplexMassProbeIsReportOnly) {
  auto r = complex_mass_probe(1, 1, Vec3(0.1, 0, 0));
  EXPECT_EQ(r.status, kgal::Status::ReportOnly);
  EXPECT_LT(std::stod(r.residual), 1e-12);
}

TEST(GridSpec, Parses) {
  auto g = parse_grid("1e1:1e6:11");
  ASSERT_EQ(g.size(), 11u);
  EXPECT_DOUBLE_EQ(g.front(), 10);
  EXPECT_DOUBLE_EQ(g.back(), 1e6);
  EXPECT_THROW(parse_grid("1:2"), std::invalid_argument);
  EXPECT_THROW(parse_grid("5:1:3"), std::invalid_argument);
}

TEST(RepLimit, ExampleTargets) {
  auto T = rep_targets(1, -1, Vec3(1, 0, 0));
  EXPECT_NEAR(T.phase, -std::log(2.0), 1e-12);
  EXPECT_NEAR(T.lin[0], -2.0, 1e-12);
}

TEST(RepLimit, ConvergesAndMatchesRepresentation) {
  auto r = rep_limit_check(1, -1, Vec3(1, 0, 0));
  EXPECT_TRUE(r.passed());
  EXPECT_LT(r.artifacts["closed_form_agreement"].get<double>(), 1e-6);
}

TEST(RepLimit, AgreesWithReplabGenerators) {
  const double M = 1.0, k = -2.0;
  Vec3 q(0.3, -0.4, 0.5);
  auto [p0, pk] = contracted_rep(M, k, q, 1e6);
  EXPECT_NEAR(to_double(p0), -kgal::rep::energy(q, M, k), 1e-6);
  Vec3 P = q / kgal::rep::rho(q, M, k);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(to_double(pk[i]), -P(i), 1e-6);
}

TEST(RepLimit, ZeroMomentumExact) {
  auto c = rep_limit(1, -1, Vec3::Zero(), default_c_grid());
  EXPECT_TRUE(c.exact);
}

TEST(Appendix, ClosedFormExample) {
  // (2 ch1 + sh1)/(2 sh1 + ch1)
  EXPECT_NEAR(y0_closed(2, 1), 1.0944859, 1e-7);
  auto r = appendix_residuals({2, std::sqrt(3.0), 1, 1, 1});
  EXPECT_LT(r.y0, 1e-9);
  EXPECT_LT(r.yk, 1e-9);
}

TEST(Appendix, FixedPointAtRest) {
  auto r = appendix_residuals({1, 0, 0.8, 1.2, 1.5});
  EXPECT_LT(r.y0, 1e-15);
  EXPECT_NEAR(y0_closed(1, 3.7), 1.0, 1e-15);
  EXPECT_LT(r.phase_integral, 1e-12);
}

TEST(Appendix, AsymptoteIsMonotone) {
  double prev = y0_closed(2.5, 0);
  for (double x = 0.5; x < 20; x += 0.5) {
    double y = y0_closed(2.5, x);
    EXPECT_LE(y, prev);
    EXPECT_GE(y, 1.0);
    prev = y;
  }
  EXPECT_NEAR(prev, 1.0, 1e-15);
}

TEST(Appendix, SeededSamplesPass) {
  auto r = appendix_checks(20, 1);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(appendix_checks(20, 99).passed());
}

TEST(Family, PositiveKHasGap) {
  auto r = general_family_scan(1, 1);
  EXPECT_TRUE(r.passed());
  EXPECT_GE(r.artifacts["min_gap"].get<double>(), 1.0);
  EXPECT_TRUE(r.artifacts["degenerate_boundary_flagged"].get<bool>());
}

TEST(Family, NegativeKAttainsLimit) {
  auto r = general_family_scan(2, -3);
  EXPECT_TRUE(r.passed());
  EXPECT_LT(std::stod(r.residual), 1e-6);
}
