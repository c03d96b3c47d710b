#include "kgal/replab.hpp"

#include <gtest/gtest.h>

using namespace kgal;
using namespace kgal::rep;

TEST(Spin, CommutationAndCasimir) {
  for (int ts = 0; ts <= 6; ++ts) {
    auto [comm, cas] = spin_defects(make_spin(ts));
    EXPECT_LT(comm, 1e-12) << ts;
    EXPECT_LT(cas, 1e-12) << ts;
  }
  EXPECT_THROW(make_spin(-1), std::invalid_argument);
}

TEST(Spin, RotationMatrixIsUnitaryAndComposes) {
  auto s = make_spin(2);
  Mat3 R1 = Eigen::AngleAxisd(0.4, Vec3(1, 0, 1).normalized()).toRotationMatrix();
  Mat3 R2 = Eigen::AngleAxisd(1.1, Vec3(0, 1, 0)).toRotationMatrix();
  MatX D1 = spin_matrix(s, R1), D2 = spin_matrix(s, R2);
  EXPECT_LT((D1 * D1.adjoint() - s.identity()).cwiseAbs().maxCoeff(), 1e-13);
  // Integer spin: a genuine representation of SO(3).
  EXPECT_LT((D1 * D2 - spin_matrix(s, R1 * R2)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Generators, ClosedFormValues) {
  auto g = build_generators({1, 2, 0});
  EXPECT_NEAR(g.H.at(Vec3::Zero()).B(0, 0).real(), 0, 0);
  Vec3 q(1, 0, 0);
  EXPECT_NEAR(g.H.at(q).B(0, 0).real(), 2 * std::log(1.25), 1e-15);
  EXPECT_NEAR(g.H.at(q).B(0, 0).real(), 0.44629, 1e-5);
  EXPECT_NEAR(g.P[0].at(q).B(0, 0).real(), 0.8, 1e-15);
}

TEST(Generators, LargeDeformationIsClassical) {
  auto g = build_generators({1, 1e8, 0});
  Vec3 q(0.3, -0.7, 0.5);
  EXPECT_NEAR(g.H.at(q).B(0, 0).real() / (q.squaredNorm() / 2), 1, 1e-7);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(g.P[i].at(q).B(0, 0).real() / q(i), 1, 1e-7);
}

TEST(Generators, DomainForNegativeDeformation) {
  EXPECT_THROW(build_generators({1, 0, 0}), std::invalid_argument);
  auto g = build_generators({1, -1, 0});
  EXPECT_NO_THROW(g.H.at(Vec3(0.5, 0, 0)));
  EXPECT_THROW(g.H.at(Vec3(std::sqrt(2.0), 0, 0)), std::domain_error);
  EXPECT_THROW(g.P[0].at(Vec3(2, 0, 0)), std::domain_error);
}

TEST(Generators, ExactGradientsMatchCentralDifferences) {
  auto g = build_generators({1, 2, 0});
  Vec3 q(0.2, -0.4, 0.6);
  for (double h : {1e-2, 5e-3}) {
    auto fd = g.P[1].without_gradients(h).B.gradient(q, h);
    auto ex = g.P[1].B.gradient(q, h);
    double err = 0;
    for (int m = 0; m < 3; ++m) err = std::max(err, (fd[m] - ex[m]).cwiseAbs().maxCoeff());
    // Second order: error / h^2 stays bounded.
    EXPECT_LT(err / (h * h), 1.0) << h;
  }
}

TEST(Commutator, ConstantBoostsCommute) {
  auto g = build_generators({1, 2, 1});
  auto c = op_commutator(g.L[0], g.L[1]).at(Vec3(0.1, 0.2, 0.3));
  EXPECT_EQ(c.A.cwiseAbs().maxCoeff(), 0);
  EXPECT_EQ(c.B.cwiseAbs().maxCoeff(), 0);
}

TEST(Commutator, SpinParts) {
  auto s = make_spin(2);
  MatX c = s.S[0] * s.S[1] - s.S[1] * s.S[0];
  EXPECT_LT((c - I * s.S[2]).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Commutator, BoostEnergyGivesMomentum) {
  auto g = build_generators({1, 2, 0});
  for (const auto& q : sample_points(20, 5)) {
    auto c = op_commutator(g.L[0], g.H).at(q);
    EXPECT_NEAR(std::abs(c.B(0, 0) - I * g.P[0].at(q).B(0, 0)), 0, 1e-12);
    EXPECT_EQ(c.A.cwiseAbs().maxCoeff(), 0);
  }
}

TEST(Commutator, BoostMomentumExample) {
  auto g = build_generators({1, 2, 0});
  Vec3 q(0.3, -0.1, 0.2);
  double P1 = g.P[0].at(q).B(0, 0).real(), P2 = g.P[1].at(q).B(0, 0).real();
  auto c = op_commutator(g.L[0], g.P[1]).at(q).B(0, 0);
  EXPECT_LT(std::abs(c - (-I * 0.5 * P1 * P2)), 1e-9);
}

TEST(Algebra, AllRelationsAcrossParameters) {
  for (Params p : {Params{1, 2, 0}, Params{1, 10, 0}, Params{0.5, 1, 0}, Params{1, 2, 2}, Params{1, 10, 2}, Params{0.5, 1, 2}}) {
    auto r = check_algebra(p, {.samples = 100, .seed = 7});
    EXPECT_TRUE(r.passed()) << to_json(r).dump();
    EXPECT_EQ(r.artifacts["families"].size(), 9u);
  }
}

TEST(Algebra, FiniteDifferenceMode) {
  AlgebraOptions o;
  o.finite_differences = true;
  o.samples = 30;
  auto r = check_algebra({1, 2, 2}, o);
  EXPECT_TRUE(r.passed()) << to_json(r).dump();
  EXPECT_LT(std::stod(r.residual), 1e-6);
}

TEST(Algebra, HalfIntegerSpinFlagged) {
  auto r = check_algebra({1, 2, 1}, {.samples = 10});
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.artifacts.contains("scope"));
  EXPECT_FALSE(check_algebra({1, 2, 2}, {.samples = 10}).artifacts.contains("scope"));
}

TEST(Algebra, MasslessLimitMatchesAlgebraicSector) {
  EXPECT_LT(massless_sector_residual(1e-8, 2, sample_points(50, 3)), 1e-6);
  // With a finite mass the extra central term is visible.
  EXPECT_GT(massless_sector_residual(1, 2, sample_points(5, 3)), 0.1);
}

TEST(Dispersion, HandExample) {
  auto f = dispersion_forms(1, 2, Vec3(1, 0, 0));
  EXPECT_NEAR(f.derived, 0, 1e-15);
  EXPECT_NEAR(f.momentum, 0, 1e-15);
  EXPECT_NEAR(f.printed, 0.08, 1e-14);
}

TEST(Dispersion, ZeroMomentum) {
  auto f = dispersion_forms(1, 2, Vec3::Zero());
  EXPECT_EQ(f.printed, 0);
  EXPECT_EQ(f.derived, 0);
  EXPECT_EQ(f.momentum, 0);
}

TEST(Dispersion, FormsCoincideClassically) {
  auto f = dispersion_forms(1, 1e8, Vec3(0.5, 0.2, -0.3));
  EXPECT_LT(std::abs(f.printed - f.derived), 1e-7);
  EXPECT_LT(std::abs(f.momentum - f.derived), 1e-7);
}

TEST(Dispersion, CheckAndProbe) {
  auto r = dispersion_check(1, 2, 200);
  EXPECT_TRUE(r.passed());
  EXPECT_GT(r.artifacts["printed_form_residual"].get<double>(), 0);
  auto p = dispersion_printed_probe();
  EXPECT_EQ(p.status, Status::ReportOnly);
  EXPECT_NEAR(std::stod(p.residual), 0.08, 1e-12);
}

TEST(Action, IdentityAndPureRotation) {
  Params p{1, 2, 0};
  auto spin = make_spin(0);
  auto tf = gaussian_test_function(1, 11);
  Vec3 q(0.3, 0.1, -0.5);
  EXPECT_LT((act(GroupPointNR{}, tf.f, q, p, spin) - tf.f(q)).norm(), 1e-15);
  auto g = rotation(Vec3(0, 0, 1), 0.6);
  EXPECT_LT((act(g, tf.f, q, p, spin) - tf.f(g.R.transpose() * q)).norm(), 1e-15);
}

TEST(Action, RejectsImproperRotation) {
  GroupPointNR g;
  g.R = -Mat3::Identity();
  EXPECT_THROW(g.validate(), std::invalid_argument);
  EXPECT_THROW(norm_preservation_check({1, 2, 0}, g, 1), std::invalid_argument);
}

TEST(Action, PreservesNorm) {
  GroupPointNR g;
  g.R = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
  g.v = Vec3(0.2, -0.1, 0.3);
  g.a = Vec3(1, 0.5, -0.2);
  g.t = 0.8;
  for (int s : {0, 2})
    for (std::uint64_t seed = 1; seed <= 3; ++seed) EXPECT_TRUE(norm_preservation_check({1, 2, s}, g, seed).passed());
}

TEST(Extraction, EveryDirectionMatchesItsGenerator) {
  for (Params p : {Params{1, 2, 0}, Params{1, 2, 2}, Params{0.5, 1, 2}}) {
    auto r = extract_generators(p);
    EXPECT_TRUE(r.passed()) << to_json(r).dump();
    EXPECT_EQ(r.artifacts["directions"].size(), 10u);
  }
}

TEST(Extraction, RichardsonImprovesOnPlainDifference) {
  std::function<VecX(double)> F = [](double e) { return VecX::Constant(1, std::sin(e) + e * e * e); };
  double plain = std::abs(richardson_derivative(F, 0.1, 1)(0).real() - 1);
  double extrap = std::abs(richardson_derivative(F, 0.1, 3)(0).real() - 1);
  EXPECT_LT(extrap, plain * 1e-3);
}

TEST(Composition, RotationsCommuteExactly) {
  for (double k : {10.0, 1e4})
    EXPECT_LT(composition_defect({1, k, 2}, rotation(Vec3(0, 0, 1), 0.4), rotation(Vec3(1, 0, 0), 0.9)), 1e-13);
}

TEST(Composition, BoostThenTranslationConvergesLikeInverseK) {
  GroupPointNR b, t;
  b.v = Vec3(0.2, 0, 0);
  t.a = Vec3(1, 0, 0);
  auto c = composition_ramp({1, 2, 0}, b, t, {1e1, 1e2, 1e3, 1e4, 1e5});
  EXPECT_NEAR(c.defects.back() / c.defects.front(), 1e-4, 0.5e-4);
  EXPECT_GE(c.slope, -1.3);
  EXPECT_LE(c.slope, -0.7);
  EXPECT_TRUE(composition_check({1, 2, 0}, b, t).passed());
}

TEST(Composition, GaussHermiteIntegratesGaussian) {
  auto integral = [](int n, double scale) {
    auto g = hermite_grid(n, scale);
    double s = 0;
    for (std::size_t i = 0; i < g.q.size(); ++i) s += g.w[i] * std::exp(-g.q[i].squaredNorm());
    return s;
  };
  EXPECT_NEAR(integral(8, 1.0), std::pow(M_PI, 1.5), 1e-12);
  EXPECT_NEAR(integral(40, 1.5), std::pow(M_PI, 1.5), 1e-10);
}
