#include "kgal/expr.hpp"
#include "kgal/presentation.hpp"
#include "kgal/suite.hpp"

#include <gtest/gtest.h>

using namespace kgal;

TEST(Presentation, GroupTableMatchesRelations) {
  auto r = group_presentation_check();
  EXPECT_TRUE(r.passed()) << r.artifacts.dump();
  EXPECT_EQ(r.artifacts["entries"].get<int>(), 256);
}

TEST(Presentation, DualTableMatchesRelations) {
  auto r = dual_presentation_check();
  EXPECT_TRUE(r.passed()) << r.artifacts.dump();
  EXPECT_EQ(r.artifacts["entries"].get<int>(), 100);
}

TEST(Expr, Generators) {
  Policy p{2, 6};
  EXPECT_EQ(parse_group_expression("a[1]", p), NCElement::letter(G::a(1), p));
  EXPECT_EQ(parse_group_expression("R[2,3]", p), NCElement::letter(G::R(2, 3), p));
  EXPECT_EQ(parse_group_expression("tau", p), NCElement::letter(G::tau(), p));
}

TEST(Expr, CommutatorIsNormalOrdered) {
  Policy p{2, 6};
  auto e = parse_group_expression("tau a[1] - a[1] tau", p);
  auto want = NCElement::letter(G::a(1), p).scaled(GradedScalar(ExactComplex::i(), 1, 0));
  EXPECT_EQ(e, want) << e.str();
}

TEST(Expr, ScalarsPowersAndParentheses) {
  Policy p{2, 6};
  auto e = parse_group_expression("(1/2 + I) L M v[1]^2 - 2*(v[2])", p);
  NCElement v1 = NCElement::letter(G::v(1), p), v2 = NCElement::letter(G::v(2), p);
  auto want = (v1 * v1).scaled(GradedScalar(ExactComplex(rational(1, 2), rational(1)), 1, 1)) - v2.scaled(GradedScalar(ExactComplex(2)));
  EXPECT_EQ(e, want) << e.str();
}

TEST(Expr, StrRoundTrips) {
  Policy p{2, 6};
  for (const char* s : {"v[1] a[2] tau", "R[1,1] a[1] - 3/4*I L a[1] R[1,1]", "v[1] (x) a[1] + 2 tau (x) 1"}) {
    auto e = parse_group_expression(s, p);
    EXPECT_EQ(parse_group_expression(e.str(), p), e) << s << " -> " << e.str();
  }
}

TEST(Expr, TensorSlots) {
  Policy p{2, 6};
  auto e = parse_group_expression("v[1] (x) a[1]", p);
  EXPECT_EQ(e.slots(), 2);
  auto want = NCElement::letter(G::v(1), p, 2, 1) * NCElement::letter(G::a(1), p, 2, 2);
  EXPECT_EQ(e, want);
}

TEST(Expr, Errors) {
  EXPECT_THROW(parse_group_expression("a[4]"), ParseError);
  EXPECT_THROW(parse_group_expression("R[1]"), ParseError);
  EXPECT_THROW(parse_group_expression("foo"), ParseError);
  EXPECT_THROW(parse_group_expression("a[1] +"), ParseError);
  EXPECT_THROW(parse_group_expression("(a[1] (x) a[2])"), ParseError);
  EXPECT_THROW(parse_group_expression("v[1] (x) a[1] + tau"), ParseError);
  EXPECT_THROW(parse_group_expression("1/0"), ParseError);
  EXPECT_THROW(parse_group_expression("a[1] $"), ParseError);
}

TEST(Config, RoundTripsThroughJson) {
  SuiteConfig c;
  c.seed = 42;
  c.groups = {"rep", "appendix"};
  c.c_grid = "1e2:1e5:4";
  ordered_json j;
  to_json(j, c);
  auto back = config_from_json(j);
  ordered_json j2;
  to_json(j2, back);
  EXPECT_EQ(j.dump(), j2.dump());
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(config_from_json(ordered_json{{"bogus", 1}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(ordered_json{{"groups", {"nope"}}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(ordered_json{{"c_grid", "1:2"}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(ordered_json{{"rep_params", {{0, 2}}}}), std::invalid_argument);
  EXPECT_NO_THROW(config_from_json(ordered_json::object()));
}

TEST(Suite, AggregateListsFailures) {
  CheckReport ok, bad;
  ok.status = Status::Pass;
  bad.status = Status::Fail;
  bad.check_id = "x";
  auto r = aggregate("agg", {ok, bad, ok});
  EXPECT_TRUE(r.failed());
  EXPECT_EQ(r.residual, "1");
  EXPECT_TRUE(aggregate("agg", {ok}).passed());
}

TEST(Suite, NumericGroupsAreDeterministicAndOrdered) {
  SuiteConfig c;
  c.groups = {"appendix", "contract"};  // canonical order puts contract first
  c.samples = 10;
  auto a = run_suite(c), b = run_suite(c);
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(emit_json(a), emit_json(b));
  EXPECT_EQ(a.front().check_id, "contract.multiplier");
  EXPECT_EQ(a.back().check_id, "contract.appendix");
  EXPECT_EQ(exit_code(a), 0);
}

TEST(Suite, ComplexMassIsOptIn) {
  SuiteConfig c;
  c.groups = {"contract"};
  auto off = run_suite(c);
  c.complex_mass = true;
  auto on = run_suite(c);
  EXPECT_EQ(on.size(), off.size() + 1);
  EXPECT_EQ(on.back().status, Status::ReportOnly);
  EXPECT_EQ(exit_code(on), 0);
}

TEST(Suite, PositiveControlGivesBoostSquare) { EXPECT_TRUE(positive_control_check().passed()); }

TEST(Suite, WitnessPayloadReplaysFromEmittedJson) {
  auto r = nogo_report(2);
  auto parsed = from_json(ordered_json::parse(to_json(r).dump()));
  auto problem = assemble_coboundary(build_beta(), 2);
  EXPECT_TRUE(replay_witness(problem.system, parsed.artifacts["witness"]));
}
