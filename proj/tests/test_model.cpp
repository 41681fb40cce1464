#include "subsym/model.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace subsym;
using namespace subsym::testing;

namespace {

std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(SUBSYM_GOLDEN_DIR) + "/" + name);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST(Validate, AcceptsOneVariableProgram) {
  MixedBinaryProgram p;
  p.add_binary("x", 1);
  EXPECT_TRUE(validate(p).empty());
}

TEST(Validate, ReportsUnknownVariable) {
  MixedBinaryProgram p;
  p.add_binary("x", 1);
  p.add_constraint({{VarId{7}, 1}}, std::nullopt, Rational(1), "bad");
  const auto issues = validate(p);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_NE(issues[0].find("7"), std::string::npos);
}

TEST(Validate, ReportsMissingPartitioningRowRule) {
  MixedBinaryProgram p;
  const VarId a = p.add_binary("a"), b = p.add_binary("b");
  p.add_constraint({{a, 1}, {b, 1}}, std::nullopt, Rational(1), "pack");
  p.add_matrix({"m", 1, 2, {a, b}, OrbitopeKind::partitioning, {}});
  EXPECT_EQ(validate(p).size(), 1u);
  p.matrices[0].kind = OrbitopeKind::packing;
  EXPECT_TRUE(validate(p).empty());
}

TEST(Validate, ReportsStructuralBreaches) {
  MixedBinaryProgram p;
  const VarId a = p.add_binary("a");
  p.add_binary("a");
  const VarId c = p.add_continuous("c", 2, 1);
  p.variables[0].upper = 2;
  p.add_constraint({{a, 1}, {a, 1}}, Rational(3), Rational(1), "twice");
  p.add_matrix({"m", 1, 2, {a, c}, OrbitopeKind::full, {}});
  // duplicate name, binary bound, continuous bounds, repeated id, lower > upper,
  // continuous matrix entry
  EXPECT_GE(validate(p).size(), 6u);
}

TEST(Evaluate, KnapsackExamples) {
  auto p1 = build(mkp_instance({5}, {7}, {4}));
  EXPECT_FALSE(evaluate(p1, {1}).feasible);
  const auto e0 = evaluate(p1, {0});
  EXPECT_TRUE(e0.feasible);
  EXPECT_EQ(e0.objective, 0);

  auto p2 = build(mkp_instance({3, 4}, {3, 4}, {6}));
  const auto e = evaluate(p2, {0, 1});
  EXPECT_TRUE(e.feasible);
  EXPECT_EQ(e.objective, 4);
}

TEST(Evaluate, RejectsIncompleteAssignment) {
  auto p = build(mkp_instance({3, 4}, {3, 4}, {6}));
  try {
    evaluate(p, {0});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "incomplete assignment");
  }
}

TEST(Evaluate, ScalingAConstraintKeepsFeasibility) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = random_tiny_mkp(rng, 4, 2);
    auto program = build(inst);
    auto scaled = program;
    const Rational factor(rng.uniform(1, 9), rng.uniform(1, 9));
    auto& con = scaled.constraints[static_cast<std::size_t>(
        rng.uniform(0, std::int64_t(scaled.constraints.size()) - 1))];
    for (auto& t : con.terms) t.coeff *= factor;
    if (con.lower) *con.lower *= factor;
    if (con.upper) *con.upper *= factor;
    Assignment x(program.variables.size());
    for (auto& v : x) v = rng.uniform(0, 1);
    EXPECT_EQ(evaluate(program, x).feasible, evaluate(scaled, x).feasible);
  }
}

TEST(Json, RoundTripsAndMatchesGolden) {
  const auto p = build(mkp_instance({3, 4}, {3, 4}, {6}, "micro"));
  const std::string text = to_json(p);
  EXPECT_EQ(text, read_golden("mkp_micro.json"));
  const auto back = program_from_json(text);
  EXPECT_EQ(to_json(back), text);
  EXPECT_TRUE(validate(back).empty());
}

TEST(Json, RationalsSurvive) {
  MixedBinaryProgram p;
  p.name = "frac";
  const VarId x = p.add_continuous("x", Rational(-1, 3), Rational(5, 2), Rational(7, 4));
  p.add_constraint({{x, Rational(2, 3)}}, std::nullopt, Rational(1, 7), "c");
  const auto back = program_from_json(to_json(p));
  EXPECT_EQ(back.variables[0].lower, Rational(-1, 3));
  EXPECT_EQ(back.variables[0].objective, Rational(7, 4));
  EXPECT_EQ(*back.constraints[0].upper, Rational(1, 7));
  EXPECT_FALSE(back.constraints[0].lower.has_value());
}
