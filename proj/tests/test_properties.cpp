#include <gtest/gtest.h>

#include "properties.hpp"
#include "soundness.hpp"

using namespace deplogic;
using namespace deplogic::testing;

namespace {

void expect_property(const PropertyOutcome& out, int target) {
  EXPECT_TRUE(out.passed(target)) << out.name << ": " << out.instances << " instances, " << out.violations
                                  << " violations\n"
                                  << out.first_violation;
}

}  // namespace

TEST(Properties, DownwardClosure) { expect_property(downward_closure(11, 150), 150); }

TEST(Properties, Locality) { expect_property(locality(12, 150), 150); }

TEST(Properties, Flatness) { expect_property(flatness(13, 150), 150); }

TEST(Properties, EmptyTeam) { expect_property(empty_team(14, 150), 150); }

TEST(Properties, SubstitutionLemma) { expect_property(substitution_lemma(15, 150), 150); }

TEST(Soundness, EveryRuleOnSmallInstances) {
  unsigned seed = 100;
  for (RuleId rule : all_rules()) {
    RuleOutcome out = check_rule_soundness(rule, seed++, 25, 25 * 400);
    EXPECT_TRUE(out.passed(25)) << rule_name(rule) << ": " << out.instances << " instances, " << out.violations
                                << " violations, " << out.malformed << " malformed\n"
                                << out.first_problem;
  }
}

TEST(Soundness, UniversalIntroductionNeedsFreshness) {
  // Ignoring the freshness condition would let P(x) yield ∀x P(x).
  Vocabulary voc = test_vocabulary();
  Model m(2);
  m.set_constant("c", 0);
  m.set_relation("P", 1, {{0}});
  m.set_relation("R", 2, {});
  m.set_function("f", 1, {0, 0});
  Team x(VariableSet{"x"});
  x.insert_row({0});
  Formula px = parse_formula("P(x)", voc);
  EXPECT_TRUE(satisfies(m, x, px));
  EXPECT_FALSE(satisfies(m, x, Formula::forall("x", px)));

  Proof p;
  p.steps.push_back(ProofStep{1, px, RuleId::Assume, {}, {}, 1});
  p.steps.push_back(ProofStep{2, Formula::forall("x", px), RuleId::ForallIntro, {1}, {}, 2});
  EXPECT_FALSE(check_step(p, 1).empty());
}

TEST(Soundness, DisjunctionEliminationNeedsFirstOrderConclusion) {
  // dep(x) holds on each half of {x=0, x=1} but not on the whole.
  Vocabulary voc = test_vocabulary();
  Model m(2);
  m.set_constant("c", 0);
  m.set_relation("P", 1, {{0}});
  m.set_relation("R", 2, {});
  m.set_function("f", 1, {0, 0});
  Team t(VariableSet{"x"});
  t.insert_row({0});
  t.insert_row({1});
  Formula split = parse_formula("P(x) | ~P(x)", voc);
  Formula c = parse_formula("dep(x)", voc);
  EXPECT_TRUE(satisfies(m, t, split));
  for (const Tuple& row : t.rows()) {
    Team one(VariableSet{"x"});
    one.insert_row(row);
    EXPECT_TRUE(satisfies(m, one, c));
  }
  EXPECT_FALSE(satisfies(m, t, c));
}
