#include <gtest/gtest.h>

#include "deplogic/io.hpp"
#include "generators.hpp"

using namespace deplogic;
using Category = SyntaxError::Category;

namespace {

Vocabulary voc() {
  Vocabulary v;
  v.add_relation("R", 2);
  v.add_relation("P", 1);
  v.add_function("f", 1);
  v.add_constant("c");
  return v;
}

Formula F(const std::string& text) { return parse_formula(text, voc()); }

Category category_of(const std::function<void()>& action) {
  try {
    action();
  } catch (const SyntaxError& e) {
    return e.category();
  }
  ADD_FAILURE() << "expected a SyntaxError";
  return Category::Syntax;
}

Diagnostic diagnostic_of(const std::function<void()>& action) {
  try {
    action();
  } catch (const SyntaxError& e) {
    return e.diagnostic();
  }
  ADD_FAILURE() << "expected a SyntaxError";
  return {};
}

Term var(const std::string& n) { return Term::variable(n); }

}  // namespace

TEST(ParseFormula, DependenceAtom) {
  EXPECT_EQ(F("dep(x,y)"), Formula::dep({var("x"), var("y")}));
  EXPECT_EQ(F("=(x,y)"), F("dep(x, y)"));
  EXPECT_EQ(F("dep()"), Formula::dep({}));
}

TEST(ParseFormula, InfinityAxiomInBothDependenceOrders) {
  for (auto [text, first, second] : {std::tuple{"exists z. forall x. exists y. (dep(x,y) & ~(y = z))", "x", "y"},
                                     std::tuple{"∃z. ∀x. ∃y. (dep(y,x) ∧ ¬y=z)", "y", "x"}}) {
    Formula phi = F(text);
    ASSERT_EQ(phi.kind(), FormulaKind::Exists);
    EXPECT_EQ(phi.symbol(), "z");
    ASSERT_EQ(phi.body().kind(), FormulaKind::Forall);
    EXPECT_EQ(phi.body().symbol(), "x");
    const Formula& inner = phi.body().body();
    ASSERT_EQ(inner.kind(), FormulaKind::Exists);
    EXPECT_EQ(inner.symbol(), "y");
    EXPECT_EQ(inner.body(), Formula::conj(Formula::dep({var(first), var(second)}),
                                          Formula::negation(Formula::equals(var("y"), var("z")))));
  }
}

TEST(ParseFormula, PrecedenceAndScope) {
  EXPECT_EQ(F("P(x) | P(y) & P(z)"), Formula::disj(F("P(x)"), Formula::conj(F("P(y)"), F("P(z)"))));
  EXPECT_EQ(F("forall x y. P(x) | P(y)"), Formula::forall("x", Formula::forall("y", F("P(x) | P(y)"))));
  EXPECT_EQ(F("x != y"), Formula::negation(F("x = y")));
  EXPECT_EQ(F("P(x) # trailing comment"), F("P(x)"));
}

TEST(ParseFormula, NegatedDependenceIsAScopeError) {
  EXPECT_EQ(category_of([] { F("~dep(x)"); }), Category::NegationScope);
  EXPECT_EQ(category_of([] { F("~(P(x) | exists y. dep(y))"); }), Category::NegationScope);
}

TEST(ParseFormula, VocabularyErrors) {
  EXPECT_EQ(category_of([] { F("R(x)"); }), Category::Vocabulary);
  EXPECT_EQ(category_of([] { F("g(x) = y"); }), Category::Vocabulary);
  EXPECT_EQ(category_of([] { F("exists c. P(c)"); }), Category::Vocabulary);
  EXPECT_EQ(category_of([] { F("P(P(x))"); }), Category::Vocabulary);
}

TEST(ParseFormula, SyntaxErrorPointsAtTheToken) {
  Diagnostic d = diagnostic_of([] { F("P(x) & & P(y)"); });
  EXPECT_EQ(d.line, 1u);
  EXPECT_EQ(d.column_begin, 8u);
  EXPECT_EQ(category_of([] { F("(P(x)"); }), Category::Syntax);
}

TEST(PrintFormula, CanonicalText) {
  EXPECT_EQ(print_formula(Formula::dep({})), "dep()");
  EXPECT_EQ(print_formula(F("P(x) & (R(x, y) | x = c)")), "(P(x) & (R(x, y) | x = c))");
  EXPECT_EQ(print_formula(F("(P(x) & P(y)) & P(z)")), "((P(x) & P(y)) & P(z))");
  EXPECT_EQ(print_formula(F("forall x. exists y. dep(x, y)"), Notation::Unicode), "∀x. ∃y. dep(x, y)");
  EXPECT_EQ(print_formula(F("~(x = f(c))"), Notation::Unicode), "x ≠ f(c)");
}

TEST(PrintFormula, QuantifierOnTheLeftIsParenthesized) {
  Formula phi = Formula::disj(F("exists x. P(x)"), F("P(y)"));
  EXPECT_EQ(F(print_formula(phi)), phi);
}

TEST(RoundTrip, RandomFormulasInBothNotations) {
  deplogic::testing::Gen gen(2024);
  Vocabulary v = deplogic::testing::test_vocabulary();
  for (int i = 0; i < 300; ++i) {
    Formula phi = gen.formula(5);
    for (Notation n : {Notation::Ascii, Notation::Unicode}) {
      std::string text = print_formula(phi, n);
      Formula back = parse_formula(text, v);
      ASSERT_EQ(back, phi) << text;
      EXPECT_EQ(print_formula(back, n), text);
    }
  }
}

TEST(ParseVocabulary, SemicolonsAndNewlines) {
  Vocabulary v = parse_vocabulary({"constant c; relation R/2\nfunction f/1"});
  EXPECT_EQ(v.kind_of("c"), SymbolKind::Constant);
  EXPECT_EQ(v.arity_of("R"), 2);
  EXPECT_EQ(v.kind_of("f"), SymbolKind::Function);
  EXPECT_EQ(category_of([] { parse_vocabulary({"relation R/1; function R/1"}); }), Category::Vocabulary);
}

TEST(ParseModel, ConstantsRelationsFunctions) {
  Model m = parse_model({"domain 2\nconstant c = 0"});
  EXPECT_EQ(m.size(), 2);
  EXPECT_EQ(m.constant("c"), 0);

  Model n = parse_model({"domain 3\nrelation R/2 = {(0,1), (2,2)}\nfunction f/1 = [0->1, 1->2, 2->0]\n"
                         "relation P/1 = {1}"});
  EXPECT_TRUE(n.holds("R", {0, 1}));
  EXPECT_FALSE(n.holds("R", {1, 0}));
  EXPECT_TRUE(n.holds("P", {1}));
  EXPECT_EQ(n.apply("f", {2}), 0);
}

TEST(ParseModel, Errors) {
  Diagnostic partial = diagnostic_of([] { parse_model({"domain 3\nfunction f/1 = [0->1, 1->2]"}); });
  EXPECT_NE(partial.message.find("(2)"), std::string::npos) << partial.message;
  EXPECT_EQ(partial.line, 2u);
  EXPECT_EQ(category_of([] { parse_model({"domain 2\nrelation R/2 = {(0,3)}"}); }), Category::Model);
  EXPECT_EQ(category_of([] { parse_model({"domain 2\nconstant c = 0\nconstant c = 1"}); }), Category::Model);
  EXPECT_EQ(category_of([] { parse_model({"constant c = 0"}); }), Category::Model);
}

TEST(PrintModel, ReparsesToTheSameModel) {
  deplogic::testing::Gen gen(5);
  for (int size = 1; size <= 3; ++size) {
    Model m = gen.model(size);
    Model back = parse_model({print_model(m)});
    EXPECT_EQ(print_model(back), print_model(m));
    EXPECT_EQ(back.relation_tuples("R"), m.relation_tuples("R"));
  }
}

TEST(ParseTeam, RowsAreASet) {
  Model m(2);
  Team t = parse_team({"vars x y\n0 1\n1 0"}, m);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(parse_team({"vars x\n0\n0"}, m).size(), 1u);
  EXPECT_EQ(parse_team({"vars\n()"}, m), Team::unit());
  EXPECT_TRUE(parse_team({"vars x"}, m).empty());
}

TEST(ParseTeam, Errors) {
  Model m(2);
  EXPECT_EQ(category_of([&] { parse_team({"vars x y\n0"}, m); }), Category::Team);
  EXPECT_EQ(category_of([&] { parse_team({"vars x\n2"}, m); }), Category::Team);
  EXPECT_EQ(category_of([&] { parse_team({"vars x x\n0 0"}, m); }), Category::Team);
  Diagnostic d = diagnostic_of([&] { parse_team({"vars x y\n0 1\n1 1 1"}, m); });
  EXPECT_EQ(d.line, 3u);
}

TEST(ParseProof, SingleAssumption) {
  Proof p = parse_proof({"1. P(c) assume"}, voc());
  ASSERT_EQ(p.steps.size(), 1u);
  EXPECT_EQ(p.steps[0].rule, RuleId::Assume);
  EXPECT_EQ(p.steps[0].line, 1u);
  EXPECT_TRUE(check_proof(p, {F("P(c)")}).accepted());
}

TEST(ParseProof, PremisesDischargesAndByKeyword) {
  Proof p = parse_proof({"1. P(c) | P(c) assume\n"
                         "2. P(c) assume\n"
                         "3. P(c) by or_e 1 2 2 discharge 2\n"},
                        voc());
  ASSERT_EQ(p.steps.size(), 3u);
  EXPECT_EQ(p.steps[2].rule, RuleId::OrElim);
  EXPECT_EQ(p.steps[2].premises, (std::vector<std::size_t>{1, 2, 2}));
  EXPECT_EQ(p.steps[2].discharged, (std::vector<std::size_t>{2}));
}

TEST(ParseProof, AndRoundTripIsAccepted) {
  Proof p = parse_proof({"1. P(c) assume\n2. R(c, c) assume\n3. P(c) & R(c, c) and_i 1 2\n4. R(c, c) and_e_r 3"},
                        voc());
  EXPECT_TRUE(check_proof(p, {F("P(c)"), F("R(c, c)")}).accepted());
}

TEST(ParseProof, Errors) {
  Diagnostic dangling = diagnostic_of([] { parse_proof({"1. P(c) assume\n2. P(c) & P(c) by and_i 1 5"}, voc()); });
  EXPECT_EQ(dangling.line, 2u);
  EXPECT_EQ(category_of([] { parse_proof({"1. P(c) assume\n2. P(c) & P(c) by and_i 1 5"}, voc()); }),
            Category::Reference);
  EXPECT_EQ(category_of([] { parse_proof({"1. P(c) frobnicate"}, voc()); }), Category::Rule);
  EXPECT_EQ(category_of([] { parse_proof({"1. P(c) assume\n1. P(c) assume"}, voc()); }), Category::Reference);
  Diagnostic bad = diagnostic_of([] { parse_proof({"1. P(c) assume\n2. P(c) & & P(c) and_i 1 1"}, voc()); });
  EXPECT_EQ(bad.line, 2u);
  EXPECT_GT(bad.column_begin, 3u);
}

TEST(PrintProof, Reparses) {
  std::string text = "1. P(c) assume\n2. P(c) & P(c) and_i 1 1\n3. P(c) and_e_l 2\n";
  Proof p = parse_proof({text}, voc());
  Proof back = parse_proof({print_proof(p)}, voc());
  ASSERT_EQ(back.steps.size(), p.steps.size());
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    EXPECT_EQ(back.steps[i].formula, p.steps[i].formula);
    EXPECT_EQ(back.steps[i].rule, p.steps[i].rule);
    EXPECT_EQ(back.steps[i].premises, p.steps[i].premises);
  }
}
