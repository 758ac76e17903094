#pragma once

// Randomized soundness checks for every inference rule of the kernel.
//
// An instance is a kernel step together with its semantic reading on one
// (model, team) pair. Rules that discharge assumptions carry a contract
// standing in for the hypothetical subderivation; it is checked over all
// subteams or all supplements, whichever the rule's soundness argument uses.

#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "deplogic/io.hpp"
#include "deplogic/normal_form.hpp"
#include "deplogic/proof.hpp"
#include "deplogic/semantics.hpp"
#include "generators.hpp"

namespace deplogic::testing {

struct RuleInstance {
  std::vector<Formula> premises;
  Formula conclusion;
  std::function<bool(const Model&, const Team&)> contract;
  std::optional<Proof> proof;  // last step is the rule application
  bool equivalence = false;     // also require conclusion ⇒ premise
  bool sentence = false;        // evaluate on {∅} instead of a random team
};

struct RuleOutcome {
  RuleId rule;
  int instances = 0;
  int violations = 0;
  int malformed = 0;  // kernel rejected the generated step
  std::string first_problem;

  bool passed(int target) const { return violations == 0 && malformed == 0 && instances >= target; }
};

namespace soundness_detail {

inline EvalOptions options() {
  EvalOptions o;
  o.budget.max_choice_points = 500'000;
  return o;
}

inline bool sat(const Model& m, const Team& t, const Formula& phi) { return satisfies(m, t, phi, options()); }

inline std::vector<Team> subteams(const Team& x) {
  std::vector<Tuple> rows(x.rows().begin(), x.rows().end());
  std::vector<Team> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << rows.size()); ++mask) {
    Team y(x.domain_set());
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (mask >> i & 1) y.insert_row(rows[i]);
    out.push_back(std::move(y));
  }
  return out;
}

// Every X(F/v) for F ranging over all functions from rows to the domain.
inline std::vector<Team> supplements(const Team& x, const Model& m, const std::string& v) {
  std::vector<Assignment> rows = x.assignments();
  std::vector<Element> digits(rows.size(), 0);
  std::vector<Team> out;
  for (;;) {
    std::map<Assignment, Element> f;
    for (std::size_t i = 0; i < rows.size(); ++i) f.emplace(rows[i], digits[i]);
    out.push_back(supplement(x, f, v));
    std::size_t i = 0;
    for (; i < digits.size(); ++i) {
      if (++digits[i] < m.size()) break;
      digits[i] = 0;
    }
    if (i == digits.size()) return out;
  }
}

class Script {
 public:
  std::size_t add(Formula f, RuleId r = RuleId::Assume, std::vector<std::size_t> premises = {},
                  std::vector<std::size_t> discharged = {}) {
    std::size_t label = proof.steps.size() + 1;
    proof.steps.push_back(ProofStep{label, std::move(f), r, std::move(premises), std::move(discharged), label});
    return label;
  }
  Proof proof;
};

inline Formula fo(Gen& g, int depth = 2) { return g.formula(depth, true); }

inline std::optional<Formula> without_free(Gen& g, const std::string& x, bool first_order, int depth = 2) {
  for (int i = 0; i < 20; ++i) {
    Formula f = g.formula(depth, first_order);
    if (!free_vars(f).count(x)) return f;
  }
  return std::nullopt;
}

// Premise and conclusion of a single-premise rule with no side contract.
inline RuleInstance simple(RuleId r, std::vector<Formula> premises, Formula conclusion) {
  Script s;
  std::vector<std::size_t> labels;
  for (const auto& p : premises) labels.push_back(s.add(p));
  s.add(conclusion, r, labels);
  return RuleInstance{std::move(premises), std::move(conclusion), nullptr, s.proof};
}

inline std::optional<RuleInstance> draw(RuleId rule, Gen& g) {
  switch (rule) {
    case RuleId::Assume: {
      Formula a = g.formula(3);
      Script s;
      s.add(a);
      return RuleInstance{{a}, a, nullptr, s.proof};
    }
    case RuleId::AndIntro: {
      Formula a = g.formula(2), b = g.formula(2);
      return simple(rule, {a, b}, Formula::conj(a, b));
    }
    case RuleId::AndElimLeft:
    case RuleId::AndElimRight: {
      Formula a = g.formula(2), b = g.formula(2);
      return simple(rule, {Formula::conj(a, b)}, rule == RuleId::AndElimLeft ? a : b);
    }
    case RuleId::OrIntroLeft:
    case RuleId::OrIntroRight: {
      Formula a = g.formula(2), b = g.formula(2);
      return simple(rule, {a}, rule == RuleId::OrIntroLeft ? Formula::disj(a, b) : Formula::disj(b, a));
    }
    case RuleId::OrElim: {
      Formula a = g.formula(2), b = g.formula(2);
      Formula c = fo(g);
      if (g.chance(0.5)) c = Formula::disj(fo(g, 1), c);
      Script s;
      auto ab = s.add(Formula::disj(a, b));
      auto ha = s.add(a);
      auto c1 = s.add(c);
      auto hb = s.add(b);
      auto c2 = s.add(c);
      s.add(c, rule, {ab, c1, c2}, {ha, hb});
      auto contract = [a, b, c](const Model& m, const Team& x) {
        for (const auto& y : subteams(x)) {
          bool yc = sat(m, y, c);
          if (!yc && (sat(m, y, a) || sat(m, y, b))) return false;
        }
        return true;
      };
      return RuleInstance{{Formula::disj(a, b)}, c, contract, s.proof};
    }
    case RuleId::NegIntro: {
      Formula a = fo(g), b = fo(g, 1);
      Formula contra = Formula::conj(b, Formula::negation(b));
      Script s;
      auto ha = s.add(a);
      auto k = s.add(contra);
      s.add(Formula::negation(a), rule, {k}, {ha});
      auto contract = [a, contra](const Model& m, const Team& x) {
        for (const auto& y : subteams(x))
          if (sat(m, y, a) && !sat(m, y, contra)) return false;
        return true;
      };
      return RuleInstance{{}, Formula::negation(a), contract, s.proof};
    }
    case RuleId::NegElim: {
      Formula a = fo(g);
      return simple(rule, {Formula::negation(Formula::negation(a))}, a);
    }
    case RuleId::ForallIntro: {
      const std::string& x = g.pick(g.vars());
      auto h = without_free(g, x, false);
      if (!h) return std::nullopt;
      Formula a = g.formula(2);
      Formula hyp = *h;
      // Standing in for "every team satisfying the hypothesis satisfies A",
      // taken at the team the soundness argument needs.
      auto contract = [hyp, a, x](const Model& m, const Team& t) {
        Team dup = duplicate(t, m, x);
        return !sat(m, dup, hyp) || sat(m, dup, a);
      };
      Script s;
      auto k = s.add(Formula::forall(x, a));
      auto inst = s.add(a, RuleId::ForallElim, {k});
      s.add(Formula::forall(x, a), rule, {inst});
      return RuleInstance{{hyp}, Formula::forall(x, a), contract, s.proof};
    }
    case RuleId::ForallElim:
    case RuleId::ExistsIntro: {
      const std::string& x = g.pick(g.vars());
      Formula a = g.formula(2);
      Term t = g.term(1);
      Formula inst = a;
      try {
        inst = substitute(a, t, x);
      } catch (const CaptureError&) {
        return std::nullopt;
      }
      if (rule == RuleId::ForallElim) return simple(rule, {Formula::forall(x, a)}, inst);
      return simple(rule, {inst}, Formula::exists(x, a));
    }
    case RuleId::ExistsElim: {
      const std::string& x = g.pick(g.vars());
      Formula a = g.formula(2);
      auto b = without_free(g, x, false);
      if (!b) return std::nullopt;
      Formula bb = *b;
      Script s;
      auto ex = s.add(Formula::exists(x, a));
      auto ha = s.add(a);
      auto hb = s.add(bb);
      s.add(bb, rule, {ex, hb}, {ha});
      auto contract = [a, bb, x](const Model& m, const Team& t) {
        for (const auto& y : supplements(t, m, x))
          if (sat(m, y, a) && !sat(m, y, bb)) return false;
        return true;
      };
      return RuleInstance{{Formula::exists(x, a)}, bb, contract, s.proof};
    }
    case RuleId::DisjSubst: {
      Formula a = g.formula(2), b = g.formula(2), c = g.formula(2);
      Script s;
      auto ab = s.add(Formula::disj(a, b));
      auto hb = s.add(b);
      auto hc = s.add(c);
      s.add(Formula::disj(a, c), rule, {ab, hc}, {hb});
      auto contract = [b, c](const Model& m, const Team& x) {
        for (const auto& y : subteams(x))
          if (sat(m, y, b) && !sat(m, y, c)) return false;
        return true;
      };
      return RuleInstance{{Formula::disj(a, b)}, Formula::disj(a, c), contract, s.proof};
    }
    case RuleId::DisjComm: {
      Formula a = g.formula(2), b = g.formula(2);
      return simple(rule, {Formula::disj(a, b)}, Formula::disj(b, a));
    }
    case RuleId::DisjAssoc: {
      Formula a = g.formula(2), b = g.formula(2), c = g.formula(2);
      return simple(rule, {Formula::disj(Formula::disj(a, b), c)}, Formula::disj(a, Formula::disj(b, c)));
    }
    case RuleId::ScopeForall:
    case RuleId::ScopeExists: {
      const std::string& x = g.pick(g.vars());
      Formula a = g.formula(2);
      auto b = without_free(g, x, false);
      if (!b) return std::nullopt;
      bool all = rule == RuleId::ScopeForall;
      Formula q = all ? Formula::forall(x, a) : Formula::exists(x, a);
      Formula wide = Formula::disj(a, *b);
      return simple(rule, {Formula::disj(q, *b)}, all ? Formula::forall(x, wide) : Formula::exists(x, wide));
    }
    case RuleId::Unnest: {
      std::vector<Term> ts;
      int n = 1 + g.below(3);
      for (int i = 0; i < n; ++i) ts.push_back(g.term(2));
      std::size_t i = static_cast<std::size_t>(g.below(n));
      std::vector<Term> us = ts;
      us[i] = Term::variable("v");
      Formula concl = Formula::exists(
          "v", Formula::conj(Formula::dep(us), Formula::equals(Term::variable("v"), ts[i])));
      return simple(rule, {Formula::dep(ts)}, concl);
    }
    case RuleId::DepDistribute: {
      auto block = [&](const std::vector<std::string>& ys) {
        std::vector<Formula> deps;
        std::vector<std::string> visible = {"w", "x", "y", "z"};
        for (const auto& y : ys) {
          std::vector<Term> args;
          for (const auto& v : visible)
            if (g.chance(0.3)) args.push_back(Term::variable(v));
          args.push_back(Term::variable(y));
          deps.push_back(Formula::dep(args));
          visible.push_back(y);
        }
        std::vector<std::string> mvars = {"x", "y"};
        mvars.insert(mvars.end(), ys.begin(), ys.end());
        Formula rest = g.matrix(mvars, 2);
        return std::tuple{deps, rest};
      };
      std::vector<std::string> left = g.chance(0.5) ? std::vector<std::string>{"a"} : std::vector<std::string>{"a", "a2"};
      std::vector<std::string> right = {"b"};
      auto [dl, cl] = block(left);
      auto [dr, cr] = block(right);
      auto assemble = [](const std::vector<std::string>& ys, std::vector<Formula> parts) {
        return exists_all(ys, conj_all(parts));
      };
      std::vector<Formula> pl = dl, pr = dr;
      pl.push_back(cl);
      pr.push_back(cr);
      Formula premise = Formula::disj(assemble(left, pl), assemble(right, pr));
      std::vector<std::string> ys = left;
      ys.insert(ys.end(), right.begin(), right.end());
      std::vector<Formula> parts = dl;
      parts.insert(parts.end(), dr.begin(), dr.end());
      parts.push_back(Formula::disj(cl, cr));
      return simple(rule, {premise}, assemble(ys, parts));
    }
    case RuleId::DepIntro: {
      Gen inner(static_cast<unsigned>(g.below(1 << 30)), {"a", "b", "x", "y"});
      Formula a = inner.formula(3);
      Formula premise = Formula::exists("a", Formula::forall("b", a));
      RuleInstance r = simple(rule, {premise}, apply_rule7(premise));
      r.equivalence = true;
      return r;
    }
    case RuleId::DepElim: {
      Formula premise = reassemble(g.normal_form(3));
      RuleInstance r = simple(rule, {premise}, apply_rule8(premise));
      r.sentence = true;
      return r;
    }
    case RuleId::Identity: {
      switch (g.below(4)) {
        case 0: {
          Term t = g.term(2);
          return simple(rule, {}, Formula::equals(t, t));
        }
        case 1: {
          Term s = g.term(1), t = g.term(1);
          return simple(rule, {Formula::equals(s, t)}, Formula::equals(t, s));
        }
        case 2: {
          Term s = g.term(1), t = g.term(1), u = g.term(1);
          return simple(rule, {Formula::equals(s, t), Formula::equals(t, u)}, Formula::equals(s, u));
        }
        default: {
          Formula phi = fo(g);
          const std::string& x = g.pick(g.vars());
          Term t1 = g.term(1), t2 = g.term(1);
          try {
            Formula before = substitute(phi, t1, x);
            Formula after = substitute(phi, t2, x);
            return simple(rule, {Formula::equals(t1, t2), before}, after);
          } catch (const CaptureError&) {
            return std::nullopt;
          }
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace soundness_detail

inline RuleOutcome check_rule_soundness(RuleId rule, unsigned seed, int target, int max_attempts) {
  using namespace soundness_detail;
  RuleOutcome out{rule};
  Gen g(seed);
  for (int attempt = 0; out.instances < target && attempt < max_attempts; ++attempt) {
    std::optional<RuleInstance> inst;
    try {
      inst = draw(rule, g);
    } catch (const Error&) {
      continue;
    }
    if (!inst) continue;
    if (inst->proof) {
      auto diags = check_step(*inst->proof, inst->proof->steps.size() - 1);
      if (!diags.empty()) {
        if (out.malformed++ == 0) out.first_problem = "kernel rejected generated step: " + diags[0].message;
        continue;
      }
    }
    Model m = g.model(1 + g.below(3));
    Team x = inst->sentence ? Team::unit() : g.team({"w", "x", "y", "z"}, m, 4);
    if (x.empty()) continue;
    try {
      bool premises = true;
      for (const auto& p : inst->premises) premises = premises && sat(m, x, p);
      bool conclusion = sat(m, x, inst->conclusion);
      if (inst->equivalence) {
        ++out.instances;
        if (premises != conclusion && out.violations++ == 0)
          out.first_problem = "equivalence fails: " + print_formula(inst->conclusion) + "\n" + print_model(m) +
                              print_team(x);
        continue;
      }
      if (!premises || (inst->contract && !inst->contract(m, x))) continue;
      ++out.instances;
      if (!conclusion && out.violations++ == 0) {
        std::ostringstream why;
        why << "conclusion fails: " << print_formula(inst->conclusion) << "\n" << print_model(m) << print_team(x);
        out.first_problem = why.str();
      }
    } catch (const BudgetExceeded&) {
    }
  }
  return out;
}

}  // namespace deplogic::testing
