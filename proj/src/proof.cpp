#include "deplogic/proof.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace deplogic {

namespace {

constexpr std::array<std::pair<RuleId, std::string_view>, 23> kRuleNames{{
    {RuleId::Assume, "assume"},
    {RuleId::AndIntro, "and_i"},
    {RuleId::AndElimLeft, "and_e_l"},
    {RuleId::AndElimRight, "and_e_r"},
    {RuleId::OrIntroLeft, "or_i_l"},
    {RuleId::OrIntroRight, "or_i_r"},
    {RuleId::OrElim, "or_e"},
    {RuleId::NegIntro, "neg_i"},
    {RuleId::NegElim, "neg_e"},
    {RuleId::ForallIntro, "forall_i"},
    {RuleId::ForallElim, "forall_e"},
    {RuleId::ExistsIntro, "exists_i"},
    {RuleId::ExistsElim, "exists_e"},
    {RuleId::DisjSubst, "disj_subst"},
    {RuleId::DisjComm, "disj_comm"},
    {RuleId::DisjAssoc, "disj_assoc"},
    {RuleId::ScopeForall, "scope_forall"},
    {RuleId::ScopeExists, "scope_exists"},
    {RuleId::Unnest, "unnest"},
    {RuleId::DepDistribute, "dep_distribute"},
    {RuleId::DepIntro, "dep_intro"},
    {RuleId::DepElim, "dep_elim"},
    {RuleId::Identity, "identity"},
}};

}  // namespace

std::string_view rule_name(RuleId rule) {
  for (const auto& [id, name] : kRuleNames)
    if (id == rule) return name;
  return "?";
}

std::optional<RuleId> rule_from_name(std::string_view name) {
  for (const auto& [id, n] : kRuleNames)
    if (n == name) return id;
  return std::nullopt;
}

const std::vector<RuleId>& all_rules() {
  static const std::vector<RuleId> rules = [] {
    std::vector<RuleId> out;
    for (const auto& entry : kRuleNames) out.push_back(entry.first);
    return out;
  }();
  return rules;
}

namespace {

// ------------------------------------------------------------ schema helpers

// First term of `c` sitting where `a` has a free occurrence of x.
std::optional<Term> find_instance_term(const Term& a, const Term& c, const std::string& x) {
  if (a.is_variable() && a.name() == x) return c;
  if (a.kind() != Term::Kind::Apply || c.kind() != Term::Kind::Apply || a.name() != c.name() ||
      a.args().size() != c.args().size())
    return std::nullopt;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (auto t = find_instance_term(a.args()[i], c.args()[i], x)) return t;
  return std::nullopt;
}

std::optional<Term> find_instance_term(const Formula& a, const Formula& c, const std::string& x) {
  if (a.kind() != c.kind()) return std::nullopt;
  switch (a.kind()) {
    case FormulaKind::Relation:
    case FormulaKind::Equals:
    case FormulaKind::Dep:
      if (a.terms().size() != c.terms().size()) return std::nullopt;
      for (std::size_t i = 0; i < a.terms().size(); ++i)
        if (auto t = find_instance_term(a.terms()[i], c.terms()[i], x)) return t;
      return std::nullopt;
    case FormulaKind::Not:
      return find_instance_term(a.body(), c.body(), x);
    case FormulaKind::And:
    case FormulaKind::Or:
      if (auto t = find_instance_term(a.lhs(), c.lhs(), x)) return t;
      return find_instance_term(a.rhs(), c.rhs(), x);
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      if (a.symbol() == x) return std::nullopt;
      return find_instance_term(a.body(), c.body(), x);
  }
  return std::nullopt;
}

// Empty when instance == body(t/x) for some t; otherwise the reason.
std::optional<std::string> instance_problem(const Formula& body, const std::string& x, const Formula& instance) {
  Term t = find_instance_term(body, instance, x).value_or(Term::variable(x));
  try {
    if (alpha_equal(substitute(body, t, x), instance)) return std::nullopt;
  } catch (const CaptureError&) {
    return "substituting a term for " + x + " would bind one of its variables";
  }
  return "not an instance of the quantified formula";
}

// Congruence: `to` arises from `from` by replacing some occurrences of s by u.
bool congruent_term(const Term& from, const Term& to, const Term& s, const Term& u) {
  if (from == to) return true;
  if (from == s && to == u) return true;
  if (from.kind() != Term::Kind::Apply || to.kind() != Term::Kind::Apply || from.name() != to.name() ||
      from.args().size() != to.args().size())
    return false;
  for (std::size_t i = 0; i < from.args().size(); ++i)
    if (!congruent_term(from.args()[i], to.args()[i], s, u)) return false;
  return true;
}

bool touches(const Term& t, const VariableSet& bound) {
  for (const auto& v : term_variables(t))
    if (bound.count(v)) return true;
  return false;
}

bool congruent(const Formula& from, const Formula& to, const Term& s, const Term& u, VariableSet& bound,
               bool& captured) {
  if (from.kind() != to.kind()) return false;
  switch (from.kind()) {
    case FormulaKind::Relation:
    case FormulaKind::Equals:
    case FormulaKind::Dep:
      if (from.kind() == FormulaKind::Relation && from.symbol() != to.symbol()) return false;
      if (from.terms().size() != to.terms().size()) return false;
      for (std::size_t i = 0; i < from.terms().size(); ++i) {
        if (!congruent_term(from.terms()[i], to.terms()[i], s, u)) return false;
        if (from.terms()[i] != to.terms()[i] && (touches(s, bound) || touches(u, bound))) captured = true;
      }
      return true;
    case FormulaKind::Not:
      return congruent(from.body(), to.body(), s, u, bound, captured);
    case FormulaKind::And:
    case FormulaKind::Or:
      return congruent(from.lhs(), to.lhs(), s, u, bound, captured) &&
             congruent(from.rhs(), to.rhs(), s, u, bound, captured);
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      if (from.symbol() != to.symbol()) return false;
      bool fresh = bound.insert(from.symbol()).second;
      bool ok = congruent(from.body(), to.body(), s, u, bound, captured);
      if (fresh) bound.erase(from.symbol());
      return ok;
    }
  }
  return false;
}

struct Peeled {
  std::vector<std::string> vars;
  std::vector<Formula> deps;
  Formula rest;
};

// ∃y1…∃yn(dep(…,y1) ∧ (… ∧ C)) with one dependence atom per quantified variable.
std::optional<Peeled> peel_dep_block(const Formula& phi) {
  Peeled out{{}, {}, phi};
  while (out.rest.kind() == FormulaKind::Exists) {
    out.vars.push_back(out.rest.symbol());
    out.rest = out.rest.body();
  }
  for (const auto& y : out.vars) {
    if (out.rest.kind() != FormulaKind::And || out.rest.lhs().kind() != FormulaKind::Dep) return std::nullopt;
    const Formula& d = out.rest.lhs();
    if (d.terms().empty() || !d.terms().back().is_variable() || d.terms().back().name() != y)
      return std::nullopt;
    out.deps.push_back(d);
    out.rest = out.rest.rhs();
  }
  if (!out.rest.is_first_order() || !out.rest.is_quantifier_free()) return std::nullopt;
  return out;
}

// ------------------------------------------------------------------ analysis

struct Analysis {
  std::map<std::size_t, std::size_t> position;     // label -> index
  std::vector<std::set<std::size_t>> deps;          // open assumption labels per step
  std::map<std::size_t, std::size_t> discharged_at;  // assumption label -> index of closing step
};

bool discharges_anything(RuleId r) {
  return r == RuleId::OrElim || r == RuleId::NegIntro || r == RuleId::ExistsElim || r == RuleId::DisjSubst;
}

// Which premise (0-based) a discharged assumption is closed in, given its formula.
std::vector<std::size_t> discharge_targets(const Proof& p, const Analysis& a, const ProofStep& st,
                                           const Formula& hyp) {
  auto premise = [&](std::size_t i) -> std::optional<Formula> {
    if (i >= st.premises.size() || !a.position.count(st.premises[i])) return std::nullopt;
    return p.steps[a.position.at(st.premises[i])].formula;
  };
  std::vector<std::size_t> out;
  switch (st.rule) {
    case RuleId::OrElim:
      if (auto d = premise(0); d && d->kind() == FormulaKind::Or) {
        if (alpha_equal(d->lhs(), hyp)) out.push_back(1);
        if (alpha_equal(d->rhs(), hyp)) out.push_back(2);
      }
      break;
    case RuleId::NegIntro:
      if (st.formula.kind() == FormulaKind::Not && alpha_equal(st.formula.body(), hyp)) out.push_back(0);
      break;
    case RuleId::ExistsElim:
      if (auto d = premise(0); d && d->kind() == FormulaKind::Exists && alpha_equal(d->body(), hyp))
        out.push_back(1);
      break;
    case RuleId::DisjSubst:
      if (auto d = premise(0); d && d->kind() == FormulaKind::Or && alpha_equal(d->rhs(), hyp))
        out.push_back(1);
      break;
    default:
      break;
  }
  return out;
}

Analysis analyze(const Proof& p) {
  Analysis a;
  a.deps.resize(p.steps.size());
  for (std::size_t k = 0; k < p.steps.size(); ++k) {
    const ProofStep& st = p.steps[k];
    if (st.rule == RuleId::Assume) a.deps[k].insert(st.label);
    std::vector<std::set<std::size_t>> per_premise;
    for (auto q : st.premises) {
      auto it = a.position.find(q);
      per_premise.push_back(it == a.position.end() ? std::set<std::size_t>{} : a.deps[it->second]);
    }
    for (auto d : st.discharged) {
      auto it = a.position.find(d);
      if (it == a.position.end()) continue;
      for (auto target : discharge_targets(p, a, st, p.steps[it->second].formula))
        if (target < per_premise.size()) per_premise[target].erase(d);
      a.discharged_at.emplace(d, k);
    }
    for (const auto& s : per_premise) a.deps[k].insert(s.begin(), s.end());
    a.position.emplace(st.label, k);
  }
  return a;
}

// ------------------------------------------------------------------- checker

class StepChecker {
 public:
  StepChecker(const Proof& p, const Analysis& a, std::size_t k) : p_(p), a_(a), k_(k), st_(p.steps[k]) {}

  std::vector<Diagnostic> run() {
    if (!references_ok()) return out_;
    try {
      check_rule();
    } catch (const Error& e) {
      fail(e.what());
    }
    return out_;
  }

 private:
  void fail(const std::string& msg) {
    std::string head = "step " + std::to_string(st_.label) + " (" + std::string(rule_name(st_.rule)) + "): ";
    std::size_t width = std::to_string(st_.label).size();
    out_.push_back(Diagnostic{Severity::Error, head + msg, st_.line, 1, 1 + width});
  }

  bool references_ok() {
    bool ok = true;
    for (auto q : st_.premises) {
      auto it = a_.position.find(q);
      if (it == a_.position.end() || it->second >= k_) {
        fail("premise " + std::to_string(q) + " does not refer to an earlier step");
        ok = false;
        continue;
      }
      for (auto d : a_.deps[it->second]) {
        auto closed = a_.discharged_at.find(d);
        if (closed != a_.discharged_at.end() && closed->second < k_) {
          fail("premise " + std::to_string(q) + " depends on assumption " + std::to_string(d) +
               ", which was discharged at step " + std::to_string(p_.steps[closed->second].label));
          ok = false;
        }
      }
    }
    std::set<std::size_t> seen;
    for (auto d : st_.discharged) {
      auto it = a_.position.find(d);
      if (it == a_.position.end() || it->second >= k_) {
        fail("discharge " + std::to_string(d) + " does not refer to an earlier step");
        ok = false;
        continue;
      }
      if (p_.steps[it->second].rule != RuleId::Assume) {
        fail("step " + std::to_string(d) + " is not an assumption and cannot be discharged");
        ok = false;
      }
      if (!seen.insert(d).second || a_.discharged_at.at(d) != k_) {
        fail("assumption " + std::to_string(d) + " is discharged more than once");
        ok = false;
      }
      if (!discharges_anything(st_.rule)) {
        fail("this rule discharges no assumptions");
        ok = false;
      } else if (discharge_targets(p_, a_, st_, p_.steps[it->second].formula).empty()) {
        fail("assumption " + std::to_string(d) + " is not a hypothesis this rule can discharge");
        ok = false;
      }
    }
    return ok;
  }

  const Formula& premise(std::size_t i) const { return p_.steps[a_.position.at(st_.premises[i])].formula; }
  const std::set<std::size_t>& premise_deps(std::size_t i) const {
    return a_.deps[a_.position.at(st_.premises[i])];
  }

  bool arity(std::size_t n) {
    if (st_.premises.size() == n) return true;
    fail("expects " + std::to_string(n) + " premise" + (n == 1 ? "" : "s") + ", got " +
         std::to_string(st_.premises.size()));
    return false;
  }

  bool expect_kind(const Formula& f, FormulaKind kind, const char* what) {
    if (f.kind() == kind) return true;
    fail(std::string("expected ") + what);
    return false;
  }

  void expect_equal(const Formula& got, const Formula& want, const char* what) {
    if (!alpha_equal(got, want)) fail(what);
  }

  // Free variables of the open assumptions in `labels`, minus `except`.
  std::optional<std::size_t> assumption_binding(const std::set<std::size_t>& labels, const std::string& x,
                                                const std::set<std::size_t>& except = {}) const {
    for (auto d : labels) {
      if (except.count(d)) continue;
      if (free_vars(p_.steps[a_.position.at(d)].formula).count(x)) return d;
    }
    return std::nullopt;
  }

  void check_rule() {
    const Formula& c = st_.formula;
    switch (st_.rule) {
      case RuleId::Assume:
        arity(0);
        return;
      case RuleId::AndIntro:
        if (!arity(2) || !expect_kind(c, FormulaKind::And, "a conjunction")) return;
        expect_equal(c.lhs(), premise(0), "left conjunct differs from the first premise");
        expect_equal(c.rhs(), premise(1), "right conjunct differs from the second premise");
        return;
      case RuleId::AndElimLeft:
      case RuleId::AndElimRight: {
        if (!arity(1) || !expect_kind(premise(0), FormulaKind::And, "a conjunction as premise")) return;
        bool left = st_.rule == RuleId::AndElimLeft;
        expect_equal(c, left ? premise(0).lhs() : premise(0).rhs(), "conclusion is not the selected conjunct");
        return;
      }
      case RuleId::OrIntroLeft:
      case RuleId::OrIntroRight: {
        if (!arity(1) || !expect_kind(c, FormulaKind::Or, "a disjunction")) return;
        bool left = st_.rule == RuleId::OrIntroLeft;
        expect_equal(left ? c.lhs() : c.rhs(), premise(0), "premise is not the introduced disjunct");
        return;
      }
      case RuleId::OrElim:
        if (!arity(3) || !expect_kind(premise(0), FormulaKind::Or, "a disjunction as first premise")) return;
        expect_equal(premise(1), c, "second premise differs from the conclusion");
        expect_equal(premise(2), c, "third premise differs from the conclusion");
        if (!c.is_first_order()) fail("the conclusion of disjunction elimination must be first-order");
        return;
      case RuleId::NegIntro: {
        if (!arity(1) || !expect_kind(c, FormulaKind::Not, "a negation")) return;
        const Formula& contra = premise(0);
        if (!contra.is_first_order() || !c.is_first_order()) {
          fail("negation introduction requires first-order formulas");
          return;
        }
        if (contra.kind() != FormulaKind::And || contra.rhs().kind() != FormulaKind::Not ||
            !alpha_equal(contra.lhs(), contra.rhs().body())) {
          fail("premise must be a contradiction B & ~B");
          return;
        }
        if (st_.discharged.empty()) fail("must discharge the assumption being negated");
        return;
      }
      case RuleId::NegElim:
        if (!arity(1)) return;
        if (!premise(0).is_first_order() || !c.is_first_order()) {
          fail("negation elimination requires first-order formulas");
          return;
        }
        if (premise(0).kind() != FormulaKind::Not || premise(0).body().kind() != FormulaKind::Not) {
          fail("premise must be a double negation");
          return;
        }
        expect_equal(premise(0).body().body(), c, "conclusion differs from the doubly negated formula");
        return;
      case RuleId::ForallIntro: {
        if (!arity(1) || !expect_kind(c, FormulaKind::Forall, "a universal formula")) return;
        expect_equal(c.body(), premise(0), "quantified formula differs from the premise");
        if (auto d = assumption_binding(premise_deps(0), c.symbol()))
          fail("variable " + c.symbol() + " occurs free in open assumption " + std::to_string(*d) +
               " used to derive the premise");
        return;
      }
      case RuleId::ForallElim:
        if (!arity(1) || !expect_kind(premise(0), FormulaKind::Forall, "a universal premise")) return;
        if (auto why = instance_problem(premise(0).body(), premise(0).symbol(), c)) fail(*why);
        return;
      case RuleId::ExistsIntro:
        if (!arity(1) || !expect_kind(c, FormulaKind::Exists, "an existential formula")) return;
        if (auto why = instance_problem(c.body(), c.symbol(), premise(0))) fail(*why);
        return;
      case RuleId::ExistsElim: {
        if (!arity(2) || !expect_kind(premise(0), FormulaKind::Exists, "an existential first premise")) return;
        expect_equal(premise(1), c, "second premise differs from the conclusion");
        const std::string& x = premise(0).symbol();
        if (free_vars(c).count(x)) fail("variable " + x + " occurs free in the conclusion");
        std::set<std::size_t> closed(st_.discharged.begin(), st_.discharged.end());
        if (auto d = assumption_binding(premise_deps(1), x, closed))
          fail("variable " + x + " occurs free in open assumption " + std::to_string(*d) +
               " used to derive the second premise");
        return;
      }
      case RuleId::DisjSubst:
        if (!arity(2) || !expect_kind(premise(0), FormulaKind::Or, "a disjunction as first premise") ||
            !expect_kind(c, FormulaKind::Or, "a disjunction"))
          return;
        expect_equal(c.lhs(), premise(0).lhs(), "left disjunct must be kept");
        expect_equal(c.rhs(), premise(1), "right disjunct differs from the second premise");
        return;
      case RuleId::DisjComm:
        if (!arity(1) || !expect_kind(premise(0), FormulaKind::Or, "a disjunction as premise") ||
            !expect_kind(c, FormulaKind::Or, "a disjunction"))
          return;
        expect_equal(c, Formula::disj(premise(0).rhs(), premise(0).lhs()), "disjuncts are not swapped");
        return;
      case RuleId::DisjAssoc: {
        if (!arity(1)) return;
        const Formula& q = premise(0);
        if (q.kind() != FormulaKind::Or || q.lhs().kind() != FormulaKind::Or) {
          fail("premise must have the shape (A | B) | C");
          return;
        }
        expect_equal(c, Formula::disj(q.lhs().lhs(), Formula::disj(q.lhs().rhs(), q.rhs())),
                     "conclusion is not A | (B | C)");
        return;
      }
      case RuleId::ScopeForall:
      case RuleId::ScopeExists: {
        if (!arity(1)) return;
        FormulaKind qk = st_.rule == RuleId::ScopeForall ? FormulaKind::Forall : FormulaKind::Exists;
        const Formula& q = premise(0);
        if (q.kind() != FormulaKind::Or || q.lhs().kind() != qk) {
          fail("premise must be a quantified formula on the left of a disjunction");
          return;
        }
        const std::string& x = q.lhs().symbol();
        if (free_vars(q.rhs()).count(x)) {
          fail("variable " + x + " occurs free in the right disjunct");
          return;
        }
        Formula want = Formula::disj(q.lhs().body(), q.rhs());
        want = qk == FormulaKind::Forall ? Formula::forall(x, want) : Formula::exists(x, want);
        expect_equal(c, want, "conclusion does not extend the quantifier's scope");
        return;
      }
      case RuleId::Unnest:
        check_unnest();
        return;
      case RuleId::DepDistribute:
        check_distribute();
        return;
      case RuleId::DepIntro:
        check_dep_intro();
        return;
      case RuleId::DepElim:
        if (!arity(1)) return;
        try {
          expect_equal(c, apply_rule8(premise(0)), "conclusion differs from the dependence elimination");
        } catch (const SchemaMismatch& e) {
          fail(e.what());
        }
        return;
      case RuleId::Identity:
        check_identity();
        return;
    }
  }

  void check_unnest() {
    if (!arity(1) || !expect_kind(premise(0), FormulaKind::Dep, "a dependence atom as premise")) return;
    const Formula& c = st_.formula;
    const auto& ts = premise(0).terms();
    if (c.kind() != FormulaKind::Exists || c.body().kind() != FormulaKind::And ||
        c.body().lhs().kind() != FormulaKind::Dep || c.body().rhs().kind() != FormulaKind::Equals) {
      fail("conclusion must have the shape exists z. (dep(...) & z = t)");
      return;
    }
    const std::string& z = c.symbol();
    if (all_variables(premise(0)).count(z)) {
      fail("variable " + z + " is not new");
      return;
    }
    const auto& us = c.body().lhs().terms();
    const auto& eq = c.body().rhs().terms();
    if (us.size() != ts.size()) {
      fail("dependence atoms have different lengths");
      return;
    }
    std::optional<std::size_t> pos;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (us[i] == ts[i]) continue;
      if (pos || !us[i].is_variable() || us[i].name() != z) {
        fail("conclusion must replace exactly one argument by " + z);
        return;
      }
      pos = i;
    }
    if (!pos) {
      fail("no argument is replaced by " + z);
      return;
    }
    if (!(eq[0] == Term::variable(z)) || !(eq[1] == ts[*pos])) fail("equation must read " + z + " = t_i");
  }

  void check_distribute() {
    if (!arity(1) || !expect_kind(premise(0), FormulaKind::Or, "a disjunction as premise")) return;
    auto a = peel_dep_block(premise(0).lhs());
    auto b = peel_dep_block(premise(0).rhs());
    if (!a || !b) {
      fail("each disjunct must be exists y. (dep(..., y) & ... & C) with C quantifier-free and first-order");
      return;
    }
    VariableSet vars_a = all_variables(premise(0).lhs());
    VariableSet vars_b = all_variables(premise(0).rhs());
    for (const auto& y : a->vars)
      if (vars_b.count(y)) return fail("variable " + y + " of the left block occurs in the right disjunct");
    for (const auto& y : b->vars)
      if (vars_a.count(y)) return fail("variable " + y + " of the right block occurs in the left disjunct");
    std::vector<std::string> ys = a->vars;
    ys.insert(ys.end(), b->vars.begin(), b->vars.end());
    std::vector<Formula> parts = a->deps;
    parts.insert(parts.end(), b->deps.begin(), b->deps.end());
    parts.push_back(Formula::disj(a->rest, b->rest));
    expect_equal(st_.formula, exists_all(ys, conj_all(parts)), "conclusion does not merge the two blocks");
  }

  void check_dep_intro() {
    if (!arity(1)) return;
    Formula want = apply_rule7(premise(0));
    const Formula& c = st_.formula;
    if (c.kind() != FormulaKind::Forall || c.body().kind() != FormulaKind::Exists ||
        c.body().body().kind() != FormulaKind::And || c.body().body().lhs().kind() != FormulaKind::Dep) {
      fail("conclusion must have the shape forall y. exists x. (dep(z..., x) & A)");
      return;
    }
    // The determining variables may be listed in any order.
    const auto& got = c.body().body().lhs().terms();
    const auto& ref = want.body().body().lhs().terms();
    if (got.size() != ref.size() || got.empty() || !(got.back() == Term::variable(c.body().symbol()))) {
      fail("dependence atom must list the free variables of A other than x and y, then x");
      return;
    }
    std::multiset<Term> got_z(got.begin(), got.end() - 1), ref_z(ref.begin(), ref.end() - 1);
    if (got_z != ref_z) {
      fail("dependence atom must list the free variables of A other than x and y, then x");
      return;
    }
    Formula canonical = Formula::forall(
        c.symbol(), Formula::exists(c.body().symbol(),
                                    Formula::conj(Formula::dep(ref), c.body().body().rhs())));
    expect_equal(canonical, want, "conclusion differs from the dependence introduction");
  }

  void check_identity() {
    const Formula& c = st_.formula;
    switch (st_.premises.size()) {
      case 0:
        if (c.kind() != FormulaKind::Equals || !(c.terms()[0] == c.terms()[1])) fail("expected t = t");
        return;
      case 1: {
        const Formula& q = premise(0);
        if (q.kind() != FormulaKind::Equals || c.kind() != FormulaKind::Equals ||
            !(q.terms()[0] == c.terms()[1]) || !(q.terms()[1] == c.terms()[0]))
          fail("expected symmetry: from s = t conclude t = s");
        return;
      }
      case 2: {
        const Formula& e = premise(0);
        const Formula& q = premise(1);
        if (e.kind() == FormulaKind::Equals && q.kind() == FormulaKind::Equals &&
            c.kind() == FormulaKind::Equals && e.terms()[1] == q.terms()[0] &&
            c.terms()[0] == e.terms()[0] && c.terms()[1] == q.terms()[1])
          return;  // transitivity
        if (e.kind() != FormulaKind::Equals) {
          fail("first premise of a congruence step must be an equation");
          return;
        }
        if (!q.is_first_order() || !c.is_first_order()) {
          fail("congruence applies to first-order formulas only");
          return;
        }
        VariableSet bound;
        bool captured = false;
        if (!congruent(q, c, e.terms()[0], e.terms()[1], bound, captured)) {
          fail("conclusion does not follow by replacing equals for equals");
          return;
        }
        if (captured) fail("replaced terms would have variables bound by a quantifier");
        return;
      }
      default:
        fail("expects at most 2 premises");
    }
  }

  const Proof& p_;
  const Analysis& a_;
  std::size_t k_;
  const ProofStep& st_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> check_step(const Proof& p, std::size_t k) {
  if (k >= p.steps.size()) throw Error("no step at position " + std::to_string(k));
  Analysis a = analyze(p);
  return StepChecker(p, a, k).run();
}

CheckReport check_proof(const Proof& p, const std::vector<Formula>& allowed_open) {
  CheckReport report;
  if (p.steps.empty()) {
    report.failures.push_back({0, Diagnostic{Severity::Error, "empty proof", 0, 0, 0}});
    return report;
  }
  Analysis a = analyze(p);
  for (std::size_t k = 0; k < p.steps.size(); ++k)
    for (auto& d : StepChecker(p, a, k).run()) report.failures.push_back({p.steps[k].label, std::move(d)});

  for (auto d : a.deps.back()) {
    const ProofStep& st = p.steps[a.position.at(d)];
    bool allowed = std::any_of(allowed_open.begin(), allowed_open.end(),
                               [&](const Formula& h) { return alpha_equal(h, st.formula); });
    if (!allowed) {
      std::size_t width = std::to_string(st.label).size();
      report.failures.push_back(
          {st.label, Diagnostic{Severity::Error,
                                "step " + std::to_string(st.label) +
                                    " (assume): assumption is still open and is not a hypothesis",
                                st.line, 1, 1 + width}});
    }
  }
  return report;
}

Formula apply_rule7(const Formula& premise) {
  if (premise.kind() != FormulaKind::Exists || premise.body().kind() != FormulaKind::Forall)
    throw SchemaMismatch("dependence introduction needs a premise exists x. forall y. A");
  const std::string& x = premise.symbol();
  const std::string& y = premise.body().symbol();
  const Formula& a = premise.body().body();
  std::vector<Term> args;
  for (const auto& v : free_vars_in_order(a))
    if (v != x && v != y) args.push_back(Term::variable(v));
  args.push_back(Term::variable(x));
  return Formula::forall(y, Formula::exists(x, Formula::conj(Formula::dep(std::move(args)), a)));
}

Formula apply_rule8(const Formula& premise) {
  std::vector<std::string> xs, ys;
  Formula body = premise;
  while (body.kind() == FormulaKind::Forall) {
    xs.push_back(body.symbol());
    body = body.body();
  }
  while (body.kind() == FormulaKind::Exists) {
    ys.push_back(body.symbol());
    body = body.body();
  }
  if (xs.empty()) throw SchemaMismatch("dependence elimination needs a leading universal block");

  VariableSet quantified;
  for (const auto& v : xs)
    if (!quantified.insert(v).second) throw SchemaMismatch("variable " + v + " is quantified twice");
  for (const auto& v : ys)
    if (!quantified.insert(v).second) throw SchemaMismatch("variable " + v + " is quantified twice");

  std::map<std::string, std::vector<std::string>> own;  // existential -> its determiners
  while (body.kind() == FormulaKind::And && body.lhs().kind() == FormulaKind::Dep) {
    const auto& ts = body.lhs().terms();
    std::vector<std::string> names;
    for (const auto& t : ts) {
      if (!t.is_variable()) throw SchemaMismatch("dependence atoms must range over variables");
      names.push_back(t.name());
    }
    if (names.empty()) throw SchemaMismatch("dependence atom dep() determines no variable");
    std::string y = names.back();
    names.pop_back();
    auto yi = std::find(ys.begin(), ys.end(), y);
    if (yi == ys.end()) throw SchemaMismatch("dependence atom must determine an existential variable");
    if (own.count(y)) throw SchemaMismatch("two dependence atoms determine " + y);
    VariableSet allowed(xs.begin(), xs.end());
    allowed.insert(ys.begin(), yi);
    for (const auto& w : names)
      if (!allowed.count(w))
        throw SchemaMismatch("dependence atom for " + y + " may only mention universals and earlier existentials");
    own.emplace(y, std::move(names));
    body = body.rhs();
  }
  if (!body.is_first_order() || !body.is_quantifier_free())
    throw SchemaMismatch("the remaining matrix must be quantifier-free and first-order");

  VariableSet avoid = reserved_names(premise);
  std::map<std::string, Term> rename;
  std::vector<std::string> xs1, ys1;
  for (const auto* block : {&xs, &ys}) {
    for (const auto& v : *block) {
      std::string fresh = fresh_variable(avoid, v);
      avoid.insert(fresh);
      rename.emplace(v, Term::variable(fresh));
      (block == &xs ? xs1 : ys1).push_back(fresh);
    }
  }
  auto renamed = [&](const std::string& v) { return rename.at(v); };

  std::vector<Formula> inner{substitute_all(body, rename)};
  for (const auto& y : ys) {
    std::vector<std::string> w = own.count(y) ? own.at(y) : xs;
    std::vector<Term> w0 = as_terms(w), w1;
    for (const auto& v : w) w1.push_back(renamed(v));
    inner.push_back(implies(tuple_equals(w0, w1), Formula::equals(Term::variable(y), renamed(y))));
  }
  Formula round1 = forall_all(xs1, exists_all(ys1, conj_all(inner)));
  return forall_all(xs, exists_all(ys, Formula::conj(body, round1)));
}

}  // namespace deplogic
