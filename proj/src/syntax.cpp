#include "deplogic/syntax.hpp"

#include <algorithm>
#include <sstream>

namespace deplogic {

std::string Diagnostic::str() const {
  std::ostringstream out;
  out << line << ':' << column_begin << ": " << (severity == Severity::Error ? "error" : "warning")
      << ": " << message;
  return out.str();
}

SyntaxError::SyntaxError(Diagnostic d, Category category)
    : Error(d.str()), diag_(std::move(d)), category_(category) {}

// ---------------------------------------------------------------- Vocabulary

void Vocabulary::check_fresh(const std::string& name) const {
  if (declares(name)) throw VocabularyError("duplicate symbol '" + name + "'");
}

void Vocabulary::add_relation(const std::string& name, int arity) {
  if (arity < 0) throw VocabularyError("negative arity for relation '" + name + "'");
  check_fresh(name);
  relations_.emplace(name, arity);
}

void Vocabulary::add_function(const std::string& name, int arity) {
  if (arity < 1) throw VocabularyError("function '" + name + "' needs a positive arity");
  check_fresh(name);
  functions_.emplace(name, arity);
}

void Vocabulary::add_constant(const std::string& name) {
  check_fresh(name);
  constants_.insert(name);
}

SymbolKind Vocabulary::kind_of(const std::string& name) const {
  if (relations_.count(name)) return SymbolKind::Relation;
  if (functions_.count(name)) return SymbolKind::Function;
  if (constants_.count(name)) return SymbolKind::Constant;
  return SymbolKind::None;
}

int Vocabulary::arity_of(const std::string& name) const {
  if (auto it = relations_.find(name); it != relations_.end()) return it->second;
  if (auto it = functions_.find(name); it != functions_.end()) return it->second;
  if (constants_.count(name)) return 0;
  throw VocabularyError("unknown symbol '" + name + "'");
}

void Vocabulary::merge(const Vocabulary& other) {
  auto clash = [](const std::string& name) {
    return VocabularyError("symbol '" + name + "' used with conflicting kinds or arities");
  };
  for (const auto& [name, arity] : other.relations_) {
    if (kind_of(name) == SymbolKind::None) {
      relations_.emplace(name, arity);
    } else if (kind_of(name) != SymbolKind::Relation || relations_.at(name) != arity) {
      throw clash(name);
    }
  }
  for (const auto& [name, arity] : other.functions_) {
    if (kind_of(name) == SymbolKind::None) {
      functions_.emplace(name, arity);
    } else if (kind_of(name) != SymbolKind::Function || functions_.at(name) != arity) {
      throw clash(name);
    }
  }
  for (const auto& name : other.constants_) {
    if (kind_of(name) == SymbolKind::None) {
      constants_.insert(name);
    } else if (kind_of(name) != SymbolKind::Constant) {
      throw clash(name);
    }
  }
}

// ---------------------------------------------------------------------- Term

Term Term::variable(std::string name) { return Term(Kind::Variable, std::move(name), {}); }
Term Term::constant(std::string name) { return Term(Kind::Constant, std::move(name), {}); }
Term Term::apply(std::string function, std::vector<Term> args) {
  return Term(Kind::Apply, std::move(function), std::move(args));
}

bool Term::operator==(const Term& other) const {
  return kind_ == other.kind_ && name_ == other.name_ && args_ == other.args_;
}

std::strong_ordering Term::operator<=>(const Term& other) const {
  if (auto c = kind_ <=> other.kind_; c != 0) return c;
  if (auto c = name_ <=> other.name_; c != 0) return c;
  return std::lexicographical_compare_three_way(args_.begin(), args_.end(), other.args_.begin(),
                                                other.args_.end());
}

void term_variables(const Term& t, VariableSet& out) {
  if (t.is_variable()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) term_variables(a, out);
}

VariableSet term_variables(const Term& t) {
  VariableSet out;
  term_variables(t, out);
  return out;
}

// ------------------------------------------------------------------- Formula

namespace {

std::size_t max_child_depth(const std::vector<Formula>& children) {
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c.depth());
  return d;
}

}  // namespace

Formula Formula::relation(std::string name, std::vector<Term> args) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Relation, std::move(name), std::move(args), {}, true, true, 0}));
}

Formula Formula::equals(Term lhs, Term rhs) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Equals, "", {std::move(lhs), std::move(rhs)}, {}, true, true, 0}));
}

Formula Formula::dep(std::vector<Term> args) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Dep, "", std::move(args), {}, false, true, 0}));
}

Formula Formula::negation(Formula body) {
  if (!body.is_first_order()) {
    throw NegationScopeError("negation may only be applied to first-order formulas");
  }
  bool qf = body.is_quantifier_free();
  std::size_t d = body.depth() + 1;
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Not, "", {}, {std::move(body)}, true, qf, d}));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  bool fo = lhs.is_first_order() && rhs.is_first_order();
  bool qf = lhs.is_quantifier_free() && rhs.is_quantifier_free();
  std::vector<Formula> children{std::move(lhs), std::move(rhs)};
  std::size_t d = max_child_depth(children) + 1;
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::And, "", {}, std::move(children), fo, qf, d}));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
  bool fo = lhs.is_first_order() && rhs.is_first_order();
  bool qf = lhs.is_quantifier_free() && rhs.is_quantifier_free();
  std::vector<Formula> children{std::move(lhs), std::move(rhs)};
  std::size_t d = max_child_depth(children) + 1;
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Or, "", {}, std::move(children), fo, qf, d}));
}

Formula Formula::exists(std::string var, Formula body) {
  bool fo = body.is_first_order();
  std::size_t d = body.depth() + 1;
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Exists, std::move(var), {}, {std::move(body)}, fo, false, d}));
}

Formula Formula::forall(std::string var, Formula body) {
  bool fo = body.is_first_order();
  std::size_t d = body.depth() + 1;
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Forall, std::move(var), {}, {std::move(body)}, fo, false, d}));
}

FormulaKind Formula::kind() const { return node_->kind; }
const std::string& Formula::symbol() const { return node_->symbol; }
const std::vector<Term>& Formula::terms() const { return node_->terms; }
const Formula& Formula::lhs() const { return node_->children.at(0); }
const Formula& Formula::rhs() const { return node_->children.at(1); }
const Formula& Formula::body() const { return node_->children.at(0); }
bool Formula::is_first_order() const { return node_->first_order; }
bool Formula::is_quantifier_free() const { return node_->quantifier_free; }
std::size_t Formula::depth() const { return node_->depth; }

bool Formula::is_atom() const {
  auto k = kind();
  return k == FormulaKind::Relation || k == FormulaKind::Equals || k == FormulaKind::Dep;
}

bool Formula::is_quantifier() const {
  return kind() == FormulaKind::Exists || kind() == FormulaKind::Forall;
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  return node_->kind == other.node_->kind && node_->symbol == other.node_->symbol &&
         node_->terms == other.node_->terms && node_->children == other.node_->children;
}

// ------------------------------------------------------------ free variables

namespace {

void collect_free(const Formula& phi, VariableSet& bound, VariableSet& out) {
  switch (phi.kind()) {
    case FormulaKind::Relation:
    case FormulaKind::Equals:
    case FormulaKind::Dep:
      for (const auto& t : phi.terms()) {
        VariableSet vs;
        term_variables(t, vs);
        for (const auto& v : vs)
          if (!bound.count(v)) out.insert(v);
      }
      return;
    case FormulaKind::Not:
      collect_free(phi.body(), bound, out);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
      collect_free(phi.lhs(), bound, out);
      collect_free(phi.rhs(), bound, out);
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      bool inserted = bound.insert(phi.symbol()).second;
      collect_free(phi.body(), bound, out);
      if (inserted) bound.erase(phi.symbol());
      return;
    }
  }
}

void collect_all(const Formula& phi, VariableSet& out) {
  if (phi.is_atom()) {
    for (const auto& t : phi.terms()) term_variables(t, out);
    return;
  }
  if (phi.is_quantifier()) out.insert(phi.symbol());
  if (phi.kind() == FormulaKind::And || phi.kind() == FormulaKind::Or) {
    collect_all(phi.lhs(), out);
    collect_all(phi.rhs(), out);
  } else {
    collect_all(phi.body(), out);
  }
}

}  // namespace

VariableSet free_vars(const Formula& phi) {
  VariableSet bound, out;
  collect_free(phi, bound, out);
  return out;
}

VariableSet all_variables(const Formula& phi) {
  VariableSet out;
  collect_all(phi, out);
  return out;
}

// ------------------------------------------------------------------ symbols

namespace {

void term_symbols(const Term& t, Vocabulary& voc) {
  if (t.kind() == Term::Kind::Constant) {
    Vocabulary one;
    one.add_constant(t.name());
    voc.merge(one);
  } else if (t.kind() == Term::Kind::Apply) {
    Vocabulary one;
    one.add_function(t.name(), static_cast<int>(t.args().size()));
    voc.merge(one);
    for (const auto& a : t.args()) term_symbols(a, voc);
  }
}

void formula_symbols(const Formula& phi, Vocabulary& voc) {
  if (phi.kind() == FormulaKind::Relation) {
    Vocabulary one;
    one.add_relation(phi.symbol(), static_cast<int>(phi.terms().size()));
    voc.merge(one);
  }
  if (phi.is_atom()) {
    for (const auto& t : phi.terms()) term_symbols(t, voc);
  } else if (phi.kind() == FormulaKind::And || phi.kind() == FormulaKind::Or) {
    formula_symbols(phi.lhs(), voc);
    formula_symbols(phi.rhs(), voc);
  } else {
    formula_symbols(phi.body(), voc);
  }
}

}  // namespace

Vocabulary symbols_of(const Formula& phi) {
  Vocabulary voc;
  formula_symbols(phi, voc);
  return voc;
}

void check_against(const Vocabulary& voc, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Variable:
      if (voc.declares(t.name()))
        throw VocabularyError("variable '" + t.name() + "' collides with a declared symbol");
      return;
    case Term::Kind::Constant:
      if (voc.kind_of(t.name()) != SymbolKind::Constant)
        throw VocabularyError("unknown constant '" + t.name() + "'");
      return;
    case Term::Kind::Apply:
      if (voc.kind_of(t.name()) != SymbolKind::Function)
        throw VocabularyError("unknown function '" + t.name() + "'");
      if (voc.arity_of(t.name()) != static_cast<int>(t.args().size()))
        throw VocabularyError("function '" + t.name() + "' expects " +
                              std::to_string(voc.arity_of(t.name())) + " arguments");
      for (const auto& a : t.args()) check_against(voc, a);
      return;
  }
}

void check_against(const Vocabulary& voc, const Formula& phi) {
  switch (phi.kind()) {
    case FormulaKind::Relation:
      if (voc.kind_of(phi.symbol()) != SymbolKind::Relation)
        throw VocabularyError("unknown relation '" + phi.symbol() + "'");
      if (voc.arity_of(phi.symbol()) != static_cast<int>(phi.terms().size()))
        throw VocabularyError("relation '" + phi.symbol() + "' expects " +
                              std::to_string(voc.arity_of(phi.symbol())) + " arguments");
      [[fallthrough]];
    case FormulaKind::Equals:
    case FormulaKind::Dep:
      for (const auto& t : phi.terms()) check_against(voc, t);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
      check_against(voc, phi.lhs());
      check_against(voc, phi.rhs());
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      if (voc.declares(phi.symbol()))
        throw VocabularyError("bound variable '" + phi.symbol() + "' collides with a declared symbol");
      [[fallthrough]];
    case FormulaKind::Not:
      check_against(voc, phi.body());
      return;
  }
}

// -------------------------------------------------------------- substitution

Term substitute_all(const Term& t, const std::map<std::string, Term>& subst) {
  switch (t.kind()) {
    case Term::Kind::Variable: {
      auto it = subst.find(t.name());
      return it == subst.end() ? t : it->second;
    }
    case Term::Kind::Constant:
      return t;
    case Term::Kind::Apply: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(substitute_all(a, subst));
      return Term::apply(t.name(), std::move(args));
    }
  }
  return t;
}

namespace {

std::vector<Term> substitute_terms(const std::vector<Term>& ts,
                                   const std::map<std::string, Term>& subst) {
  std::vector<Term> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(substitute_all(t, subst));
  return out;
}

Formula rebuild_atom(const Formula& phi, std::vector<Term> terms) {
  switch (phi.kind()) {
    case FormulaKind::Relation:
      return Formula::relation(phi.symbol(), std::move(terms));
    case FormulaKind::Equals:
      return Formula::equals(std::move(terms[0]), std::move(terms[1]));
    default:
      return Formula::dep(std::move(terms));
  }
}

}  // namespace

Formula substitute_all(const Formula& phi, const std::map<std::string, Term>& subst) {
  if (subst.empty()) return phi;
  switch (phi.kind()) {
    case FormulaKind::Relation:
    case FormulaKind::Equals:
    case FormulaKind::Dep:
      return rebuild_atom(phi, substitute_terms(phi.terms(), subst));
    case FormulaKind::Not:
      return Formula::negation(substitute_all(phi.body(), subst));
    case FormulaKind::And:
      return Formula::conj(substitute_all(phi.lhs(), subst), substitute_all(phi.rhs(), subst));
    case FormulaKind::Or:
      return Formula::disj(substitute_all(phi.lhs(), subst), substitute_all(phi.rhs(), subst));
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      const std::string& y = phi.symbol();
      std::map<std::string, Term> inner = subst;
      inner.erase(y);
      // Only entries whose variable actually occurs free below can capture.
      VariableSet body_free = free_vars(phi.body());
      for (const auto& [x, t] : inner) {
        if (!body_free.count(x)) continue;
        if (term_variables(t).count(y)) {
          throw CaptureError("substituting for '" + x + "' would capture variable '" + y + "'");
        }
      }
      Formula body = substitute_all(phi.body(), inner);
      return phi.kind() == FormulaKind::Exists ? Formula::exists(y, std::move(body))
                                               : Formula::forall(y, std::move(body));
    }
  }
  return phi;
}

Formula substitute(const Formula& phi, const Term& t, const std::string& x) {
  return substitute_all(phi, {{x, t}});
}

std::string fresh_variable(const VariableSet& avoid, const std::string& hint) {
  if (!avoid.count(hint)) return hint;
  for (std::size_t i = 1;; ++i) {
    std::string candidate = hint + "_" + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

// ------------------------------------------------------------------- alpha

namespace {

using Scope = std::vector<std::string>;

// Position of the innermost binder of v, counted from the outside; -1 if free.
long binder_index(const Scope& scope, const std::string& v) {
  for (std::size_t i = scope.size(); i-- > 0;)
    if (scope[i] == v) return static_cast<long>(i);
  return -1;
}

bool alpha_term(const Term& a, const Scope& sa, const Term& b, const Scope& sb) {
  if (a.kind() != b.kind()) return false;
  if (a.is_variable()) {
    long ia = binder_index(sa, a.name());
    long ib = binder_index(sb, b.name());
    if (ia != ib) return false;
    return ia >= 0 || a.name() == b.name();
  }
  if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!alpha_term(a.args()[i], sa, b.args()[i], sb)) return false;
  return true;
}

bool alpha(const Formula& a, Scope& sa, const Formula& b, Scope& sb) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FormulaKind::Relation:
      if (a.symbol() != b.symbol()) return false;
      [[fallthrough]];
    case FormulaKind::Equals:
    case FormulaKind::Dep:
      if (a.terms().size() != b.terms().size()) return false;
      for (std::size_t i = 0; i < a.terms().size(); ++i)
        if (!alpha_term(a.terms()[i], sa, b.terms()[i], sb)) return false;
      return true;
    case FormulaKind::Not:
      return alpha(a.body(), sa, b.body(), sb);
    case FormulaKind::And:
    case FormulaKind::Or:
      return alpha(a.lhs(), sa, b.lhs(), sb) && alpha(a.rhs(), sa, b.rhs(), sb);
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      sa.push_back(a.symbol());
      sb.push_back(b.symbol());
      bool ok = alpha(a.body(), sa, b.body(), sb);
      sa.pop_back();
      sb.pop_back();
      return ok;
    }
  }
  return false;
}

}  // namespace

bool alpha_equal(const Formula& phi, const Formula& psi) {
  Scope sa, sb;
  return alpha(phi, sa, psi, sb);
}

// ----------------------------------------------------------------- builders

namespace {

void ordered_free(const Formula& phi, std::vector<std::string>& bound, std::vector<std::string>& out);

void ordered_term_vars(const Term& t, const std::vector<std::string>& bound, std::vector<std::string>& out) {
  if (t.is_variable()) {
    if (std::find(bound.begin(), bound.end(), t.name()) == bound.end() &&
        std::find(out.begin(), out.end(), t.name()) == out.end())
      out.push_back(t.name());
    return;
  }
  for (const auto& a : t.args()) ordered_term_vars(a, bound, out);
}

void ordered_free(const Formula& phi, std::vector<std::string>& bound, std::vector<std::string>& out) {
  switch (phi.kind()) {
    case FormulaKind::Relation:
    case FormulaKind::Equals:
    case FormulaKind::Dep:
      for (const auto& t : phi.terms()) ordered_term_vars(t, bound, out);
      return;
    case FormulaKind::Not:
      ordered_free(phi.body(), bound, out);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
      ordered_free(phi.lhs(), bound, out);
      ordered_free(phi.rhs(), bound, out);
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      bound.push_back(phi.symbol());
      ordered_free(phi.body(), bound, out);
      bound.pop_back();
      return;
  }
}

}  // namespace

std::vector<std::string> free_vars_in_order(const Formula& phi) {
  std::vector<std::string> bound, out;
  ordered_free(phi, bound, out);
  return out;
}

VariableSet reserved_names(const Formula& phi) {
  VariableSet out = all_variables(phi);
  Vocabulary voc = symbols_of(phi);
  for (const auto& [r, n] : voc.relations()) out.insert(r);
  for (const auto& [f, n] : voc.functions()) out.insert(f);
  out.insert(voc.constants().begin(), voc.constants().end());
  return out;
}

std::vector<Term> as_terms(const std::vector<std::string>& vars) {
  std::vector<Term> out;
  out.reserve(vars.size());
  for (const auto& v : vars) out.push_back(Term::variable(v));
  return out;
}

Formula forall_all(const std::vector<std::string>& vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::forall(*it, body);
  return body;
}

Formula exists_all(const std::vector<std::string>& vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::exists(*it, body);
  return body;
}


Formula conj_all(const std::vector<Formula>& conjuncts) {
  if (conjuncts.empty()) throw Error("conj_all: empty conjunction");
  Formula acc = conjuncts.back();
  for (std::size_t i = conjuncts.size() - 1; i-- > 0;) acc = Formula::conj(conjuncts[i], acc);
  return acc;
}

std::optional<Formula> tuple_equals(const std::vector<Term>& lhs, const std::vector<Term>& rhs) {
  if (lhs.size() != rhs.size()) throw Error("tuple_equals: length mismatch");
  if (lhs.empty()) return std::nullopt;
  std::vector<Formula> eqs;
  for (std::size_t i = 0; i < lhs.size(); ++i) eqs.push_back(Formula::equals(lhs[i], rhs[i]));
  return conj_all(eqs);
}

Formula implies(const std::optional<Formula>& antecedent, Formula consequent) {
  if (!antecedent) return consequent;
  return Formula::disj(Formula::negation(*antecedent), std::move(consequent));
}

}  // namespace deplogic
