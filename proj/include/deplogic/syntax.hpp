#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "deplogic/errors.hpp"

namespace deplogic {

using VariableSet = std::set<std::string>;

enum class SymbolKind { None, Relation, Function, Constant };

/// Relation, function and constant symbols with their arities. The three
/// name spaces are kept disjoint; declaring a name twice throws.
class Vocabulary {
 public:
  void add_relation(const std::string& name, int arity);
  void add_function(const std::string& name, int arity);
  void add_constant(const std::string& name);

  SymbolKind kind_of(const std::string& name) const;
  bool declares(const std::string& name) const { return kind_of(name) != SymbolKind::None; }
  int arity_of(const std::string& name) const;

  const std::map<std::string, int>& relations() const { return relations_; }
  const std::map<std::string, int>& functions() const { return functions_; }
  const std::set<std::string>& constants() const { return constants_; }

  // Adds every symbol of `other`; arities must agree on shared names.
  void merge(const Vocabulary& other);

  bool operator==(const Vocabulary&) const = default;

 private:
  void check_fresh(const std::string& name) const;

  std::map<std::string, int> relations_;
  std::map<std::string, int> functions_;
  std::set<std::string> constants_;
};

class Term {
 public:
  enum class Kind { Variable, Constant, Apply };

  static Term variable(std::string name);
  static Term constant(std::string name);
  static Term apply(std::string function, std::vector<Term> args);

  Kind kind() const { return kind_; }
  bool is_variable() const { return kind_ == Kind::Variable; }
  const std::string& name() const { return name_; }
  const std::vector<Term>& args() const { return args_; }

  bool operator==(const Term& other) const;
  std::strong_ordering operator<=>(const Term& other) const;

 private:
  Term(Kind kind, std::string name, std::vector<Term> args)
      : kind_(kind), name_(std::move(name)), args_(std::move(args)) {}

  Kind kind_;
  std::string name_;
  std::vector<Term> args_;
};

/// Var(t), collected into `out`.
void term_variables(const Term& t, VariableSet& out);
VariableSet term_variables(const Term& t);

enum class FormulaKind { Relation, Equals, Dep, Not, And, Or, Exists, Forall };

/// Immutable dependence-logic formula. Copies share structure.
///
/// Negation may only wrap first-order formulas (no dependence atom anywhere
/// below it); `negation()` throws NegationScopeError otherwise, so every
/// Formula value satisfies that invariant.
class Formula {
 public:
  static Formula relation(std::string name, std::vector<Term> args);
  static Formula equals(Term lhs, Term rhs);
  static Formula dep(std::vector<Term> args);
  static Formula negation(Formula body);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);

  FormulaKind kind() const;
  // Relation name for Relation atoms, bound variable for quantifiers.
  const std::string& symbol() const;
  // Arguments of Relation/Dep atoms, or {lhs, rhs} of Equals.
  const std::vector<Term>& terms() const;
  const Formula& lhs() const;
  const Formula& rhs() const;
  // Operand of Not and scope of a quantifier.
  const Formula& body() const;

  bool is_atom() const;
  bool is_quantifier() const;
  bool is_first_order() const;
  bool is_quantifier_free() const;
  std::size_t depth() const;

  // Structural identity (bound variable names included).
  bool operator==(const Formula& other) const;
  bool same_node(const Formula& other) const { return node_ == other.node_; }
  const void* node_id() const { return node_.get(); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  FormulaKind kind;
  std::string symbol;
  std::vector<Term> terms;
  std::vector<Formula> children;
  bool first_order;
  bool quantifier_free;
  std::size_t depth;
};

VariableSet free_vars(const Formula& phi);
inline bool is_sentence(const Formula& phi) { return free_vars(phi).empty(); }
inline bool is_first_order(const Formula& phi) { return phi.is_first_order(); }

// Every variable name occurring in phi, bound or free.
VariableSet all_variables(const Formula& phi);

// Free variables in order of first occurrence, left to right.
std::vector<std::string> free_vars_in_order(const Formula& phi);

// The relation/function/constant symbols phi uses, with the arities it uses
// them at. Throws VocabularyError if one name is used inconsistently.
Vocabulary symbols_of(const Formula& phi);

// Throws VocabularyError if phi uses a symbol not in voc, at the wrong arity,
// or binds a variable whose name is a declared symbol.
void check_against(const Vocabulary& voc, const Formula& phi);
void check_against(const Vocabulary& voc, const Term& t);

/// phi(t/x). Refuses with CaptureError when a variable of t would end up
/// bound; it never renames.
Formula substitute(const Formula& phi, const Term& t, const std::string& x);

/// Simultaneous substitution of free variables, same capture discipline.
Formula substitute_all(const Formula& phi, const std::map<std::string, Term>& subst);
Term substitute_all(const Term& t, const std::map<std::string, Term>& subst);

/// `hint` if unused, else the first of hint_1, hint_2, ... not in avoid.
std::string fresh_variable(const VariableSet& avoid, const std::string& hint);

bool alpha_equal(const Formula& phi, const Formula& psi);

// Names a fresh variable must not take: every symbol phi uses and every
// variable in it.
VariableSet reserved_names(const Formula& phi);

// Quantifier blocks; the first variable is outermost.
Formula forall_all(const std::vector<std::string>& vars, Formula body);
Formula exists_all(const std::vector<std::string>& vars, Formula body);

std::vector<Term> as_terms(const std::vector<std::string>& vars);

// Right-nested conjunction c0 & (c1 & (... & cn)). Requires a non-empty list.
Formula conj_all(const std::vector<Formula>& conjuncts);

// Vector equality v0 = w0 & ... as a conjunction; empty vectors yield nullopt.
std::optional<Formula> tuple_equals(const std::vector<Term>& lhs, const std::vector<Term>& rhs);

// ~antecedent | consequent, or just consequent when there is no antecedent.
Formula implies(const std::optional<Formula>& antecedent, Formula consequent);

}  // namespace deplogic
