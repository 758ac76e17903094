#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "deplogic/syntax.hpp"

namespace deplogic {

using Element = int;
using Tuple = std::vector<Element>;

/// A finite structure over the domain {0, ..., size-1}. Every function table
/// is total and every relation is an explicit tuple set.
class Model {
 public:
  struct Relation {
    int arity = 0;
    std::vector<char> table;  // mixed-radix index over the domain
  };
  struct Function {
    int arity = 0;
    std::vector<Element> table;
  };

  explicit Model(int size);

  int size() const { return size_; }
  const Vocabulary& vocabulary() const { return voc_; }

  void set_constant(const std::string& name, Element value);
  void set_relation(const std::string& name, int arity, const std::set<Tuple>& tuples);
  // `table[index(args)]` where index is the mixed-radix encoding of args.
  void set_function(const std::string& name, int arity, std::vector<Element> table);

  Element constant(const std::string& name) const;
  bool holds(const std::string& relation, const Tuple& args) const;
  Element apply(const std::string& function, const Tuple& args) const;

  const Relation& relation_table(const std::string& name) const;
  const Function& function_table(const std::string& name) const;
  std::set<Tuple> relation_tuples(const std::string& name) const;

  std::size_t index_of(const Tuple& args) const;
  std::size_t table_size(int arity) const;

 private:
  void check_element(Element e) const;

  int size_;
  Vocabulary voc_;
  std::map<std::string, Element> constants_;
  std::map<std::string, Relation> relations_;
  std::map<std::string, Function> functions_;
};

using Assignment = std::map<std::string, Element>;

/// A set of assignments sharing one variable domain. Rows store values in the
/// (sorted) order of `domain()`.
class Team {
 public:
  Team() = default;
  explicit Team(VariableSet domain);

  // {∅}: the team holding only the empty assignment.
  static Team unit();

  const std::vector<std::string>& domain() const { return domain_; }
  VariableSet domain_set() const { return {domain_.begin(), domain_.end()}; }
  const std::set<Tuple>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  void insert(const Assignment& s);
  void insert_row(Tuple row);
  std::vector<Assignment> assignments() const;
  Assignment assignment(const Tuple& row) const;

  bool operator==(const Team&) const = default;

 private:
  std::vector<std::string> domain_;
  std::set<Tuple> rows_;
};

/// Cap on enumerated witnesses (disjunction splits and supplement functions).
struct SearchBudget {
  std::uint64_t max_choice_points = 10'000'000;
};

/// Knobs for the team-semantics search. All shortcuts are sound consequences
/// of flatness, locality and downward closure; turning them off gives the
/// literal clause-by-clause search, which tests use as an oracle.
struct EvalOptions {
  SearchBudget budget;
  bool flat_shortcut = true;       // first-order subformulas: check row by row
  bool singleton_pruning = true;   // restrict witness candidates by singleton teams
  bool locality_projection = true; // restrict teams to free variables first
  bool block_search = true;        // ∃y⃗(dep atoms ∧ first-order): backtrack row by row

  static EvalOptions naive(SearchBudget b = {}) { return {b, false, false, false, false}; }
};

Element eval_term(const Model& m, const Assignment& s, const Term& t);
bool fo_satisfies(const Model& m, const Assignment& s, const Formula& phi);
bool dep_holds(const Model& m, const Team& team, const std::vector<Term>& terms);

Team duplicate(const Team& team, const Model& m, const std::string& x);
Team supplement(const Team& team, const std::map<Assignment, Element>& f, const std::string& x);
Team restrict(const Team& team, const VariableSet& vars);

bool satisfies(const Model& m, const Team& team, const Formula& phi, const EvalOptions& opts = {});
bool sentence_true(const Model& m, const Formula& phi, const EvalOptions& opts = {});

/// Calls `visit` with every model of the given size over `voc`, in a fixed
/// order. Stops early when `visit` returns false.
void for_each_model(const Vocabulary& voc, int size, const std::function<bool(const Model&)>& visit);

/// Calls `visit` with every team (every subset of all assignments) over
/// `vars`. Stops early when `visit` returns false.
void for_each_team(const VariableSet& vars, int size, const std::function<bool(const Team&)>& visit);

struct Counterexample {
  Model model;
  Team team;
  bool lhs_holds;
};

struct EquivResult {
  bool equivalent = true;
  std::optional<Counterexample> counterexample;
  std::uint64_t instances_checked = 0;
};

/// Searches all models of size 1..max_size over the symbols of phi and psi,
/// and all teams over Fr(phi) ∪ Fr(psi), for a team on which exactly one of
/// the two holds. Each (model, team) instance counts one choice point against
/// the budget in addition to the evaluation itself.
EquivResult equiv_on_small_models(const Formula& phi, const Formula& psi, int max_size,
                                  SearchBudget budget = {});

}  // namespace deplogic
