#pragma once

// Randomized checks of the team-semantics invariants. Each runner keeps
// drawing instances until `target` of them have been checked.

#include <functional>
#include <sstream>
#include <string>

#include "deplogic/io.hpp"
#include "deplogic/semantics.hpp"
#include "generators.hpp"

namespace deplogic::testing {

struct PropertyOutcome {
  std::string name;
  int instances = 0;
  int violations = 0;
  int skipped = 0;  // budget overruns and vacuous draws
  std::string first_violation;

  bool passed(int target) const { return violations == 0 && instances >= target; }
};

inline const VariableSet& property_domain() {
  static const VariableSet dom{"w", "x", "y", "z"};
  return dom;
}

inline EvalOptions property_options() {
  EvalOptions o;
  o.budget.max_choice_points = 1'000'000;
  return o;
}

inline std::string describe(const Formula& phi, const Model& m, const Team& t) {
  std::ostringstream out;
  out << "formula: " << print_formula(phi) << "\n" << print_model(m) << print_team(t);
  return out.str();
}

// `check` returns nullopt for a vacuous draw, else whether the property held.
using InstanceCheck = std::function<std::optional<bool>(Gen&, std::string&)>;

inline PropertyOutcome run_property(const std::string& name, unsigned seed, int target, const InstanceCheck& check) {
  PropertyOutcome out{name};
  Gen gen(seed);
  for (int attempt = 0; out.instances < target && attempt < target * 40; ++attempt) {
    std::string where;
    std::optional<bool> ok;
    try {
      ok = check(gen, where);
    } catch (const BudgetExceeded&) {
      ok.reset();
    }
    if (!ok) {
      ++out.skipped;
      continue;
    }
    ++out.instances;
    if (!*ok && out.violations++ == 0) out.first_violation = where;
  }
  return out;
}

inline Model small_model(Gen& g) { return g.model(1 + g.below(3)); }

inline PropertyOutcome downward_closure(unsigned seed, int target) {
  return run_property("downward closure", seed, target, [](Gen& g, std::string& where) -> std::optional<bool> {
    Formula phi = g.formula(4);
    Model m = small_model(g);
    Team x = g.team(property_domain(), m, 4);
    if (x.empty() || !satisfies(m, x, phi, property_options())) return std::nullopt;
    std::vector<Tuple> rows(x.rows().begin(), x.rows().end());
    for (std::size_t mask = 0; mask < (std::size_t{1} << rows.size()); ++mask) {
      Team y(property_domain());
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (mask >> i & 1) y.insert_row(rows[i]);
      if (!satisfies(m, y, phi, property_options())) {
        where = describe(phi, m, x) + "fails on subteam\n" + print_team(y);
        return false;
      }
    }
    return true;
  });
}

inline PropertyOutcome locality(unsigned seed, int target) {
  return run_property("locality", seed, target, [](Gen& g, std::string& where) -> std::optional<bool> {
    Formula phi = g.formula(4);
    Model m = small_model(g);
    Team x = g.team(property_domain(), m, 4);
    VariableSet v = free_vars(phi);
    for (const auto& u : property_domain())
      if (g.chance(0.5)) v.insert(u);
    bool whole = satisfies(m, x, phi, property_options());
    bool part = satisfies(m, restrict(x, v), phi, property_options());
    if (whole != part) where = describe(phi, m, x);
    return whole == part;
  });
}

inline PropertyOutcome flatness(unsigned seed, int target) {
  return run_property("flatness", seed, target, [](Gen& g, std::string& where) -> std::optional<bool> {
    Formula phi = g.formula(4, true);
    Model m = small_model(g);
    Team x = g.team(property_domain(), m, 4);
    bool team = satisfies(m, x, phi, property_options());
    bool rows = true;
    for (const auto& s : x.assignments()) rows = rows && fo_satisfies(m, s, phi);
    if (team != rows) where = describe(phi, m, x);
    return team == rows;
  });
}

inline PropertyOutcome empty_team(unsigned seed, int target) {
  return run_property("empty team", seed, target, [](Gen& g, std::string& where) -> std::optional<bool> {
    Formula phi = g.formula(4);
    Model m = small_model(g);
    Team none(property_domain());
    bool ok = satisfies(m, none, phi, property_options());
    if (!ok) where = describe(phi, m, none);
    return ok;
  });
}

inline PropertyOutcome substitution_lemma(unsigned seed, int target) {
  return run_property("substitution lemma", seed, target, [](Gen& g, std::string& where) -> std::optional<bool> {
    Formula phi = g.formula(4);
    std::string x = g.pick(g.vars());
    Term t = g.term(2);
    Formula instance = phi;
    try {
      instance = substitute(phi, t, x);
    } catch (const CaptureError&) {
      return std::nullopt;
    }
    Model m = small_model(g);
    Team team = g.team(property_domain(), m, 4);
    std::map<Assignment, Element> f;
    for (const auto& s : team.assignments()) f.emplace(s, eval_term(m, s, t));
    bool lhs = satisfies(m, team, instance, property_options());
    bool rhs = satisfies(m, supplement(team, f, x), phi, property_options());
    if (lhs != rhs) where = describe(phi, m, team) + "term " + print_term(t) + " for " + x + "\n";
    return lhs == rhs;
  });
}

}  // namespace deplogic::testing
