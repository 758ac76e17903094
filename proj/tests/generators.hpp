#pragma once

// Seeded random generators for formulas, models, teams and normal forms.

#include <algorithm>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "deplogic/io.hpp"
#include "deplogic/normal_form.hpp"
#include "deplogic/semantics.hpp"
#include "deplogic/syntax.hpp"

namespace deplogic {

// Readable failure messages in GoogleTest assertions.
inline void PrintTo(const Formula& phi, std::ostream* os) { *os << print_formula(phi); }

}  // namespace deplogic

namespace deplogic::testing {

// P/1, R/2, f/1 and the constant c.
inline Vocabulary test_vocabulary() {
  Vocabulary voc;
  voc.add_relation("P", 1);
  voc.add_relation("R", 2);
  voc.add_function("f", 1);
  voc.add_constant("c");
  return voc;
}

class Gen {
 public:
  explicit Gen(unsigned seed, std::vector<std::string> vars = {"x", "y", "z"})
      : rng_(seed), vars_(std::move(vars)) {}

  std::mt19937& rng() { return rng_; }
  const std::vector<std::string>& vars() const { return vars_; }

  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(below(static_cast<int>(xs.size())))];
  }

  Term variable() { return Term::variable(pick(vars_)); }

  Term term(int depth = 1) {
    int r = below(10);
    if (r < 6 || depth == 0) return variable();
    if (r < 8) return Term::constant("c");
    return Term::apply("f", {term(depth - 1)});
  }

  Formula atom(bool first_order) {
    switch (below(first_order ? 3 : 5)) {
      case 0:
        return Formula::relation("P", {term()});
      case 1:
        return Formula::relation("R", {term(), term()});
      case 2: {
        Term lhs = term();
        return Formula::equals(lhs, term());
      }
      default: {
        std::vector<Term> args;
        int n = below(4);
        for (int i = 0; i < n; ++i) args.push_back(chance(0.8) ? variable() : term());
        return Formula::dep(std::move(args));
      }
    }
  }

  Formula formula(int depth, bool first_order = false) {
    if (depth <= 0 || chance(0.25)) return atom(first_order);
    switch (below(6)) {
      case 0:
        return Formula::negation(formula(depth - 1, true));
      case 1: {
        Formula lhs = formula(depth - 1, first_order);
        return Formula::conj(lhs, formula(depth - 1, first_order));
      }
      case 2:
      case 3: {
        Formula lhs = formula(depth - 1, first_order);
        return Formula::disj(lhs, formula(depth - 1, first_order));
      }
      case 4: {
        const std::string& x = pick(vars_);
        return Formula::exists(x, formula(depth - 1, first_order));
      }
      default: {
        const std::string& x = pick(vars_);
        return Formula::forall(x, formula(depth - 1, first_order));
      }
    }
  }

  // Quantifier-free first-order formula over `vars`, no function symbols.
  Formula matrix(const std::vector<std::string>& vars, int depth) {
    auto t = [&]() {
      return chance(0.8) ? Term::variable(pick(vars)) : Term::constant("c");
    };
    if (depth <= 0 || chance(0.3)) {
      switch (below(3)) {
        case 0:
          return Formula::relation("P", {t()});
        case 1:
          return Formula::relation("R", {t(), t()});
        default: {
          Term lhs = t();
          return Formula::equals(lhs, t());
        }
      }
    }
    switch (below(3)) {
      case 0:
        return Formula::negation(matrix(vars, depth - 1));
      case 1: {
        Formula lhs = matrix(vars, depth - 1);
        return Formula::conj(lhs, matrix(vars, depth - 1));
      }
      default: {
        Formula lhs = matrix(vars, depth - 1);
        return Formula::disj(lhs, matrix(vars, depth - 1));
      }
    }
  }

  Model model(int size) {
    Model m(size);
    m.set_constant("c", below(size));
    std::set<Tuple> p, r;
    for (int a = 0; a < size; ++a) {
      if (chance(0.5)) p.insert({a});
      for (int b = 0; b < size; ++b)
        if (chance(0.5)) r.insert({a, b});
    }
    m.set_relation("P", 1, p);
    m.set_relation("R", 2, r);
    std::vector<Element> f;
    for (int a = 0; a < size; ++a) f.push_back(below(size));
    m.set_function("f", 1, f);
    return m;
  }

  Team team(const VariableSet& domain, const Model& m, int max_rows) {
    Team t(domain);
    int rows = below(max_rows + 1);
    for (int i = 0; i < rows; ++i) {
      Tuple row;
      for (std::size_t j = 0; j < domain.size(); ++j) row.push_back(below(m.size()));
      t.insert_row(row);
    }
    return t;
  }

  // ∀u⃗∃e⃗(deps ∧ matrix) with at most `max_vars` quantified variables.
  NormalFormSentence normal_form(int max_vars = 3) {
    int nu = 1 + below(2);
    int ne = std::min(3, 1 + below(std::max(1, max_vars - nu)));
    static const std::vector<std::string> us = {"x0", "x1"};
    static const std::vector<std::string> es = {"y0", "y1", "y2"};
    std::vector<std::string> universals(us.begin(), us.begin() + nu);
    std::vector<std::string> existentials(es.begin(), es.begin() + ne);
    std::vector<DepSpec> deps;
    std::vector<std::string> visible = universals;
    for (const auto& y : existentials) {
      if (chance(0.6)) {
        DepSpec d;
        for (const auto& v : visible)
          if (chance(0.5)) d.determiners.push_back(v);
        d.determined = y;
        deps.push_back(d);
      }
      visible.push_back(y);
    }
    return NormalFormSentence{universals, existentials, deps, matrix(visible, 2)};
  }

 private:
  std::mt19937 rng_;
  std::vector<std::string> vars_;
};

}  // namespace deplogic::testing
