#include "deplogic/approximation.hpp"

#include <algorithm>
#include <map>

namespace deplogic {

GuardSet build_guard_set(const NormalFormSentence& nf) {
  GuardSet s;
  for (const auto& y : nf.existentials) {
    auto own = std::find_if(nf.dep_atoms.begin(), nf.dep_atoms.end(),
                            [&](const DepSpec& d) { return d.determined == y; });
    s.push_back(own != nf.dep_atoms.end() ? *own : DepSpec{nf.universals, y});
  }
  return s;
}

std::vector<IndexedCopy> round_names(const NormalFormSentence& nf, std::size_t rounds) {
  VariableSet avoid = reserved_names(reassemble(nf));
  std::vector<IndexedCopy> out;
  for (std::size_t l = 0; l < rounds; ++l) {
    IndexedCopy copy{l, {}, {}};
    auto name = [&](const std::string& base) {
      std::string v = fresh_variable(avoid, base + "_" + std::to_string(l));
      avoid.insert(v);
      return v;
    };
    for (const auto& x : nf.universals) copy.universals.push_back(name(x));
    for (const auto& y : nf.existentials) copy.existentials.push_back(name(y));
    out.push_back(std::move(copy));
  }
  return out;
}

namespace {

Formula build(const NormalFormSentence& nf, int n, bool omega) {
  if (n < 1) throw Error("approximation index must be at least 1");
  const auto rounds = static_cast<std::size_t>(n);
  std::vector<IndexedCopy> names = round_names(nf, rounds);
  std::vector<std::map<std::string, Term>> rename(rounds);
  for (std::size_t l = 0; l < rounds; ++l) {
    for (std::size_t i = 0; i < nf.universals.size(); ++i)
      rename[l].emplace(nf.universals[i], Term::variable(names[l].universals[i]));
    for (std::size_t i = 0; i < nf.existentials.size(); ++i)
      rename[l].emplace(nf.existentials[i], Term::variable(names[l].existentials[i]));
  }
  auto terms_in = [&](std::size_t l, const std::vector<std::string>& vars) {
    std::vector<Term> out;
    for (const auto& v : vars) out.push_back(rename[l].at(v));
    return out;
  };
  const GuardSet guards = build_guard_set(nf);

  std::optional<Formula> inner;
  for (std::size_t l = rounds; l-- > 0;) {
    std::vector<Formula> parts;
    if (omega && l + 1 == rounds)
      for (const auto& d : nf.dep_atoms) parts.push_back(substitute_all(dep_formula(d), rename[l]));
    parts.push_back(substitute_all(nf.matrix, rename[l]));
    for (std::size_t j = 0; j < l; ++j) {
      for (const auto& g : guards) {
        parts.push_back(implies(tuple_equals(terms_in(j, g.determiners), terms_in(l, g.determiners)),
                                Formula::equals(rename[j].at(g.determined), rename[l].at(g.determined))));
      }
    }
    if (inner) parts.push_back(*inner);
    inner = forall_all(names[l].universals, exists_all(names[l].existentials, conj_all(parts)));
  }
  return *inner;
}

}  // namespace

Formula build_approximation(const NormalFormSentence& nf, int n) { return build(nf, n, false); }

Formula build_omega(const NormalFormSentence& nf, int n) { return build(nf, n, true); }

std::vector<bool> approximation_chain_check(const NormalFormSentence& nf, const Model& m, int up_to,
                                            SearchBudget budget) {
  if (up_to < 1) throw Error("chain length must be at least 1");
  EvalOptions opts;
  opts.budget = budget;
  std::vector<bool> out;
  for (int n = 1; n <= up_to; ++n) out.push_back(sentence_true(m, build_approximation(nf, n), opts));
  return out;
}

}  // namespace deplogic
