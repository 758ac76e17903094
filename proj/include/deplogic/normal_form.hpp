#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deplogic/syntax.hpp"

namespace deplogic {

/// dep(determiners..., determined)
struct DepSpec {
  std::vector<std::string> determiners;
  std::string determined;

  bool operator==(const DepSpec&) const = default;
};

/// ∀universals ∃existentials (dep₁ ∧ (dep₂ ∧ … ∧ matrix)).
///
/// The matrix is quantifier-free and first-order, every variable is quantified
/// once, each existential carries at most one dependence atom, and an atom
/// for the i-th existential mentions only universals and existentials before
/// it.
struct NormalFormSentence {
  std::vector<std::string> universals;
  std::vector<std::string> existentials;
  std::vector<DepSpec> dep_atoms;
  Formula matrix;

  bool operator==(const NormalFormSentence&) const = default;
};

Formula dep_formula(const DepSpec& d);

// The sentence the decomposition stands for.
Formula reassemble(const NormalFormSentence& nf);

/// Recognizes a sentence that already has the normal shape. Dependence atoms
/// must come first as a right-nested conjunction in front of the matrix.
std::optional<NormalFormSentence> as_normal_form(const Formula& phi);

/// Renames bound variables apart (fresh_variable with the old name as hint)
/// and unnests complex terms in dependence atoms:
/// dep(…, t, …) becomes ∃z(dep(…, z, …) ∧ z = t).
Formula preprocess(const Formula& phi);

/// Prenex form of a preprocessed formula; the left operand's quantifiers come
/// first. Negated quantified first-order subformulas are pushed inward.
Formula to_prenex(const Formula& phi);

/// ∃z⃗(dep₁ ∧ (… ∧ θ*)) for a quantifier-free θ. Fresh names avoid `avoid`
/// and every variable of θ.
Formula hoist_dep_atoms(const Formula& theta, const VariableSet& avoid = {});

/// Moves existentials right past universals, adding dependence atoms on the
/// way. The input is a prefix followed by (dep₁ ∧ (… ∧ θ*)). Throws
/// SchemaMismatch on any other shape.
NormalFormSentence pull_existentials_left(const Formula& phi);

/// preprocess, to_prenex, hoist_dep_atoms, pull_existentials_left. A sentence
/// that is already in normal form comes back unchanged.
NormalFormSentence to_normal_form(const Formula& phi);

}  // namespace deplogic
