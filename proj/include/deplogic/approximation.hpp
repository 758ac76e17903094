#pragma once

#include <vector>

#include "deplogic/normal_form.hpp"
#include "deplogic/semantics.hpp"

namespace deplogic {

/// One uniformity constraint per existential, in existential order: its own
/// dependence atom if it has one, otherwise dependence on every universal.
using GuardSet = std::vector<DepSpec>;

GuardSet build_guard_set(const NormalFormSentence& nf);

/// Round-indexed names `<base>_<l>` for every quantified variable of nf.
struct IndexedCopy {
  std::size_t round;
  std::vector<std::string> universals;
  std::vector<std::string> existentials;
};

std::vector<IndexedCopy> round_names(const NormalFormSentence& nf, std::size_t rounds);

/// Φⁿ: n nested renamed copies of the quantifier block. Round l carries the
/// matrix and, for every earlier round j and every guard (w⃗, y),
/// w⃗_j = w⃗_l → y_j = y_l. First-order.
Formula build_approximation(const NormalFormSentence& nf, int n);

/// Φⁿ with the dependence atoms of nf, renamed to the last round, conjoined in
/// the innermost block.
Formula build_omega(const NormalFormSentence& nf, int n);

/// Truth values of Φ¹ … Φ^up_to in m.
std::vector<bool> approximation_chain_check(const NormalFormSentence& nf, const Model& m, int up_to,
                                            SearchBudget budget = {});

}  // namespace deplogic
