#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deplogic/errors.hpp"
#include "deplogic/syntax.hpp"

namespace deplogic {

enum class RuleId {
  Assume,
  AndIntro,
  AndElimLeft,
  AndElimRight,
  OrIntroLeft,
  OrIntroRight,
  OrElim,
  NegIntro,
  NegElim,
  ForallIntro,
  ForallElim,
  ExistsIntro,
  ExistsElim,
  DisjSubst,      // A∨B, [B]…C  ⟹  A∨C
  DisjComm,
  DisjAssoc,
  ScopeForall,    // ∀xA ∨ B ⟹ ∀x(A∨B)
  ScopeExists,    // ∃xA ∨ B ⟹ ∃x(A∨B)
  Unnest,
  DepDistribute,
  DepIntro,
  DepElim,
  Identity,
};

std::string_view rule_name(RuleId rule);
std::optional<RuleId> rule_from_name(std::string_view name);
const std::vector<RuleId>& all_rules();

/// One line of a linear proof script. Premises and discharges name earlier
/// steps by their label (the number written before the dot).
struct ProofStep {
  std::size_t label;
  Formula formula;
  RuleId rule;
  std::vector<std::size_t> premises;
  std::vector<std::size_t> discharged;
  std::size_t line = 0;  // source line, 0 when built in code
};

struct Proof {
  std::vector<ProofStep> steps;

  const Formula& conclusion() const { return steps.back().formula; }
};

struct CheckReport {
  struct Failure {
    std::size_t step;  // label of the offending step
    Diagnostic diagnostic;
  };

  bool accepted() const { return failures.empty(); }
  std::vector<Failure> failures;
};

/// Diagnostics for step number `k` (position in p.steps). Empty iff the step
/// follows from its premises by its rule with every side condition met.
std::vector<Diagnostic> check_step(const Proof& p, std::size_t k);

/// Accepts iff every step checks and every assumption still open after the
/// last step is alpha-equal to a member of `allowed_open`.
CheckReport check_proof(const Proof& p, const std::vector<Formula>& allowed_open);

/// Forward application of dependence introduction:
/// ∃x∀yA ⟹ ∀y∃x(dep(z⃗,x) ∧ A), z⃗ the free variables of A other than x, y
/// in order of first occurrence.
Formula apply_rule7(const Formula& premise);

/// Forward application of dependence elimination. The premise must be
/// ∀x⃗∃y⃗(dep₁ ∧ (… ∧ B)) with at least one universal, dependence atoms over
/// variables only (at most one per existential, each depending on universals
/// and earlier existentials), and B quantifier-free and first-order.
/// The first round keeps the premise's variable names; the second gets fresh
/// ones.
Formula apply_rule8(const Formula& premise);

}  // namespace deplogic
