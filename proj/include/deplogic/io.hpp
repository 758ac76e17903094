#pragma once

#include <string>
#include <utility>
#include <vector>

#include "deplogic/proof.hpp"
#include "deplogic/semantics.hpp"
#include "deplogic/syntax.hpp"

namespace deplogic {

struct SourceText {
  std::string text;
  std::string origin = "<inline>";
};

SourceText read_source(const std::string& path);

// Where a fragment starts inside a larger file; diagnostics are shifted by it.
struct SourceOffset {
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Formula grammar (loosest to tightest):
///
///   formula := ("forall" | "exists") var+ "." formula | disj
///   disj    := conj ("|" conj)*
///   conj    := unary ("&" unary)*
///   unary   := "~" unary | quantified formula | "(" formula ")" | atom
///   atom    := "dep" "(" [term ("," term)*] ")" | "=" "(" term ("," term)* ")"
///            | R ["(" term ("," term)* ")"] | term "=" term | term "!=" term
///   term    := var | c | f "(" term ("," term)* ")"
///
/// Quantifier scope extends as far right as possible. Unicode ∀ ∃ ∧ ∨ ¬ ≠ are
/// accepted as synonyms. An identifier is a variable iff `voc` does not
/// declare it. `#` starts a comment.
Formula parse_formula(const SourceText& src, const Vocabulary& voc, SourceOffset at = {});
Formula parse_formula(const std::string& text, const Vocabulary& voc);

enum class Notation { Ascii, Unicode };

/// Fully parenthesized canonical text; parse_formula inverts it exactly.
std::string print_formula(const Formula& phi, Notation notation = Notation::Ascii);
std::string print_term(const Term& t);

/// Declarations without interpretations: `constant c`, `relation R/2`,
/// `function f/1`, separated by newlines or `;`.
Vocabulary parse_vocabulary(const SourceText& src);

/// Model file: `domain <k>` first, then `constant c = e`,
/// `relation R/n = {(e,…), …}`, `function f/n = [(e,…)->e, …]` (unary
/// tuples may drop their parentheses).
Model parse_model(const SourceText& src);
std::string print_model(const Model& m);

/// Team file: `vars v1 … vn`, then one row of n elements per line; `()`
/// stands for the empty assignment. Repeated rows collapse.
Team parse_team(const SourceText& src, const Model& m);
std::string print_team(const Team& team);

/// Proof script, one step per line:
///   <label>. <formula> [by] <rule> [<premise labels>] [discharge <labels>]
Proof parse_proof(const SourceText& src, const Vocabulary& voc);
std::string print_proof(const Proof& p);

// One formula per non-blank line.
std::vector<Formula> parse_formula_list(const SourceText& src, const Vocabulary& voc);

}  // namespace deplogic
