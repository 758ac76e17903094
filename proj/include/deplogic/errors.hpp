#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deplogic {

enum class Severity { Error, Warning };

/// A message tied to a span of the input text. Lines and columns are 1-based;
/// `column_end` is exclusive.
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  std::size_t line = 0;
  std::size_t column_begin = 0;
  std::size_t column_end = 0;

  std::string str() const;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the parsers; carries the located diagnostic.
class SyntaxError : public Error {
 public:
  enum class Category {
    Syntax,
    Vocabulary,     // unknown symbol, wrong arity, variable named like a symbol
    NegationScope,  // negation over a formula with a dependence atom
    Model,          // partial table, element out of domain, duplicate symbol
    Team,           // row arity, value out of domain, repeated variable
    Reference,      // proof step refers to a missing or later step
    Rule,           // unknown rule name
  };

  explicit SyntaxError(Diagnostic d, Category category = Category::Syntax);
  const Diagnostic& diagnostic() const { return diag_; }
  Category category() const { return category_; }

 private:
  Diagnostic diag_;
  Category category_;
};

class VocabularyError : public Error {
 public:
  using Error::Error;
};

// Negation applied to a formula that contains a dependence atom.
class NegationScopeError : public Error {
 public:
  using Error::Error;
};

class CaptureError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

// The witness search ran past its SearchBudget. Not a verdict.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class SchemaMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace deplogic
