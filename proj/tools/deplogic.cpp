// deplogic: command-line front end.
//
// Exit status: 0 success / true / accepted, 1 false / rejected /
// counterexample, 2 usage or input error, 3 search budget exceeded.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "deplogic/approximation.hpp"
#include "deplogic/io.hpp"
#include "deplogic/normal_form.hpp"
#include "deplogic/proof.hpp"
#include "deplogic/semantics.hpp"

using namespace deplogic;

namespace {

constexpr int kOk = 0;
constexpr int kFalse = 1;
constexpr int kInputError = 2;
constexpr int kBudget = 3;

class InputError : public Error {
 public:
  using Error::Error;
};

// `@path` reads the file, anything else is inline text.
SourceText argument_text(const std::string& value) {
  if (!value.empty() && value[0] == '@') return read_source(value.substr(1));
  return SourceText{value};
}

template <class F>
auto located(const SourceText& src, F&& parse) {
  try {
    return parse(src);
  } catch (const SyntaxError& e) {
    throw InputError(src.origin + ":" + e.diagnostic().str());
  }
}

struct Options {
  std::string vocab;
  std::string formula;
  std::string model;
  std::string team;
  std::string proof;
  std::string hypotheses;
  std::string f1;
  std::string f2;
  int n = 1;
  int max_size = 3;
  int up_to = 4;
  bool omega = false;
  std::optional<std::uint64_t> budget;
  bool ascii = false;
};

class Runner {
 public:
  explicit Runner(const Options& o) : o_(o) {}

  int parse() {
    std::cout << show(formula(o_.formula)) << '\n';
    return kOk;
  }

  int eval() {
    Model m = model();
    voc_.merge(m.vocabulary());
    Formula phi = formula(o_.formula);
    check_against(m.vocabulary(), phi);
    bool verdict;
    if (o_.team.empty()) {
      if (!is_sentence(phi)) throw InputError("formula has free variables; pass --team");
      verdict = sentence_true(m, phi, options());
    } else {
      Team team = located(read_source(o_.team), [&](const SourceText& s) { return parse_team(s, m); });
      for (const auto& v : free_vars(phi))
        if (!team.domain_set().count(v)) throw InputError("free variable " + v + " is not in the team's domain");
      verdict = satisfies(m, team, phi, options());
    }
    std::cout << (verdict ? "true" : "false") << '\n';
    return verdict ? kOk : kFalse;
  }

  int normalize() {
    NormalFormSentence nf = to_normal_form(sentence(o_.formula));
    std::cout << show(reassemble(nf)) << '\n';
    return kOk;
  }

  int approx() {
    if (o_.n < 1) throw InputError("--n must be at least 1");
    NormalFormSentence nf = to_normal_form(sentence(o_.formula));
    Formula out = o_.omega ? build_omega(nf, o_.n) : build_approximation(nf, o_.n);
    std::cout << show(out) << '\n';
    return kOk;
  }

  int check_proof_command() {
    load_vocab();
    Proof p = located(read_source(o_.proof), [&](const SourceText& s) { return parse_proof(s, voc_); });
    std::vector<Formula> hyps;
    if (!o_.hypotheses.empty())
      hyps = located(read_source(o_.hypotheses),
                     [&](const SourceText& s) { return parse_formula_list(s, voc_); });
    CheckReport report = check_proof(p, hyps);
    if (report.accepted()) {
      std::cout << "accepted: " << show(p.conclusion()) << '\n';
      return kOk;
    }
    std::cout << "rejected\n";
    for (const auto& f : report.failures) std::cout << o_.proof << ':' << f.diagnostic.str() << '\n';
    return kFalse;
  }

  int equiv() {
    if (o_.max_size < 1) throw InputError("--max-size must be at least 1");
    Formula a = formula(o_.f1);
    Formula b = formula(o_.f2);
    SearchBudget budget;
    if (auto n = budget_override()) budget.max_choice_points = *n;
    EquivResult r = equiv_on_small_models(a, b, o_.max_size, budget);
    if (r.equivalent) {
      std::cout << "equivalent on all models up to size " << o_.max_size << " (" << r.instances_checked
                << " instances)\n";
      return kOk;
    }
    const Counterexample& c = *r.counterexample;
    std::cout << "counterexample: " << (c.lhs_holds ? "f1 holds, f2 fails" : "f2 holds, f1 fails") << '\n'
              << "# model\n"
              << print_model(c.model) << "# team\n"
              << print_team(c.team);
    return kFalse;
  }

  int chain() {
    if (o_.up_to < 1) throw InputError("--up-to must be at least 1");
    Model m = model();
    voc_.merge(m.vocabulary());
    Formula phi = sentence(o_.formula);
    check_against(m.vocabulary(), phi);
    NormalFormSentence nf = to_normal_form(phi);
    SearchBudget budget;
    if (auto n = budget_override()) budget.max_choice_points = *n;
    std::vector<bool> values = approximation_chain_check(nf, m, o_.up_to, budget);
    std::cout << '[';
    for (std::size_t i = 0; i < values.size(); ++i) std::cout << (i ? ", " : "") << (values[i] ? "true" : "false");
    std::cout << "]\n";
    return kOk;
  }

 private:
  void load_vocab() {
    if (vocab_loaded_) return;
    vocab_loaded_ = true;
    if (o_.vocab.empty()) return;
    voc_.merge(located(argument_text(o_.vocab), [](const SourceText& s) { return parse_vocabulary(s); }));
  }

  Formula formula(const std::string& arg) {
    load_vocab();
    return located(argument_text(arg), [&](const SourceText& s) { return parse_formula(s, voc_); });
  }

  Formula sentence(const std::string& arg) {
    Formula phi = formula(arg);
    if (!is_sentence(phi)) {
      std::string vars;
      for (const auto& v : free_vars(phi)) vars += (vars.empty() ? "" : ", ") + v;
      throw InputError("expected a sentence; free variables: " + vars);
    }
    return phi;
  }

  Model model() {
    return located(read_source(o_.model), [](const SourceText& s) { return parse_model(s); });
  }

  std::optional<std::uint64_t> budget_override() const {
    if (o_.budget) return o_.budget;
    if (const char* env = std::getenv("DEPLOGIC_BUDGET")) {
      try {
        std::size_t used = 0;
        unsigned long long n = std::stoull(env, &used);
        if (used == std::string(env).size() && n > 0) return n;
      } catch (const std::exception&) {
      }
      throw InputError("DEPLOGIC_BUDGET must be a positive integer");
    }
    return std::nullopt;
  }

  EvalOptions options() const {
    EvalOptions opts;
    if (auto n = budget_override()) opts.budget.max_choice_points = *n;
    return opts;
  }

  std::string show(const Formula& phi) const {
    return print_formula(phi, o_.ascii ? Notation::Ascii : Notation::Unicode);
  }

  const Options& o_;
  Vocabulary voc_;
  bool vocab_loaded_ = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dependence-logic workbench"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--vocab", o.vocab, "Vocabulary declarations, or @file");
  app.add_option("--budget", o.budget, "Search budget in choice points (overrides DEPLOGIC_BUDGET)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--ascii", o.ascii, "Print formulas in ASCII instead of Unicode");

  auto* parse = app.add_subcommand("parse", "Print the canonical form of a formula");
  parse->add_option("--formula", o.formula, "Formula text, or @file")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a formula on a model and team");
  eval->add_option("--model", o.model, "Model file")->required();
  eval->add_option("--team", o.team, "Team file (default: the team holding the empty assignment)");
  eval->add_option("--formula", o.formula, "Formula text, or @file")->required();

  auto* normalize = app.add_subcommand("normalize", "Transform a sentence into normal form");
  normalize->add_option("--formula", o.formula, "Sentence text, or @file")->required();

  auto* approx = app.add_subcommand("approx", "Print the n-th first-order approximation");
  approx->add_option("--formula", o.formula, "Sentence text, or @file")->required();
  approx->add_option("--n", o.n, "Approximation index")->required();
  approx->add_flag("--omega", o.omega, "Keep the dependence atoms in the innermost round");

  auto* check = app.add_subcommand("check-proof", "Check a proof script");
  check->add_option("--proof", o.proof, "Proof file")->required();
  check->add_option("--hypotheses", o.hypotheses, "File with one allowed open assumption per line");

  auto* equiv = app.add_subcommand("equiv", "Search small models for a team separating two formulas");
  equiv->add_option("--f1", o.f1, "First formula, or @file")->required();
  equiv->add_option("--f2", o.f2, "Second formula, or @file")->required();
  equiv->add_option("--max-size", o.max_size, "Largest model size searched");

  auto* chain = app.add_subcommand("chain", "Truth values of the approximations in a model");
  chain->add_option("--formula", o.formula, "Sentence text, or @file")->required();
  chain->add_option("--model", o.model, "Model file")->required();
  chain->add_option("--up-to", o.up_to, "Number of approximations");

  for (auto* sub : {parse, eval, normalize, approx, check, equiv, chain}) {
    sub->add_option("--vocab", o.vocab, "Vocabulary declarations, or @file");
    sub->add_option("--budget", o.budget, "Search budget in choice points")->check(CLI::PositiveNumber);
    sub->add_flag("--ascii", o.ascii, "Print formulas in ASCII");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  Runner run(o);
  try {
    if (*parse) return run.parse();
    if (*eval) return run.eval();
    if (*normalize) return run.normalize();
    if (*approx) return run.approx();
    if (*check) return run.check_proof_command();
    if (*equiv) return run.equiv();
    if (*chain) return run.chain();
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
