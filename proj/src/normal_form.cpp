#include "deplogic/normal_form.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace deplogic {

Formula dep_formula(const DepSpec& d) {
  std::vector<Term> args = as_terms(d.determiners);
  args.push_back(Term::variable(d.determined));
  return Formula::dep(std::move(args));
}

Formula reassemble(const NormalFormSentence& nf) {
  std::vector<Formula> parts;
  for (const auto& d : nf.dep_atoms) parts.push_back(dep_formula(d));
  parts.push_back(nf.matrix);
  return forall_all(nf.universals, exists_all(nf.existentials, conj_all(parts)));
}

namespace {

// Throws SchemaMismatch unless nf satisfies the normal-form invariants.
void validate(const NormalFormSentence& nf) {
  VariableSet seen;
  for (const auto* block : {&nf.universals, &nf.existentials})
    for (const auto& v : *block)
      if (!seen.insert(v).second) throw SchemaMismatch("variable " + v + " is quantified twice");
  if (!nf.matrix.is_first_order() || !nf.matrix.is_quantifier_free())
    throw SchemaMismatch("matrix must be quantifier-free and first-order");
  for (const auto& v : free_vars(nf.matrix))
    if (!seen.count(v)) throw SchemaMismatch("variable " + v + " is free");

  VariableSet determined;
  for (const auto& d : nf.dep_atoms) {
    auto yi = std::find(nf.existentials.begin(), nf.existentials.end(), d.determined);
    if (yi == nf.existentials.end())
      throw SchemaMismatch("dependence atom determines " + d.determined + ", which is not existential");
    if (!determined.insert(d.determined).second)
      throw SchemaMismatch("two dependence atoms determine " + d.determined);
    VariableSet allowed(nf.universals.begin(), nf.universals.end());
    allowed.insert(nf.existentials.begin(), yi);
    for (const auto& w : d.determiners)
      if (!allowed.count(w))
        throw SchemaMismatch("dependence atom for " + d.determined + " mentions " + w +
                             ", which is not quantified before it");
  }
}

std::optional<DepSpec> as_dep_spec(const Formula& atom) {
  if (atom.kind() != FormulaKind::Dep || atom.terms().empty()) return std::nullopt;
  DepSpec d;
  for (const auto& t : atom.terms()) {
    if (!t.is_variable()) return std::nullopt;
    d.determiners.push_back(t.name());
  }
  d.determined = d.determiners.back();
  d.determiners.pop_back();
  return d;
}

}  // namespace

std::optional<NormalFormSentence> as_normal_form(const Formula& phi) {
  if (!is_sentence(phi)) return std::nullopt;
  std::vector<std::string> xs, ys;
  Formula body = phi;
  while (body.kind() == FormulaKind::Forall) {
    xs.push_back(body.symbol());
    body = body.body();
  }
  while (body.kind() == FormulaKind::Exists) {
    ys.push_back(body.symbol());
    body = body.body();
  }
  std::vector<DepSpec> deps;
  while (body.kind() == FormulaKind::And && body.lhs().kind() == FormulaKind::Dep) {
    auto d = as_dep_spec(body.lhs());
    if (!d) return std::nullopt;
    deps.push_back(*d);
    body = body.rhs();
  }
  NormalFormSentence nf{xs, ys, deps, body};
  try {
    validate(nf);
  } catch (const SchemaMismatch&) {
    return std::nullopt;
  }
  return nf;
}

// ---------------------------------------------------------------- preprocess

namespace {

Term rename_term(const Term& t, const std::map<std::string, std::string>& ren) {
  switch (t.kind()) {
    case Term::Kind::Variable: {
      auto it = ren.find(t.name());
      return it == ren.end() ? t : Term::variable(it->second);
    }
    case Term::Kind::Constant:
      return t;
    case Term::Kind::Apply: {
      std::vector<Term> args;
      for (const auto& a : t.args()) args.push_back(rename_term(a, ren));
      return Term::apply(t.name(), std::move(args));
    }
  }
  return t;
}

class Preprocessor {
 public:
  explicit Preprocessor(const Formula& phi) : avoid_(reserved_names(phi)), free_(free_vars(phi)) {}

  Formula run(const Formula& phi) { return walk(phi, {}); }

 private:
  std::string allocate(const std::string& hint) {
    std::string name = fresh_variable(avoid_, hint);
    avoid_.insert(name);
    bound_.insert(name);
    return name;
  }

  std::vector<Term> rename_all(const std::vector<Term>& ts, const std::map<std::string, std::string>& ren) {
    std::vector<Term> out;
    for (const auto& t : ts) out.push_back(rename_term(t, ren));
    return out;
  }

  // Repeated unnesting, first complex argument outermost.
  Formula unnest(std::vector<Term> ts) {
    auto it = std::find_if(ts.begin(), ts.end(), [](const Term& t) { return !t.is_variable(); });
    if (it == ts.end()) return Formula::dep(std::move(ts));
    Term t = *it;
    std::string z = allocate("z");
    *it = Term::variable(z);
    return Formula::exists(z, Formula::conj(unnest(std::move(ts)), Formula::equals(Term::variable(z), t)));
  }

  Formula walk(const Formula& f, const std::map<std::string, std::string>& ren) {
    switch (f.kind()) {
      case FormulaKind::Relation:
        return Formula::relation(f.symbol(), rename_all(f.terms(), ren));
      case FormulaKind::Equals:
        return Formula::equals(rename_term(f.terms()[0], ren), rename_term(f.terms()[1], ren));
      case FormulaKind::Dep:
        return unnest(rename_all(f.terms(), ren));
      case FormulaKind::Not:
        return Formula::negation(walk(f.body(), ren));
      case FormulaKind::And:
      case FormulaKind::Or: {
        // Left operand first: binder renaming depends on traversal order.
        Formula lhs = walk(f.lhs(), ren);
        Formula rhs = walk(f.rhs(), ren);
        return f.kind() == FormulaKind::And ? Formula::conj(lhs, rhs) : Formula::disj(lhs, rhs);
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        const std::string& x = f.symbol();
        std::string name = x;
        if (bound_.count(x) || free_.count(x)) {
          name = allocate(x);
        } else {
          bound_.insert(x);
        }
        auto inner = ren;
        inner[x] = name;
        Formula body = walk(f.body(), inner);
        return f.kind() == FormulaKind::Exists ? Formula::exists(name, body) : Formula::forall(name, body);
      }
    }
    return f;
  }

  VariableSet avoid_;
  VariableSet free_;
  VariableSet bound_;
};

}  // namespace

Formula preprocess(const Formula& phi) { return Preprocessor(phi).run(phi); }

// -------------------------------------------------------------------- prenex

namespace {

using Prefix = std::vector<std::pair<FormulaKind, std::string>>;

// Classical negation of a first-order formula, pushed through quantifiers
// and connectives until it meets a quantifier-free part.
Formula negate(const Formula& f) {
  if (f.is_quantifier_free()) return Formula::negation(f);
  switch (f.kind()) {
    case FormulaKind::Not:
      return f.body();
    case FormulaKind::And:
      return Formula::disj(negate(f.lhs()), negate(f.rhs()));
    case FormulaKind::Or:
      return Formula::conj(negate(f.lhs()), negate(f.rhs()));
    case FormulaKind::Exists:
      return Formula::forall(f.symbol(), negate(f.body()));
    case FormulaKind::Forall:
      return Formula::exists(f.symbol(), negate(f.body()));
    default:
      return Formula::negation(f);
  }
}

std::pair<Prefix, Formula> prenex(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Not:
      if (f.body().is_quantifier_free()) return {{}, f};
      return prenex(negate(f.body()));
    case FormulaKind::And:
    case FormulaKind::Or: {
      auto [pl, ml] = prenex(f.lhs());
      auto [pr, mr] = prenex(f.rhs());
      pl.insert(pl.end(), pr.begin(), pr.end());
      return {pl, f.kind() == FormulaKind::And ? Formula::conj(ml, mr) : Formula::disj(ml, mr)};
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      auto [p, m] = prenex(f.body());
      p.insert(p.begin(), {f.kind(), f.symbol()});
      return {p, m};
    }
    default:
      return {{}, f};
  }
}

Formula wrap(const Prefix& prefix, Formula body) {
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    body = it->first == FormulaKind::Exists ? Formula::exists(it->second, body) : Formula::forall(it->second, body);
  return body;
}

}  // namespace

Formula to_prenex(const Formula& phi) {
  auto [prefix, matrix] = prenex(phi);
  return wrap(prefix, matrix);
}

// ---------------------------------------------------------------- dep hoist

namespace {

struct Block {
  std::vector<std::string> vars;
  std::vector<Formula> deps;
  Formula rest;
};

class Hoister {
 public:
  explicit Hoister(VariableSet avoid) : avoid_(std::move(avoid)) {}

  Block run(const Formula& f) {
    if (f.is_first_order()) {
      if (!f.is_quantifier_free()) throw SchemaMismatch("expected a quantifier-free formula");
      return {{}, {}, f};
    }
    switch (f.kind()) {
      case FormulaKind::Dep: {
        const auto& ts = f.terms();
        std::string hint = !ts.empty() && ts.back().is_variable() ? ts.back().name() : "z";
        std::string z = fresh_variable(avoid_, hint);
        avoid_.insert(z);
        Term zt = Term::variable(z);
        if (ts.empty()) return {{z}, {Formula::dep({zt})}, Formula::equals(zt, zt)};
        std::vector<Term> args(ts.begin(), ts.end() - 1);
        args.push_back(zt);
        return {{z}, {Formula::dep(std::move(args))}, Formula::equals(zt, ts.back())};
      }
      case FormulaKind::And:
      case FormulaKind::Or: {
        Block l = run(f.lhs());
        Block r = run(f.rhs());
        l.vars.insert(l.vars.end(), r.vars.begin(), r.vars.end());
        l.deps.insert(l.deps.end(), r.deps.begin(), r.deps.end());
        l.rest = f.kind() == FormulaKind::And ? Formula::conj(l.rest, r.rest) : Formula::disj(l.rest, r.rest);
        return l;
      }
      default:
        throw SchemaMismatch("expected a quantifier-free formula");
    }
  }

 private:
  VariableSet avoid_;
};

}  // namespace

Formula hoist_dep_atoms(const Formula& theta, const VariableSet& avoid) {
  VariableSet names = reserved_names(theta);
  names.insert(avoid.begin(), avoid.end());
  Block b = Hoister(std::move(names)).run(theta);
  std::vector<Formula> parts = b.deps;
  parts.push_back(b.rest);
  return exists_all(b.vars, conj_all(parts));
}

// ------------------------------------------------------------- rule-7 swaps

NormalFormSentence pull_existentials_left(const Formula& phi) {
  Prefix prefix;
  Formula body = phi;
  while (body.is_quantifier()) {
    prefix.emplace_back(body.kind(), body.symbol());
    body = body.body();
  }
  std::vector<DepSpec> deps;
  while (body.kind() == FormulaKind::And && body.lhs().kind() == FormulaKind::Dep) {
    auto d = as_dep_spec(body.lhs());
    if (!d) throw SchemaMismatch("dependence atoms must range over variables");
    deps.push_back(*d);
    body = body.rhs();
  }
  if (!body.is_first_order() || !body.is_quantifier_free())
    throw SchemaMismatch("expected a prefix, dependence atoms, then a quantifier-free first-order matrix");

  // Atoms of the input must determine variables of the final existential block.
  std::size_t tail = prefix.size();
  while (tail > 0 && prefix[tail - 1].first == FormulaKind::Exists) --tail;
  for (const auto& d : deps) {
    auto it = std::find_if(prefix.begin() + static_cast<std::ptrdiff_t>(tail), prefix.end(),
                           [&](const auto& q) { return q.second == d.determined; });
    if (it == prefix.end())
      throw SchemaMismatch("dependence atom must determine a variable of the innermost existential block");
  }

  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < prefix.size(); ++i) position.emplace(prefix[i].second, i);

  NormalFormSentence nf{{}, {}, deps, body};
  for (std::size_t i = prefix.size(); i-- > 0;) {
    const auto& [kind, v] = prefix[i];
    if (kind == FormulaKind::Forall) {
      nf.universals.insert(nf.universals.begin(), v);
      continue;
    }
    bool has_atom = std::any_of(nf.dep_atoms.begin(), nf.dep_atoms.end(),
                                [&](const DepSpec& d) { return d.determined == v; });
    if (!nf.universals.empty() && !has_atom) {
      // Atom from the swap past the nearest universal.
      VariableSet scope;
      for (const auto& d : nf.dep_atoms) {
        scope.insert(d.determiners.begin(), d.determiners.end());
        scope.insert(d.determined);
      }
      VariableSet fv = free_vars(nf.matrix);
      scope.insert(fv.begin(), fv.end());
      std::vector<std::string> zs;
      for (const auto& u : scope) {
        auto p = position.find(u);
        if (p != position.end() && p->second < i) zs.push_back(u);
      }
      std::sort(zs.begin(), zs.end(), [&](const auto& a, const auto& b) { return position[a] < position[b]; });
      nf.dep_atoms.push_back(DepSpec{zs, v});
    }
    nf.existentials.insert(nf.existentials.begin(), v);
  }
  validate(nf);
  return nf;
}

NormalFormSentence to_normal_form(const Formula& phi) {
  if (!is_sentence(phi)) throw Error("to_normal_form expects a sentence");
  if (auto nf = as_normal_form(phi)) return *nf;
  Formula clean = preprocess(phi);
  Formula prenexed = to_prenex(clean);
  Prefix prefix;
  Formula matrix = prenexed;
  while (matrix.is_quantifier()) {
    prefix.emplace_back(matrix.kind(), matrix.symbol());
    matrix = matrix.body();
  }
  VariableSet avoid = reserved_names(prenexed);
  Formula hoisted = hoist_dep_atoms(matrix, avoid);
  return pull_existentials_left(wrap(prefix, hoisted));
}

}  // namespace deplogic
