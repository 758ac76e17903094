#include "deplogic/semantics.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

namespace deplogic {

// --------------------------------------------------------------------- Model

Model::Model(int size) : size_(size) {
  if (size < 1) throw EvaluationError("model domain must be non-empty");
}

void Model::check_element(Element e) const {
  if (e < 0 || e >= size_) {
    throw EvaluationError("element " + std::to_string(e) + " outside domain 0.." +
                          std::to_string(size_ - 1));
  }
}

std::size_t Model::table_size(int arity) const {
  std::size_t n = 1;
  for (int i = 0; i < arity; ++i) n *= static_cast<std::size_t>(size_);
  return n;
}

std::size_t Model::index_of(const Tuple& args) const {
  std::size_t idx = 0;
  for (Element a : args) idx = idx * static_cast<std::size_t>(size_) + static_cast<std::size_t>(a);
  return idx;
}

void Model::set_constant(const std::string& name, Element value) {
  check_element(value);
  voc_.add_constant(name);
  constants_[name] = value;
}

void Model::set_relation(const std::string& name, int arity, const std::set<Tuple>& tuples) {
  Relation rel{arity, std::vector<char>(table_size(arity), 0)};
  for (const auto& t : tuples) {
    if (static_cast<int>(t.size()) != arity)
      throw EvaluationError("tuple of wrong arity for relation '" + name + "'");
    for (Element e : t) check_element(e);
    rel.table[index_of(t)] = 1;
  }
  voc_.add_relation(name, arity);
  relations_[name] = std::move(rel);
}

void Model::set_function(const std::string& name, int arity, std::vector<Element> table) {
  if (table.size() != table_size(arity))
    throw EvaluationError("function table for '" + name + "' is not total");
  for (Element e : table) check_element(e);
  voc_.add_function(name, arity);
  functions_[name] = Function{arity, std::move(table)};
}

Element Model::constant(const std::string& name) const {
  auto it = constants_.find(name);
  if (it == constants_.end()) throw EvaluationError("model has no constant '" + name + "'");
  return it->second;
}

const Model::Relation& Model::relation_table(const std::string& name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) throw EvaluationError("model has no relation '" + name + "'");
  return it->second;
}

const Model::Function& Model::function_table(const std::string& name) const {
  auto it = functions_.find(name);
  if (it == functions_.end()) throw EvaluationError("model has no function '" + name + "'");
  return it->second;
}

bool Model::holds(const std::string& relation, const Tuple& args) const {
  const auto& rel = relation_table(relation);
  if (static_cast<int>(args.size()) != rel.arity)
    throw EvaluationError("wrong arity for relation '" + relation + "'");
  for (Element e : args) check_element(e);
  return rel.table[index_of(args)] != 0;
}

Element Model::apply(const std::string& function, const Tuple& args) const {
  const auto& fn = function_table(function);
  if (static_cast<int>(args.size()) != fn.arity)
    throw EvaluationError("wrong arity for function '" + function + "'");
  for (Element e : args) check_element(e);
  return fn.table[index_of(args)];
}

std::set<Tuple> Model::relation_tuples(const std::string& name) const {
  const auto& rel = relation_table(name);
  std::set<Tuple> out;
  Tuple t(static_cast<std::size_t>(rel.arity), 0);
  for (std::size_t idx = 0; idx < rel.table.size(); ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = t.size(); i-- > 0;) {
      t[i] = static_cast<Element>(rest % static_cast<std::size_t>(size_));
      rest /= static_cast<std::size_t>(size_);
    }
    if (rel.table[idx]) out.insert(t);
  }
  return out;
}

// ---------------------------------------------------------------------- Team

Team::Team(VariableSet domain) : domain_(domain.begin(), domain.end()) {}

Team Team::unit() {
  Team t;
  t.rows_.insert(Tuple{});
  return t;
}

void Team::insert(const Assignment& s) {
  if (s.size() != domain_.size()) throw EvaluationError("assignment domain differs from team domain");
  Tuple row;
  row.reserve(domain_.size());
  for (const auto& v : domain_) {
    auto it = s.find(v);
    if (it == s.end()) throw EvaluationError("assignment lacks team variable '" + v + "'");
    row.push_back(it->second);
  }
  rows_.insert(std::move(row));
}

void Team::insert_row(Tuple row) {
  if (row.size() != domain_.size()) throw EvaluationError("row arity differs from team domain");
  rows_.insert(std::move(row));
}

Assignment Team::assignment(const Tuple& row) const {
  Assignment s;
  for (std::size_t i = 0; i < domain_.size(); ++i) s.emplace(domain_[i], row[i]);
  return s;
}

std::vector<Assignment> Team::assignments() const {
  std::vector<Assignment> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(assignment(r));
  return out;
}

// ----------------------------------------------------------- team algebra

Team duplicate(const Team& team, const Model& m, const std::string& x) {
  VariableSet dom = team.domain_set();
  dom.insert(x);
  Team out(dom);
  for (auto s : team.assignments()) {
    for (Element a = 0; a < m.size(); ++a) {
      s[x] = a;
      out.insert(s);
    }
  }
  return out;
}

Team supplement(const Team& team, const std::map<Assignment, Element>& f, const std::string& x) {
  VariableSet dom = team.domain_set();
  dom.insert(x);
  Team out(dom);
  for (auto s : team.assignments()) {
    auto it = f.find(s);
    if (it == f.end()) throw EvaluationError("supplement function undefined on a team row");
    s[x] = it->second;
    out.insert(s);
  }
  return out;
}

Team restrict(const Team& team, const VariableSet& vars) {
  VariableSet dom = team.domain_set();
  for (const auto& v : vars)
    if (!dom.count(v)) throw EvaluationError("cannot restrict to '" + v + "': not in team domain");
  Team out(vars);
  for (const auto& s : team.assignments()) {
    Assignment r;
    for (const auto& v : vars) r.emplace(v, s.at(v));
    out.insert(r);
  }
  return out;
}

// ------------------------------------------------------- term evaluation

Element eval_term(const Model& m, const Assignment& s, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Variable: {
      auto it = s.find(t.name());
      if (it == s.end()) throw EvaluationError("unbound variable '" + t.name() + "'");
      return it->second;
    }
    case Term::Kind::Constant:
      return m.constant(t.name());
    case Term::Kind::Apply: {
      Tuple args;
      for (const auto& a : t.args()) args.push_back(eval_term(m, s, a));
      return m.apply(t.name(), args);
    }
  }
  return 0;
}

// ------------------------------------------------------ compiled evaluation
//
// Formulas are compiled against one model into slot-indexed nodes; rows hold
// one value per slot, with kUnset for variables outside the current domain.

namespace {

constexpr Element kUnset = -1;
using Row = std::vector<Element>;
using Rows = std::vector<Row>;

struct CTerm {
  Term::Kind kind;
  int slot = -1;
  Element value = 0;
  const Model::Function* fn = nullptr;
  std::vector<CTerm> args;
};

struct CNode {
  FormulaKind kind;
  const Model::Relation* rel = nullptr;
  std::vector<CTerm> terms;
  int slot = -1;  // bound variable of a quantifier
  int lhs = -1;
  int rhs = -1;
  bool first_order = true;
  std::vector<int> free_slots;
};

void normalize(Rows& rows) {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

class Evaluator {
 public:
  Evaluator(const Model& m, const EvalOptions& opts) : m_(m), opts_(opts) {}

  int slot_of(const std::string& v) {
    auto [it, inserted] = slots_.emplace(v, static_cast<int>(slots_.size()));
    return it->second;
  }
  std::size_t slot_count() const { return slots_.size(); }

  int compile(const Formula& phi) {
    CNode n;
    n.kind = phi.kind();
    n.first_order = phi.is_first_order();
    for (const auto& v : free_vars(phi)) n.free_slots.push_back(slot_of(v));
    std::sort(n.free_slots.begin(), n.free_slots.end());
    switch (phi.kind()) {
      case FormulaKind::Relation: {
        n.rel = &m_.relation_table(phi.symbol());
        if (n.rel->arity != static_cast<int>(phi.terms().size()))
          throw EvaluationError("wrong arity for relation '" + phi.symbol() + "'");
        [[fallthrough]];
      }
      case FormulaKind::Equals:
      case FormulaKind::Dep:
        for (const auto& t : phi.terms()) n.terms.push_back(compile_term(t));
        break;
      case FormulaKind::Not:
        n.lhs = compile(phi.body());
        break;
      case FormulaKind::And:
      case FormulaKind::Or:
        n.lhs = compile(phi.lhs());
        n.rhs = compile(phi.rhs());
        break;
      case FormulaKind::Exists:
      case FormulaKind::Forall:
        n.slot = slot_of(phi.symbol());
        n.lhs = compile(phi.body());
        break;
    }
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  Element eval(const CTerm& t, const Row& row) const {
    switch (t.kind) {
      case Term::Kind::Variable: {
        Element v = static_cast<std::size_t>(t.slot) < row.size() ? row[t.slot] : kUnset;
        if (v == kUnset) throw EvaluationError("unbound variable in term");
        return v;
      }
      case Term::Kind::Constant:
        return t.value;
      case Term::Kind::Apply: {
        std::size_t idx = 0;
        for (const auto& a : t.args) idx = idx * static_cast<std::size_t>(m_.size()) + static_cast<std::size_t>(eval(a, row));
        return t.fn->table[idx];
      }
    }
    return 0;
  }

  // Tarski satisfaction of a first-order node; `row` is scratch space.
  bool tarski(int id, Row& row) const {
    const CNode& n = nodes_[id];
    switch (n.kind) {
      case FormulaKind::Relation: {
        std::size_t idx = 0;
        for (const auto& t : n.terms) idx = idx * static_cast<std::size_t>(m_.size()) + static_cast<std::size_t>(eval(t, row));
        return n.rel->table[idx] != 0;
      }
      case FormulaKind::Equals:
        return eval(n.terms[0], row) == eval(n.terms[1], row);
      case FormulaKind::Dep:
        throw EvaluationError("dependence atom in first-order evaluation");
      case FormulaKind::Not:
        return !tarski(n.lhs, row);
      case FormulaKind::And:
        return tarski(n.lhs, row) && tarski(n.rhs, row);
      case FormulaKind::Or:
        return tarski(n.lhs, row) || tarski(n.rhs, row);
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        bool want = n.kind == FormulaKind::Exists;
        Element saved = row[n.slot];
        bool result = !want;
        for (Element a = 0; a < m_.size(); ++a) {
          row[n.slot] = a;
          if (tarski(n.lhs, row) == want) {
            result = want;
            break;
          }
        }
        row[n.slot] = saved;
        return result;
      }
    }
    return false;
  }

  bool sat(int id, Rows rows) {
    if (rows.empty()) return true;
    const CNode& n = nodes_[id];
    if (n.first_order && opts_.flat_shortcut) return all_rows_tarski(id, rows);
    switch (n.kind) {
      case FormulaKind::Relation:
      case FormulaKind::Equals:
      case FormulaKind::Not:
        return all_rows_tarski(id, rows);
      case FormulaKind::Dep:
        return dep(n, rows);
      case FormulaKind::And:
        return sat(n.lhs, rows) && sat(n.rhs, std::move(rows));
      case FormulaKind::Or:
        return disjunction(id, std::move(rows));
      case FormulaKind::Exists:
        return existential(id, std::move(rows));
      case FormulaKind::Forall:
        return universal(id, std::move(rows));
    }
    return false;
  }

  bool dep(const CNode& n, const Rows& rows) const {
    if (n.terms.empty()) return true;
    std::map<Tuple, Element> seen;
    for (const auto& row : rows) {
      Tuple key;
      for (std::size_t i = 0; i + 1 < n.terms.size(); ++i) key.push_back(eval(n.terms[i], row));
      Element value = eval(n.terms.back(), row);
      auto [it, inserted] = seen.emplace(std::move(key), value);
      if (!inserted && it->second != value) return false;
    }
    return true;
  }

 private:
  CTerm compile_term(const Term& t) {
    CTerm c;
    c.kind = t.kind();
    switch (t.kind()) {
      case Term::Kind::Variable:
        c.slot = slot_of(t.name());
        break;
      case Term::Kind::Constant:
        c.value = m_.constant(t.name());
        break;
      case Term::Kind::Apply:
        c.fn = &m_.function_table(t.name());
        if (c.fn->arity != static_cast<int>(t.args().size()))
          throw EvaluationError("wrong arity for function '" + t.name() + "'");
        for (const auto& a : t.args()) c.args.push_back(compile_term(a));
        break;
    }
    return c;
  }

  void charge() {
    if (++spent_ > opts_.budget.max_choice_points)
      throw BudgetExceeded("search budget of " + std::to_string(opts_.budget.max_choice_points) +
                           " choice points exceeded");
  }

  bool all_rows_tarski(int id, const Rows& rows) const {
    for (Row row : rows) {
      row.resize(slots_.size(), kUnset);
      if (!tarski(id, row)) return false;
    }
    return true;
  }

  Rows project(const CNode& n, Rows rows) const {
    if (!opts_.locality_projection) return rows;
    for (auto& row : rows) {
      Row r(row.size(), kUnset);
      for (int s : n.free_slots)
        if (static_cast<std::size_t>(s) < row.size()) r[s] = row[s];
      row = std::move(r);
    }
    normalize(rows);
    return rows;
  }

  bool singleton(int id, const Row& row) {
    const CNode& n = nodes_[id];
    Row key(row.size(), kUnset);
    for (int s : n.free_slots)
      if (static_cast<std::size_t>(s) < row.size()) key[s] = row[s];
    auto& cache = singleton_cache_[id];
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    bool v = sat(id, Rows{row});
    cache.emplace(std::move(key), v);
    return v;
  }

  bool disjunction(int id, Rows rows) {
    const CNode& n = nodes_[id];
    rows = project(n, std::move(rows));
    Rows left, right, open;
    if (opts_.singleton_pruning) {
      for (const auto& row : rows) {
        bool l = singleton(n.lhs, row);
        bool r = singleton(n.rhs, row);
        if (!l && !r) return false;
        if (!l) right.push_back(row);
        else if (!r) left.push_back(row);
        else open.push_back(row);
      }
    } else {
      open = rows;
    }
    if (open.size() >= 63) throw BudgetExceeded("disjunction split over more than 62 free rows");
    const std::uint64_t splits = std::uint64_t{1} << open.size();
    for (std::uint64_t mask = 0; mask < splits; ++mask) {
      charge();
      Rows y = left, z = right;
      for (std::size_t i = 0; i < open.size(); ++i) (mask >> i & 1 ? y : z).push_back(open[i]);
      normalize(y);
      normalize(z);
      if (sat(n.lhs, std::move(y)) && sat(n.rhs, std::move(z))) return true;
    }
    return false;
  }

  bool existential(int id, Rows rows) {
    const CNode& n = nodes_[id];
    rows = project(n, std::move(rows));
    if (opts_.block_search) {
      const Block& b = block_of(id);
      if (b.usable && fresh_block(b, rows)) return block_search(b, rows);
    }
    const std::size_t width = slots_.size();
    std::vector<std::vector<Element>> candidates(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Row ext = rows[i];
      ext.resize(width, kUnset);
      for (Element a = 0; a < m_.size(); ++a) {
        ext[n.slot] = a;
        if (!opts_.singleton_pruning || singleton(n.lhs, ext)) candidates[i].push_back(a);
      }
      if (candidates[i].empty()) return false;
    }
    std::vector<std::size_t> choice(rows.size(), 0);
    for (;;) {
      charge();
      Rows next;
      next.reserve(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        Row ext = rows[i];
        ext.resize(width, kUnset);
        ext[n.slot] = candidates[i][choice[i]];
        next.push_back(std::move(ext));
      }
      normalize(next);
      if (sat(n.lhs, std::move(next))) return true;
      std::size_t i = 0;
      while (i < rows.size() && ++choice[i] == candidates[i].size()) choice[i++] = 0;
      if (i == rows.size()) return false;
    }
  }

  // A run ∃y₁…∃y_k whose body is a conjunction of dependence atoms and
  // first-order formulas. On a team where no y_i is defined, every row gets
  // exactly one extension, so the search is a constraint problem over rows.
  struct Block {
    bool usable = false;
    std::vector<int> vars;
    std::vector<int> deps;
    std::vector<int> fo;
  };

  const Block& block_of(int id) {
    if (auto it = blocks_.find(id); it != blocks_.end()) return it->second;
    Block b;
    int body = id;
    while (nodes_[body].kind == FormulaKind::Exists) {
      b.vars.push_back(nodes_[body].slot);
      body = nodes_[body].lhs;
    }
    std::vector<int> sorted = b.vars;
    std::sort(sorted.begin(), sorted.end());
    b.usable = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end() && collect(body, b);
    return blocks_.emplace(id, std::move(b)).first->second;
  }

  bool collect(int id, Block& b) const {
    const CNode& n = nodes_[id];
    if (n.kind == FormulaKind::And) return collect(n.lhs, b) && collect(n.rhs, b);
    if (n.kind == FormulaKind::Dep) {
      if (!n.terms.empty()) b.deps.push_back(id);
      return true;
    }
    if (!n.first_order) return false;
    b.fo.push_back(id);
    return true;
  }

  static bool fresh_block(const Block& b, const Rows& rows) {
    for (const auto& row : rows)
      for (int s : b.vars)
        if (static_cast<std::size_t>(s) < row.size() && row[s] != kUnset) return false;
    return true;
  }

  bool block_search(const Block& b, const Rows& rows) {
    const std::size_t width = slots_.size();
    const std::size_t k = b.vars.size();
    const auto size = static_cast<std::size_t>(m_.size());

    // Extensions of each row that pass the first-order conjuncts, with the
    // key and value each dependence atom reads off them.
    struct Option {
      std::vector<Tuple> keys;
      std::vector<Element> values;
    };
    std::vector<std::vector<Option>> options(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Row ext = rows[i];
      ext.resize(width, kUnset);
      std::vector<Element> digits(k, 0);
      for (;;) {
        charge();
        for (std::size_t j = 0; j < k; ++j) ext[b.vars[j]] = digits[j];
        bool ok = true;
        for (int f : b.fo) ok = ok && tarski(f, ext);
        if (ok) {
          Option o;
          for (int d : b.deps) {
            const CNode& atom = nodes_[d];
            Tuple key;
            for (std::size_t t = 0; t + 1 < atom.terms.size(); ++t) key.push_back(eval(atom.terms[t], ext));
            o.keys.push_back(std::move(key));
            o.values.push_back(eval(atom.terms.back(), ext));
          }
          options[i].push_back(std::move(o));
        }
        std::size_t j = 0;
        while (j < k && static_cast<std::size_t>(++digits[j]) == size) digits[j++] = 0;
        if (j == k) break;
      }
      if (options[i].empty()) return false;
    }

    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t c) { return options[a].size() < options[c].size(); });

    std::vector<std::map<Tuple, Element>> tables(b.deps.size());
    std::function<bool(std::size_t)> place = [&](std::size_t pos) {
      if (pos == order.size()) return true;
      for (const Option& o : options[order[pos]]) {
        charge();
        std::vector<std::size_t> added;
        bool ok = true;
        for (std::size_t d = 0; d < tables.size() && ok; ++d) {
          auto [it, inserted] = tables[d].emplace(o.keys[d], o.values[d]);
          if (inserted) added.push_back(d);
          else ok = it->second == o.values[d];
        }
        if (ok && place(pos + 1)) return true;
        for (std::size_t d : added) tables[d].erase(o.keys[d]);
      }
      return false;
    };
    return place(0);
  }

  bool universal(int id, Rows rows) {
    const CNode& n = nodes_[id];
    rows = project(n, std::move(rows));
    Rows next;
    next.reserve(rows.size() * static_cast<std::size_t>(m_.size()));
    for (const auto& row : rows) {
      Row ext = row;
      ext.resize(slots_.size(), kUnset);
      for (Element a = 0; a < m_.size(); ++a) {
        ext[n.slot] = a;
        next.push_back(ext);
      }
    }
    normalize(next);
    return sat(n.lhs, std::move(next));
  }

  const Model& m_;
  EvalOptions opts_;
  std::map<std::string, int> slots_;
  std::vector<CNode> nodes_;
  std::uint64_t spent_ = 0;
  std::unordered_map<int, std::map<Row, bool>> singleton_cache_;
  std::unordered_map<int, Block> blocks_;
};

Rows team_rows(Evaluator& ev, const Team& team) {
  std::vector<int> slots;
  for (const auto& v : team.domain()) slots.push_back(ev.slot_of(v));
  Rows rows;
  for (const auto& r : team.rows()) {
    Row row(ev.slot_count(), kUnset);
    for (std::size_t i = 0; i < slots.size(); ++i) row[slots[i]] = r[i];
    rows.push_back(std::move(row));
  }
  normalize(rows);
  return rows;
}

void require_bound(const VariableSet& free, const VariableSet& dom) {
  for (const auto& v : free)
    if (!dom.count(v)) throw EvaluationError("free variable '" + v + "' not in the team domain");
}

}  // namespace

bool fo_satisfies(const Model& m, const Assignment& s, const Formula& phi) {
  if (!phi.is_first_order()) throw EvaluationError("formula is not first-order");
  VariableSet dom;
  for (const auto& [v, a] : s) dom.insert(v);
  require_bound(free_vars(phi), dom);
  Evaluator ev(m, {});
  int root = ev.compile(phi);
  Row row(ev.slot_count(), kUnset);
  for (const auto& [v, a] : s) {
    if (a < 0 || a >= m.size()) throw EvaluationError("assignment value outside the domain");
    int slot = ev.slot_of(v);
    if (static_cast<std::size_t>(slot) >= row.size()) row.resize(slot + 1, kUnset);
    row[slot] = a;
  }
  return ev.tarski(root, row);
}

bool dep_holds(const Model& m, const Team& team, const std::vector<Term>& terms) {
  Formula atom = Formula::dep(terms);
  require_bound(free_vars(atom), team.domain_set());
  return satisfies(m, team, atom, EvalOptions::naive());
}

bool satisfies(const Model& m, const Team& team, const Formula& phi, const EvalOptions& opts) {
  require_bound(free_vars(phi), team.domain_set());
  Evaluator ev(m, opts);
  for (const auto& v : team.domain()) ev.slot_of(v);
  int root = ev.compile(phi);
  return ev.sat(root, team_rows(ev, team));
}

bool sentence_true(const Model& m, const Formula& phi, const EvalOptions& opts) {
  if (!is_sentence(phi)) throw EvaluationError("formula is not a sentence");
  return satisfies(m, Team::unit(), phi, opts);
}

// -------------------------------------------------------- enumeration

namespace {

// Odometer over `digits` positions each ranging 0..base-1.
bool advance(std::vector<Element>& digits, int base) {
  for (auto& d : digits) {
    if (++d < base) return true;
    d = 0;
  }
  return false;
}

struct SymbolSlot {
  SymbolKind kind;
  std::string name;
  int arity;
  std::vector<Element> digits;  // relations: 0/1 per tuple; functions: value per tuple
};

}  // namespace

void for_each_model(const Vocabulary& voc, int size, const std::function<bool(const Model&)>& visit) {
  Model probe(size);
  std::vector<SymbolSlot> slots;
  for (const auto& c : voc.constants()) slots.push_back({SymbolKind::Constant, c, 0, {0}});
  for (const auto& [r, a] : voc.relations())
    slots.push_back({SymbolKind::Relation, r, a, std::vector<Element>(probe.table_size(a), 0)});
  for (const auto& [f, a] : voc.functions())
    slots.push_back({SymbolKind::Function, f, a, std::vector<Element>(probe.table_size(a), 0)});

  for (;;) {
    Model m(size);
    for (const auto& s : slots) {
      switch (s.kind) {
        case SymbolKind::Constant:
          m.set_constant(s.name, s.digits[0]);
          break;
        case SymbolKind::Relation: {
          std::set<Tuple> tuples;
          for (std::size_t idx = 0; idx < s.digits.size(); ++idx) {
            if (!s.digits[idx]) continue;
            Tuple u(static_cast<std::size_t>(s.arity), 0);
            std::size_t rest = idx;
            for (std::size_t i = u.size(); i-- > 0;) {
              u[i] = static_cast<Element>(rest % static_cast<std::size_t>(size));
              rest /= static_cast<std::size_t>(size);
            }
            tuples.insert(std::move(u));
          }
          m.set_relation(s.name, s.arity, tuples);
          break;
        }
        case SymbolKind::Function:
          m.set_function(s.name, s.arity, s.digits);
          break;
        default:
          break;
      }
    }
    if (!visit(m)) return;
    bool more = false;
    for (auto& s : slots) {
      int base = s.kind == SymbolKind::Relation ? 2 : size;
      if (advance(s.digits, base)) {
        more = true;
        break;
      }
    }
    if (!more) return;
  }
}

void for_each_team(const VariableSet& vars, int size, const std::function<bool(const Team&)>& visit) {
  std::vector<Tuple> all;
  Tuple t(vars.size(), 0);
  do {
    all.push_back(t);
  } while (advance(t, size));
  if (all.size() >= 63) throw BudgetExceeded("too many assignments to enumerate all teams");
  const std::uint64_t count = std::uint64_t{1} << all.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    Team team(vars);
    for (std::size_t i = 0; i < all.size(); ++i)
      if (mask >> i & 1) team.insert_row(all[i]);
    if (!visit(team)) return;
  }
}

EquivResult equiv_on_small_models(const Formula& phi, const Formula& psi, int max_size,
                                  SearchBudget budget) {
  Vocabulary voc = symbols_of(phi);
  voc.merge(symbols_of(psi));
  VariableSet vars = free_vars(phi);
  for (const auto& v : free_vars(psi)) vars.insert(v);

  EquivResult result;
  EvalOptions opts{budget};
  for (int size = 1; size <= max_size && result.equivalent; ++size) {
    for_each_model(voc, size, [&](const Model& m) {
      for_each_team(vars, size, [&](const Team& team) {
        if (++result.instances_checked > budget.max_choice_points)
          throw BudgetExceeded("equivalence search exceeded its budget");
        bool a = satisfies(m, team, phi, opts);
        bool b = satisfies(m, team, psi, opts);
        if (a != b) {
          result.equivalent = false;
          result.counterexample = Counterexample{m, team, a};
        }
        return result.equivalent;
      });
      return result.equivalent;
    });
  }
  return result;
}

}  // namespace deplogic
