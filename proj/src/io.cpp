#include "deplogic/io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace deplogic {

SourceText read_source(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return {buf.str(), path};
}

namespace {

using Category = SyntaxError::Category;

[[noreturn]] void fail(std::size_t line, std::size_t col, std::size_t len, const std::string& msg,
                       Category cat = Category::Syntax) {
  throw SyntaxError(Diagnostic{Severity::Error, msg, line, col, col + (len ? len : 1)}, cat);
}

// ------------------------------------------------------------------- lexer

enum class Tok {
  Ident,
  LParen,
  RParen,
  Comma,
  Dot,
  And,
  Or,
  Not,
  Eq,
  Neq,
  Forall,
  Exists,
  Dep,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t col;
  std::size_t len;
};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; }

std::vector<Token> lex(const std::string& text, SourceOffset at) {
  static const std::vector<std::pair<std::string, Tok>> symbols = {
      {"∀", Tok::Forall}, {"∃", Tok::Exists}, {"∧", Tok::And},
      {"∨", Tok::Or},     {"¬", Tok::Not},    {"≠", Tok::Neq},
      {"!=", Tok::Neq},        {"&", Tok::And},         {"|", Tok::Or},
      {"~", Tok::Not},         {"!", Tok::Not},         {"=", Tok::Eq},
      {"(", Tok::LParen},      {")", Tok::RParen},      {",", Tok::Comma},
      {".", Tok::Dot},
  };
  std::vector<Token> out;
  std::size_t line = at.line, col = at.column;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(c)) {
      ++i;
      ++col;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(static_cast<unsigned char>(text[j]))) ++j;
      std::string word = text.substr(i, j - i);
      Tok kind = Tok::Ident;
      if (word == "forall") kind = Tok::Forall;
      else if (word == "exists") kind = Tok::Exists;
      else if (word == "dep") kind = Tok::Dep;
      out.push_back({kind, word, line, col, j - i});
      col += j - i;
      i = j;
      continue;
    }
    bool matched = false;
    for (const auto& [sym, kind] : symbols) {
      if (text.compare(i, sym.size(), sym) == 0) {
        out.push_back({kind, sym, line, col, 1});
        i += sym.size();
        col += 1;
        matched = true;
        break;
      }
    }
    if (!matched) fail(line, col, 1, std::string("unexpected character '") + text[i] + "'");
  }
  out.push_back({Tok::End, "", line, col, 0});
  return out;
}

// ------------------------------------------------------------------ parser

class FormulaParser {
 public:
  FormulaParser(std::vector<Token> toks, const Vocabulary& voc) : toks_(std::move(toks)), voc_(voc) {}

  Formula parse_all() {
    Formula f = formula();
    if (peek().kind != Tok::End) fail_here("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg, Category cat = Category::Syntax) const {
    fail(t.line, t.col, t.len, msg, cat);
  }
  [[noreturn]] void fail_here(const std::string& msg) const {
    fail_at(peek(), peek().kind == Tok::End ? msg + " (at end of input)" : msg);
  }
  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail_here(std::string("expected ") + what);
    return take();
  }

  Formula formula() {
    if (peek().kind == Tok::Forall || peek().kind == Tok::Exists) return quantified();
    return disjunction();
  }

  Formula quantified() {
    const Token& q = take();
    std::vector<const Token*> vars;
    while (peek().kind == Tok::Ident) vars.push_back(&take());
    if (vars.empty()) fail_here("expected a variable after quantifier");
    expect(Tok::Dot, "'.' after quantified variables");
    Formula body = formula();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      const Token& v = **it;
      if (voc_.declares(v.text))
        fail_at(v, "cannot bind '" + v.text + "': it is a declared symbol", Category::Vocabulary);
      body = q.kind == Tok::Forall ? Formula::forall(v.text, body) : Formula::exists(v.text, body);
    }
    return body;
  }

  Formula disjunction() {
    Formula acc = conjunction();
    while (peek().kind == Tok::Or) {
      take();
      acc = Formula::disj(acc, conjunction());
    }
    return acc;
  }

  Formula conjunction() {
    Formula acc = unary();
    while (peek().kind == Tok::And) {
      take();
      acc = Formula::conj(acc, unary());
    }
    return acc;
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::Not: {
        const Token& t = take();
        Formula body = unary();
        if (!body.is_first_order())
          fail_at(t, "negation may only be applied to first-order formulas", Category::NegationScope);
        return Formula::negation(body);
      }
      case Tok::Forall:
      case Tok::Exists:
        return quantified();
      case Tok::LParen: {
        take();
        Formula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      default:
        return atom();
    }
  }

  std::vector<Term> term_list(bool allow_empty) {
    expect(Tok::LParen, "'('");
    std::vector<Term> ts;
    if (peek().kind == Tok::RParen) {
      if (!allow_empty) fail_here("expected a term");
      take();
      return ts;
    }
    ts.push_back(term());
    while (peek().kind == Tok::Comma) {
      take();
      ts.push_back(term());
    }
    expect(Tok::RParen, "')'");
    return ts;
  }

  Formula atom() {
    if (peek().kind == Tok::Dep) {
      take();
      return Formula::dep(term_list(true));
    }
    if (peek().kind == Tok::Eq && peek(1).kind == Tok::LParen) {
      take();
      return Formula::dep(term_list(false));
    }
    if (peek().kind == Tok::Ident && voc_.kind_of(peek().text) == SymbolKind::Relation) {
      const Token& name = take();
      std::vector<Term> args;
      if (peek().kind == Tok::LParen) args = term_list(true);
      int arity = voc_.arity_of(name.text);
      if (static_cast<int>(args.size()) != arity)
        fail_at(name, "relation '" + name.text + "' expects " + std::to_string(arity) + " arguments",
                Category::Vocabulary);
      return Formula::relation(name.text, std::move(args));
    }
    Term lhs = term();
    if (peek().kind == Tok::Eq) {
      take();
      return Formula::equals(lhs, term());
    }
    if (peek().kind == Tok::Neq) {
      take();
      return Formula::negation(Formula::equals(lhs, term()));
    }
    if (peek().kind == Tok::LParen || lhs.kind() == Term::Kind::Apply)
      fail_here("expected '=' after term");
    fail_at(toks_[pos_ - 1],
            "'" + lhs.name() + "' is not a declared relation (expected '=' after a term)",
            Category::Vocabulary);
  }

  Term term() {
    if (peek().kind != Tok::Ident) fail_here("expected a term");
    const Token& name = take();
    switch (voc_.kind_of(name.text)) {
      case SymbolKind::Constant:
        if (peek().kind == Tok::LParen) fail_at(name, "constant '" + name.text + "' takes no arguments", Category::Vocabulary);
        return Term::constant(name.text);
      case SymbolKind::Function: {
        std::vector<Term> args = term_list(false);
        int arity = voc_.arity_of(name.text);
        if (static_cast<int>(args.size()) != arity)
          fail_at(name, "function '" + name.text + "' expects " + std::to_string(arity) + " arguments",
                  Category::Vocabulary);
        return Term::apply(name.text, std::move(args));
      }
      case SymbolKind::Relation:
        fail_at(name, "relation '" + name.text + "' used as a term", Category::Vocabulary);
      case SymbolKind::None:
        break;
    }
    if (peek().kind == Tok::LParen) fail_at(name, "unknown function '" + name.text + "'", Category::Vocabulary);
    return Term::variable(name.text);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Vocabulary& voc_;
};

// ----------------------------------------------------------------- printer

struct Glyphs {
  const char* forall;
  const char* exists;
  const char* conj;
  const char* disj;
  const char* neg;
};

constexpr Glyphs kAscii{"forall ", "exists ", " & ", " | ", "~"};
constexpr Glyphs kUnicode{"∀", "∃", " ∧ ", " ∨ ", "¬"};

void print_term_to(const Term& t, std::string& out) {
  out += t.name();
  if (t.kind() != Term::Kind::Apply) return;
  out += '(';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ", ";
    print_term_to(t.args()[i], out);
  }
  out += ')';
}

void print_terms(const std::vector<Term>& ts, std::string& out) {
  out += '(';
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) out += ", ";
    print_term_to(ts[i], out);
  }
  out += ')';
}

void print_to(const Formula& phi, const Glyphs& g, bool unicode, std::string& out);

void print_operand(const Formula& phi, const Glyphs& g, bool unicode, std::string& out) {
  if (phi.is_quantifier()) {
    out += '(';
    print_to(phi, g, unicode, out);
    out += ')';
  } else {
    print_to(phi, g, unicode, out);
  }
}

void print_to(const Formula& phi, const Glyphs& g, bool unicode, std::string& out) {
  switch (phi.kind()) {
    case FormulaKind::Relation:
      out += phi.symbol();
      if (!phi.terms().empty()) print_terms(phi.terms(), out);
      return;
    case FormulaKind::Equals:
      print_term_to(phi.terms()[0], out);
      out += " = ";
      print_term_to(phi.terms()[1], out);
      return;
    case FormulaKind::Dep:
      out += "dep";
      print_terms(phi.terms(), out);
      return;
    case FormulaKind::Not: {
      const Formula& b = phi.body();
      if (b.kind() == FormulaKind::Equals) {
        if (unicode) {
          print_term_to(b.terms()[0], out);
          out += " ≠ ";
          print_term_to(b.terms()[1], out);
        } else {
          out += g.neg;
          out += '(';
          print_to(b, g, unicode, out);
          out += ')';
        }
        return;
      }
      out += g.neg;
      print_operand(b, g, unicode, out);
      return;
    }
    case FormulaKind::And:
    case FormulaKind::Or:
      out += '(';
      print_operand(phi.lhs(), g, unicode, out);
      out += phi.kind() == FormulaKind::And ? g.conj : g.disj;
      print_to(phi.rhs(), g, unicode, out);
      out += ')';
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      out += phi.kind() == FormulaKind::Forall ? g.forall : g.exists;
      out += phi.symbol();
      out += ". ";
      print_to(phi.body(), g, unicode, out);
      return;
  }
}

// ---------------------------------------------------- line-oriented files

struct Line {
  std::size_t number;
  std::string text;  // comment stripped
};

std::vector<Line> significant_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back({n, raw});
  }
  return out;
}

/// Cursor over one line of a declaration file.
class LineScanner {
 public:
  LineScanner(const Line& line, Category cat) : line_(line), cat_(cat) {}

  void skip_space() {
    while (pos_ < line_.text.size() && std::isspace(static_cast<unsigned char>(line_.text[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= line_.text.size();
  }
  bool accept(const std::string& s) {
    skip_space();
    if (line_.text.compare(pos_, s.size(), s) == 0) {
      pos_ += s.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& s) {
    if (!accept(s)) error("expected '" + s + "'");
  }
  std::string ident() {
    skip_space();
    std::size_t j = pos_;
    if (j < line_.text.size() && ident_start(static_cast<unsigned char>(line_.text[j]))) {
      while (j < line_.text.size() && ident_char(static_cast<unsigned char>(line_.text[j]))) ++j;
    }
    if (j == pos_) error("expected a name");
    std::string s = line_.text.substr(pos_, j - pos_);
    last_ = pos_;
    pos_ = j;
    return s;
  }
  long number() {
    skip_space();
    std::size_t j = pos_;
    if (j < line_.text.size() && line_.text[j] == '-') ++j;
    while (j < line_.text.size() && std::isdigit(static_cast<unsigned char>(line_.text[j]))) ++j;
    if (j == pos_ || (j == pos_ + 1 && line_.text[pos_] == '-')) error("expected a number");
    long v = std::stol(line_.text.substr(pos_, j - pos_));
    last_ = pos_;
    pos_ = j;
    return v;
  }
  char peek() {
    skip_space();
    return pos_ < line_.text.size() ? line_.text[pos_] : '\0';
  }
  std::size_t column() const { return pos_ + 1; }
  std::size_t last_column() const { return last_ + 1; }

  [[noreturn]] void error(const std::string& msg, Category cat) const {
    std::size_t len = line_.text.size() > pos_ ? 1 : 0;
    fail(line_.number, pos_ + 1, len, msg, cat);
  }
  [[noreturn]] void error(const std::string& msg) const { error(msg, Category::Syntax); }
  [[noreturn]] void error_at_last(const std::string& msg, Category cat) const {
    fail(line_.number, last_ + 1, 1, msg, cat);
  }

 private:
  const Line& line_;
  Category cat_;
  std::size_t pos_ = 0;
  std::size_t last_ = 0;
};

// `(a, b, c)` or a bare element when `arity == 1`; checks domain bounds.
Tuple read_tuple(LineScanner& sc, int arity, int domain) {
  Tuple t;
  auto element = [&]() {
    long v = sc.number();
    if (v < 0 || v >= domain)
      sc.error_at_last("element " + std::to_string(v) + " out of domain 0.." + std::to_string(domain - 1),
                       Category::Model);
    t.push_back(static_cast<Element>(v));
  };
  if (sc.peek() == '(') {
    sc.expect("(");
    if (sc.peek() != ')') {
      element();
      while (sc.accept(",")) element();
    }
    sc.expect(")");
  } else if (arity == 1) {
    element();
  } else {
    sc.error("expected '('");
  }
  if (static_cast<int>(t.size()) != arity)
    sc.error("tuple has " + std::to_string(t.size()) + " elements, expected " + std::to_string(arity),
             Category::Model);
  return t;
}

std::pair<std::string, int> read_signature(LineScanner& sc) {
  std::string name = sc.ident();
  sc.expect("/");
  long arity = sc.number();
  return {name, static_cast<int>(arity)};
}

}  // namespace

// ------------------------------------------------------------ public API

Formula parse_formula(const SourceText& src, const Vocabulary& voc, SourceOffset at) {
  FormulaParser p(lex(src.text, at), voc);
  return p.parse_all();
}

Formula parse_formula(const std::string& text, const Vocabulary& voc) {
  return parse_formula(SourceText{text}, voc);
}

std::string print_formula(const Formula& phi, Notation notation) {
  std::string out;
  bool unicode = notation == Notation::Unicode;
  print_to(phi, unicode ? kUnicode : kAscii, unicode, out);
  return out;
}

std::string print_term(const Term& t) {
  std::string out;
  print_term_to(t, out);
  return out;
}

Vocabulary parse_vocabulary(const SourceText& src) {
  std::string text = src.text;
  for (char& c : text)
    if (c == ';') c = '\n';
  Vocabulary voc;
  for (const auto& line : significant_lines(text)) {
    LineScanner sc(line, Category::Vocabulary);
    std::string kw = sc.ident();
    try {
      if (kw == "constant") {
        voc.add_constant(sc.ident());
      } else if (kw == "relation") {
        auto [name, arity] = read_signature(sc);
        voc.add_relation(name, arity);
      } else if (kw == "function") {
        auto [name, arity] = read_signature(sc);
        voc.add_function(name, arity);
      } else {
        sc.error_at_last("expected 'constant', 'relation' or 'function'", Category::Syntax);
      }
    } catch (const VocabularyError& e) {
      sc.error_at_last(e.what(), Category::Vocabulary);
    }
    if (!sc.at_end()) sc.error("trailing text");
  }
  return voc;
}

Model parse_model(const SourceText& src) {
  auto lines = significant_lines(src.text);
  if (lines.empty()) fail(1, 1, 0, "empty model: expected 'domain <k>'", Category::Model);
  LineScanner head(lines[0], Category::Model);
  if (head.ident() != "domain") head.error_at_last("model must start with 'domain <k>'", Category::Model);
  long k = head.number();
  if (k < 1) head.error_at_last("domain size must be positive", Category::Model);
  if (!head.at_end()) head.error("trailing text");
  Model m(static_cast<int>(k));
  const int size = static_cast<int>(k);

  for (std::size_t li = 1; li < lines.size(); ++li) {
    LineScanner sc(lines[li], Category::Model);
    std::string kw = sc.ident();
    std::size_t kw_col = sc.last_column();
    auto declare = [&](auto&& add) {
      try {
        add();
      } catch (const Error& e) {
        fail(lines[li].number, kw_col, kw.size(), e.what(), Category::Model);
      }
    };
    if (kw == "constant") {
      std::string name = sc.ident();
      sc.expect("=");
      long v = sc.number();
      if (v < 0 || v >= size)
        sc.error_at_last("element " + std::to_string(v) + " out of domain", Category::Model);
      declare([&] { m.set_constant(name, static_cast<Element>(v)); });
    } else if (kw == "relation") {
      auto [name, arity] = read_signature(sc);
      if (arity < 0) sc.error_at_last("negative arity", Category::Model);
      sc.expect("=");
      sc.expect("{");
      std::set<Tuple> tuples;
      if (sc.peek() != '}') {
        tuples.insert(read_tuple(sc, arity, size));
        while (sc.accept(",")) tuples.insert(read_tuple(sc, arity, size));
      }
      sc.expect("}");
      declare([&] { m.set_relation(name, arity, tuples); });
    } else if (kw == "function") {
      auto [name, arity] = read_signature(sc);
      if (arity < 1) sc.error_at_last("function arity must be positive", Category::Model);
      sc.expect("=");
      sc.expect("[");
      std::map<Tuple, Element> entries;
      auto entry = [&]() {
        Tuple args = read_tuple(sc, arity, size);
        sc.expect("->");
        long v = sc.number();
        if (v < 0 || v >= size)
          sc.error_at_last("element " + std::to_string(v) + " out of domain", Category::Model);
        auto [it, inserted] = entries.emplace(args, static_cast<Element>(v));
        if (!inserted && it->second != v) sc.error_at_last("conflicting function values", Category::Model);
      };
      if (sc.peek() != ']') {
        entry();
        while (sc.accept(",")) entry();
      }
      sc.expect("]");
      std::vector<Element> table(m.table_size(arity), -1);
      for (const auto& [args, v] : entries) table[m.index_of(args)] = v;
      for (std::size_t idx = 0; idx < table.size(); ++idx) {
        if (table[idx] >= 0) continue;
        std::string missing;
        std::size_t rest = idx;
        std::vector<std::string> parts(static_cast<std::size_t>(arity));
        for (std::size_t i = parts.size(); i-- > 0;) {
          parts[i] = std::to_string(rest % static_cast<std::size_t>(size));
          rest /= static_cast<std::size_t>(size);
        }
        for (std::size_t i = 0; i < parts.size(); ++i) missing += (i ? "," : "") + parts[i];
        fail(lines[li].number, kw_col, kw.size(),
             "partial table for '" + name + "': no value for (" + missing + ")", Category::Model);
      }
      declare([&] { m.set_function(name, arity, table); });
    } else if (kw == "domain") {
      sc.error_at_last("duplicate 'domain' line", Category::Model);
    } else {
      sc.error_at_last("expected 'constant', 'relation' or 'function'", Category::Syntax);
    }
    if (!sc.at_end()) sc.error("trailing text");
  }
  return m;
}

std::string print_model(const Model& m) {
  std::ostringstream out;
  out << "domain " << m.size() << '\n';
  const Vocabulary& voc = m.vocabulary();
  for (const auto& c : voc.constants()) out << "constant " << c << " = " << m.constant(c) << '\n';
  auto tuple = [](const Tuple& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
    return s + ")";
  };
  for (const auto& [r, a] : voc.relations()) {
    out << "relation " << r << '/' << a << " = {";
    bool first = true;
    for (const auto& t : m.relation_tuples(r)) {
      out << (first ? "" : ", ") << tuple(t);
      first = false;
    }
    out << "}\n";
  }
  for (const auto& [f, a] : voc.functions()) {
    out << "function " << f << '/' << a << " = [";
    Tuple t(static_cast<std::size_t>(a), 0);
    for (std::size_t idx = 0; idx < m.table_size(a); ++idx) {
      std::size_t rest = idx;
      for (std::size_t i = t.size(); i-- > 0;) {
        t[i] = static_cast<Element>(rest % static_cast<std::size_t>(m.size()));
        rest /= static_cast<std::size_t>(m.size());
      }
      out << (idx ? ", " : "") << tuple(t) << "->" << m.apply(f, t);
    }
    out << "]\n";
  }
  return out.str();
}

Team parse_team(const SourceText& src, const Model& m) {
  auto lines = significant_lines(src.text);
  if (lines.empty()) fail(1, 1, 0, "empty team: expected 'vars ...'", Category::Team);
  LineScanner head(lines[0], Category::Team);
  if (head.ident() != "vars") head.error_at_last("team must start with 'vars'", Category::Team);
  std::vector<std::string> declared;
  VariableSet seen;
  while (!head.at_end()) {
    std::string v = head.ident();
    if (!seen.insert(v).second) head.error_at_last("variable '" + v + "' listed twice", Category::Team);
    if (m.vocabulary().declares(v))
      head.error_at_last("'" + v + "' is a declared symbol, not a variable", Category::Vocabulary);
    declared.push_back(v);
  }
  Team team(seen);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    LineScanner sc(lines[li], Category::Team);
    Assignment s;
    if (declared.empty()) {
      sc.expect("(");
      sc.expect(")");
    } else {
      for (const auto& v : declared) {
        if (sc.at_end())
          sc.error("row has " + std::to_string(s.size()) + " values, expected " +
                       std::to_string(declared.size()),
                   Category::Team);
        long value = sc.number();
        if (value < 0 || value >= m.size())
          sc.error_at_last("value " + std::to_string(value) + " out of domain", Category::Team);
        s[v] = static_cast<Element>(value);
      }
    }
    if (!sc.at_end())
      sc.error("row has more than " + std::to_string(declared.size()) + " values", Category::Team);
    team.insert(s);
  }
  return team;
}

std::string print_team(const Team& team) {
  std::ostringstream out;
  out << "vars";
  for (const auto& v : team.domain()) out << ' ' << v;
  out << '\n';
  for (const auto& row : team.rows()) {
    if (row.empty()) {
      out << "()\n";
      continue;
    }
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
    out << '\n';
  }
  return out.str();
}

// ------------------------------------------------------------------- proofs

namespace {

struct Word {
  std::string text;
  std::size_t begin;  // byte offset in the line
};

std::vector<Word> split_words(const std::string& s, std::size_t from) {
  std::vector<Word> out;
  std::size_t i = from;
  while (i < s.size()) {
    while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ',')) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != ',') ++j;
    out.push_back({s.substr(i, j - i), i});
    i = j;
  }
  return out;
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Proof parse_proof(const SourceText& src, const Vocabulary& voc) {
  Proof proof;
  std::map<std::size_t, std::size_t> position;  // label -> index into steps
  for (const auto& line : significant_lines(src.text)) {
    const std::string& s = line.text;
    std::size_t i = s.find_first_not_of(" \t");
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i || j >= s.size() || s[j] != '.')
      fail(line.number, i + 1, 1, "expected '<number>.' at start of step");
    std::size_t label = std::stoul(s.substr(i, j - i));
    if (position.count(label)) fail(line.number, i + 1, j - i, "duplicate step label " + std::to_string(label), Category::Reference);
    if (!proof.steps.empty() && label <= proof.steps.back().label)
      fail(line.number, i + 1, j - i, "step labels must increase", Category::Reference);

    // Scan from the right: [discharge n...] then premise numbers, then the rule.
    std::vector<Word> words = split_words(s, j + 1);
    std::size_t w = words.size();
    std::vector<std::size_t> tail_numbers;
    std::vector<const Word*> tail_words;
    while (w > 0 && all_digits(words[w - 1].text)) {
      --w;
      tail_numbers.insert(tail_numbers.begin(), std::stoul(words[w].text));
      tail_words.insert(tail_words.begin(), &words[w]);
    }
    std::vector<std::size_t> premises, discharged;
    std::vector<const Word*> premise_words, discharge_words;
    if (w > 0 && words[w - 1].text == "discharge") {
      discharged = tail_numbers;
      discharge_words = tail_words;
      --w;
      while (w > 0 && all_digits(words[w - 1].text)) {
        --w;
        premises.insert(premises.begin(), std::stoul(words[w].text));
        premise_words.insert(premise_words.begin(), &words[w]);
      }
    } else {
      premises = tail_numbers;
      premise_words = tail_words;
    }
    if (w == 0) fail(line.number, s.size() + 1, 0, "missing formula and rule name");
    const Word& rule_word = words[w - 1];
    auto rule = rule_from_name(rule_word.text);
    if (!rule)
      fail(line.number, rule_word.begin + 1, rule_word.text.size(),
           "unknown rule '" + rule_word.text + "'", Category::Rule);
    --w;
    if (w > 0 && words[w - 1].text == "by") --w;
    if (w == 0) fail(line.number, rule_word.begin + 1, rule_word.text.size(), "missing formula");
    std::size_t formula_begin = words[0].begin;
    std::size_t formula_end = words[w - 1].begin + words[w - 1].text.size();
    std::string formula_text = s.substr(formula_begin, formula_end - formula_begin);

    auto resolve = [&](const std::vector<std::size_t>& refs, const std::vector<const Word*>& ws) {
      for (std::size_t k = 0; k < refs.size(); ++k) {
        if (!position.count(refs[k])) {
          std::string msg = refs[k] >= label ? "step " + std::to_string(refs[k]) + " is not an earlier step"
                                            : "reference to missing step " + std::to_string(refs[k]);
          fail(line.number, ws[k]->begin + 1, ws[k]->text.size(), msg, Category::Reference);
        }
      }
    };
    resolve(premises, premise_words);
    resolve(discharged, discharge_words);

    Formula phi = parse_formula(SourceText{formula_text, src.origin}, voc,
                                SourceOffset{line.number, formula_begin + 1});
    position.emplace(label, proof.steps.size());
    proof.steps.push_back(ProofStep{label, phi, *rule, premises, discharged, line.number});
  }
  if (proof.steps.empty()) fail(1, 1, 0, "empty proof");
  return proof;
}

std::string print_proof(const Proof& p) {
  std::ostringstream out;
  for (const auto& st : p.steps) {
    out << st.label << ". " << print_formula(st.formula) << ' ' << rule_name(st.rule);
    for (auto q : st.premises) out << ' ' << q;
    if (!st.discharged.empty()) {
      out << " discharge";
      for (auto q : st.discharged) out << ' ' << q;
    }
    out << '\n';
  }
  return out.str();
}

std::vector<Formula> parse_formula_list(const SourceText& src, const Vocabulary& voc) {
  std::vector<Formula> out;
  for (const auto& line : significant_lines(src.text))
    out.push_back(parse_formula(SourceText{line.text, src.origin}, voc, SourceOffset{line.number, 1}));
  return out;
}

}  // namespace deplogic
