#include "dfd/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace dfd {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

std::string to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Lexical: return "LexicalError";
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::EmptyDependenceSet: return "EmptyDependenceSet";
    case ErrorCode::IdentityNotInDialect: return "IdentityNotInDialect";
    case ErrorCode::FunctionNotInDialect: return "FunctionNotInDialect";
    case ErrorCode::InvalidVocabulary: return "InvalidVocabulary";
    case ErrorCode::DepthBoundExceeded: return "DepthBoundExceeded";
    case ErrorCode::NotTimed: return "NotTimed";
    case ErrorCode::InputHasFormulaNext: return "InputHasFormulaNext";
    case ErrorCode::AlreadyMentionsTimeVariable:
      return "AlreadyMentionsTimeVariable";
    case ErrorCode::UnboundSlot: return "UnboundSlot";
    case ErrorCode::DialectViolation: return "DialectViolation";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Internal: return "InternalInvariantViolation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> position)
    : std::runtime_error(
          to_string(code) + ": " + message +
          (position ? " (at offset " + std::to_string(*position) + ")" : "")),
      code_(code),
      position_(position) {}

std::string to_string(Dialect d) {
  switch (d) {
    case Dialect::Core: return "core";
    case Dialect::NonEmpty: return "nonempty";
    case Dialect::Timed: return "timed";
    case Dialect::TimedFuncId: return "timed-func-id";
  }
  return "core";
}

Dialect dialect_from_string(std::string_view s) {
  if (s == "core" || s == "dfd") return Dialect::Core;
  if (s == "nonempty" || s == "dfd-ne") return Dialect::NonEmpty;
  if (s == "timed" || s == "dfd-t") return Dialect::Timed;
  if (s == "timed-func-id" || s == "dfd-tfi") return Dialect::TimedFuncId;
  throw Error(ErrorCode::InvalidArgument,
              "unknown dialect '" + std::string(s) + "'");
}

// ---------------------------------------------------------------- Vocabulary

bool Vocabulary::is_variable(std::string_view s) const {
  return variable_index(s) >= 0;
}
bool Vocabulary::is_predicate(std::string_view s) const {
  return predicates.count(std::string(s)) > 0;
}
bool Vocabulary::is_function(std::string_view s) const {
  return functions.count(std::string(s)) > 0;
}
int Vocabulary::variable_index(std::string_view s) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i] == s) return static_cast<int>(i);
  return -1;
}

namespace {

bool is_reserved(const std::string& s) {
  return s == "D" || s == "dep" || s == "true" || s == "false";
}

void check_symbol(const std::string& s) {
  if (s.empty())
    throw Error(ErrorCode::InvalidVocabulary, "empty symbol");
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    throw Error(ErrorCode::InvalidVocabulary,
                "symbol '" + s + "' must start with a letter");
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
      throw Error(ErrorCode::InvalidVocabulary,
                  "symbol '" + s + "' contains '" + std::string(1, c) + "'");
  // A leading 'O' is read as the next-time operator.
  if (s[0] == 'O')
    throw Error(ErrorCode::InvalidVocabulary,
                "symbol '" + s + "' may not start with 'O'");
  if (is_reserved(s))
    throw Error(ErrorCode::InvalidVocabulary,
                "symbol '" + s + "' is reserved");
}

}  // namespace

void Vocabulary::validate() const {
  if (variables.empty())
    throw Error(ErrorCode::InvalidVocabulary, "at least one variable needed");
  std::set<std::string> seen;
  auto note = [&](const std::string& s) {
    check_symbol(s);
    if (!seen.insert(s).second)
      throw Error(ErrorCode::InvalidVocabulary, "duplicate symbol '" + s + "'");
  };
  for (const auto& v : variables) note(v);
  for (const auto& [p, a] : predicates) {
    note(p);
    if (a < 0) throw Error(ErrorCode::InvalidVocabulary, "negative arity");
  }
  for (const auto& [f, a] : functions) {
    note(f);
    if (a < 0) throw Error(ErrorCode::InvalidVocabulary, "negative arity");
  }
}

// ---------------------------------------------------------------- interning

struct TermNode {
  Term::Kind kind;
  std::string symbol;
  std::vector<Term> args;
  std::size_t hash;
  int depth;
  std::string text;
  std::uint32_t id;
};

struct FormulaNode {
  Formula::Kind kind;
  bool value;
  std::string symbol;
  std::vector<Term> terms;
  TermSet termset;
  std::vector<Formula> kids;
  std::size_t hash;
  int depth;
  std::size_t size;
  std::uint32_t id;
  std::string text;
  int prec;
};

namespace {

std::size_t term_key_hash(Term::Kind kind, std::string_view symbol,
                          const std::vector<Term>& args) {
  std::size_t h = std::hash<int>()(static_cast<int>(kind));
  h = mix(h, std::hash<std::string_view>()(symbol));
  for (Term a : args) h = mix(h, a.id());
  return h;
}

}  // namespace

class TermFactory {
 public:
  static TermFactory& instance() {
    static TermFactory f;
    return f;
  }

  Term make(Term::Kind kind, std::string_view symbol, std::vector<Term> args) {
    std::size_t h = term_key_hash(kind, symbol, args);
    std::lock_guard<std::mutex> lock(mu_);
    auto range = table_.equal_range(h);
    for (auto it = range.first; it != range.second; ++it) {
      const TermNode* n = it->second;
      if (n->kind == kind && n->symbol == symbol && n->args == args)
        return Term(n);
    }
    TermNode& n = nodes_.emplace_back();
    n.kind = kind;
    n.symbol = std::string(symbol);
    n.args = std::move(args);
    n.hash = h;
    n.id = static_cast<std::uint32_t>(nodes_.size());
    switch (kind) {
      case Term::Kind::Var:
        n.depth = 0;
        n.text = n.symbol;
        break;
      case Term::Kind::Next:
        n.depth = n.args[0].depth() + 1;
        n.text = "O" + n.args[0].str();
        break;
      case Term::Kind::App: {
        n.depth = 0;
        std::string s = n.symbol;
        if (!n.args.empty()) {
          s += "(";
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) s += ",";
            s += n.args[i].str();
            n.depth = std::max(n.depth, n.args[i].depth());
          }
          s += ")";
        }
        n.text = s;
        break;
      }
    }
    table_.emplace(h, &n);
    return Term(&n);
  }

 private:
  std::mutex mu_;
  std::deque<TermNode> nodes_;
  std::unordered_multimap<std::size_t, const TermNode*> table_;
};

Term Term::var(std::string_view name) {
  return TermFactory::instance().make(Kind::Var, name, {});
}
Term Term::next(Term t) {
  return TermFactory::instance().make(Kind::Next, "", {t});
}
Term Term::next(Term t, int n) {
  for (int i = 0; i < n; ++i) t = next(t);
  return t;
}
Term Term::app(std::string_view fn, const std::vector<Term>& args) {
  return TermFactory::instance().make(Kind::App, fn, args);
}

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::symbol() const { return node_->symbol; }
Term Term::operand() const { return node_->args.at(0); }
const std::vector<Term>& Term::args() const { return node_->args; }
int Term::depth() const { return node_->depth; }
const std::string& Term::str() const { return node_->text; }
std::size_t Term::hash() const { return node_->hash; }
std::uint32_t Term::id() const { return node_->id; }

std::optional<std::pair<std::string, int>> Term::as_shifted_var() const {
  int n = 0;
  Term t = *this;
  while (t.kind() == Kind::Next) {
    t = t.operand();
    ++n;
  }
  if (t.kind() != Kind::Var) return std::nullopt;
  return std::make_pair(t.symbol(), n);
}

bool term_less(Term a, Term b) {
  if (a == b) return false;
  if (a.depth() != b.depth()) return a.depth() < b.depth();
  return a.str() < b.str();
}

// ---------------------------------------------------------------- TermSet

TermSet::TermSet(std::vector<Term> terms) : terms_(std::move(terms)) {
  std::sort(terms_.begin(), terms_.end(), term_less);
  terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
  hash_ = 0x51ed27;
  for (Term t : terms_) hash_ = mix(hash_, t.id());
}

TermSet::TermSet(std::initializer_list<Term> terms)
    : TermSet(std::vector<Term>(terms)) {}

bool TermSet::contains(Term t) const {
  return std::binary_search(terms_.begin(), terms_.end(), t, term_less);
}

bool TermSet::subset_of(const TermSet& other) const {
  return std::includes(other.terms_.begin(), other.terms_.end(),
                       terms_.begin(), terms_.end(), term_less);
}

TermSet TermSet::with(Term t) const {
  auto v = terms_;
  v.push_back(t);
  return TermSet(std::move(v));
}

TermSet TermSet::united(const TermSet& other) const {
  auto v = terms_;
  v.insert(v.end(), other.terms_.begin(), other.terms_.end());
  return TermSet(std::move(v));
}

int TermSet::depth() const {
  int d = 0;
  for (Term t : terms_) d = std::max(d, t.depth());
  return d;
}

std::string TermSet::str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) s += ",";
    s += terms_[i].str();
  }
  return s + "]";
}

bool operator<(const TermSet& a, const TermSet& b) {
  return std::lexicographical_compare(a.terms_.begin(), a.terms_.end(),
                                      b.terms_.begin(), b.terms_.end(),
                                      term_less);
}

// ---------------------------------------------------------------- Formula

namespace {
void compute_text(FormulaNode& n);
}  // namespace

class FormulaFactory {
 public:
  static FormulaFactory& instance() {
    static FormulaFactory f;
    return f;
  }

  Formula make(Formula::Kind kind, bool value, std::string_view symbol,
               std::vector<Term> terms, TermSet termset,
               std::vector<Formula> kids) {
    std::size_t h = std::hash<int>()(static_cast<int>(kind) * 2 + value);
    h = mix(h, std::hash<std::string_view>()(symbol));
    for (Term t : terms) h = mix(h, t.id());
    h = mix(h, termset.hash());
    for (Formula k : kids) h = mix(h, k.id());
    std::lock_guard<std::mutex> lock(mu_);
    auto range = table_.equal_range(h);
    for (auto it = range.first; it != range.second; ++it) {
      const FormulaNode* n = it->second;
      if (n->kind == kind && n->value == value && n->symbol == symbol &&
          n->terms == terms && n->termset == termset && n->kids == kids)
        return Formula(n);
    }
    FormulaNode& n = nodes_.emplace_back();
    n.kind = kind;
    n.value = value;
    n.symbol = std::string(symbol);
    n.terms = std::move(terms);
    n.termset = std::move(termset);
    n.kids = std::move(kids);
    n.hash = h;
    n.id = static_cast<std::uint32_t>(nodes_.size());
    int d = 0;
    for (Term t : n.terms) d = std::max(d, t.depth());
    d = std::max(d, n.termset.depth());
    std::size_t size = 1;
    for (Formula k : n.kids) {
      d = std::max(d, k.depth());
      size += k.size();
    }
    if (kind == Formula::Kind::Next) d = n.kids[0].depth() + 1;
    n.depth = d;
    n.size = size;
    compute_text(n);
    table_.emplace(h, &n);
    return Formula(&n);
  }

 private:
  std::mutex mu_;
  std::deque<FormulaNode> nodes_;
  std::unordered_multimap<std::size_t, const FormulaNode*> table_;
};

namespace {
FormulaFactory& ff() { return FormulaFactory::instance(); }
}  // namespace

Formula Formula::constant(bool value) {
  return ff().make(Kind::Const, value, "", {}, {}, {});
}
Formula Formula::pred(std::string_view p, const std::vector<Term>& args) {
  return ff().make(Kind::Pred, false, p, args, {}, {});
}
Formula Formula::ident(Term a, Term b) {
  return ff().make(Kind::Ident, false, "", {a, b}, {}, {});
}
Formula Formula::negate(Formula f) {
  return ff().make(Kind::Not, false, "", {}, {}, {f});
}
Formula Formula::conj(Formula a, Formula b) {
  return ff().make(Kind::And, false, "", {}, {}, {a, b});
}
Formula Formula::next(Formula f) {
  return ff().make(Kind::Next, false, "", {}, {}, {f});
}
Formula Formula::next(Formula f, int n) {
  for (int i = 0; i < n; ++i) f = next(f);
  return f;
}
Formula Formula::dep_mod(const TermSet& xs, Formula f) {
  return ff().make(Kind::DepMod, false, "", {}, xs, {f});
}
Formula Formula::dep_atom(const TermSet& xs, Term y) {
  return ff().make(Kind::DepAtom, false, "", {y}, xs, {});
}
Formula Formula::disj(Formula a, Formula b) {
  return negate(conj(negate(a), negate(b)));
}
Formula Formula::implies(Formula a, Formula b) {
  return negate(conj(a, negate(b)));
}
Formula Formula::iff(Formula a, Formula b) {
  return conj(implies(a, b), implies(b, a));
}
Formula Formula::conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return constant(true);
  Formula r = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) r = conj(r, fs[i]);
  return r;
}
Formula Formula::disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return constant(false);
  Formula r = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) r = disj(r, fs[i]);
  return r;
}

Formula::Kind Formula::kind() const { return node_->kind; }
bool Formula::value() const { return node_->value; }
const std::string& Formula::symbol() const { return node_->symbol; }
const std::vector<Term>& Formula::terms() const { return node_->terms; }
const TermSet& Formula::termset() const { return node_->termset; }
Formula Formula::child(std::size_t i) const { return node_->kids.at(i); }
Term Formula::dep_target() const { return node_->terms.at(0); }
int Formula::depth() const { return node_->depth; }
std::size_t Formula::hash() const { return node_->hash; }
std::uint32_t Formula::id() const { return node_->id; }
std::size_t Formula::size() const { return node_->size; }


// ---------------------------------------------------------------- render

std::string render(Term t) { return t.str(); }

namespace {

enum Prec { kImp = 1, kOr = 2, kAnd = 3, kUnary = 4, kAtom = 5 };

std::string wrap(const std::string& s, int prec, int ctx) {
  return prec < ctx ? "(" + s + ")" : s;
}

}  // namespace

std::string render_at(Formula f, int ctx);

class FormulaText {
 public:
  static const std::string& text(Formula f) { return f.node_->text; }
  static int prec(Formula f) { return f.node_->prec; }
};

std::string render_at(Formula f, int ctx) {
  return wrap(FormulaText::text(f), FormulaText::prec(f), ctx);
}

namespace {

void compute_text(FormulaNode& n) {
  using K = Formula::Kind;
  auto set = [&](std::string s, int p) {
    n.text = std::move(s);
    n.prec = p;
  };
  switch (n.kind) {
    case K::Const:
      set(n.value ? "true" : "false", kAtom);
      return;
    case K::Pred: {
      std::string s = n.symbol;
      if (!n.terms.empty()) {
        s += "(";
        for (std::size_t i = 0; i < n.terms.size(); ++i) {
          if (i) s += ",";
          s += n.terms[i].str();
        }
        s += ")";
      }
      set(std::move(s), kAtom);
      return;
    }
    case K::Ident:
      set(n.terms[0].str() + " == " + n.terms[1].str(), kAtom);
      return;
    case K::Not: {
      Formula c = n.kids[0];
      if (c.kind() == K::And) {
        Formula a = c.child(0), b = c.child(1);
        if (a.kind() == K::Not && b.kind() == K::Not) {
          set(render_at(a.child(), kOr) + " | " + render_at(b.child(), kAnd),
              kOr);
          return;
        }
        if (b.kind() == K::Not) {
          set(render_at(a, kOr) + " -> " + render_at(b.child(), kImp), kImp);
          return;
        }
      }
      set("!" + render_at(c, kUnary), kUnary);
      return;
    }
    case K::And:
      set(render_at(n.kids[0], kAnd) + " & " + render_at(n.kids[1], kUnary),
          kAnd);
      return;
    case K::Next: {
      Formula c = n.kids[0];
      // A bare identity after O would be read as a term-level O.
      if (c.kind() == K::Ident)
        set("O (" + render_at(c, 0) + ")", kUnary);
      else
        set("O " + render_at(c, kUnary), kUnary);
      return;
    }
    case K::DepMod:
      set("D" + n.termset.str() + " " + render_at(n.kids[0], kUnary), kUnary);
      return;
    case K::DepAtom:
      set("dep" + n.termset.str() + " " + n.terms[0].str(), kAtom);
      return;
  }
}

}  // namespace

std::string render(Formula f) { return FormulaText::text(f); }

bool FormulaLess::operator()(Formula a, Formula b) const {
  if (a == b) return false;
  if (a.depth() != b.depth()) return a.depth() < b.depth();
  if (a.size() != b.size()) return a.size() < b.size();
  return FormulaText::text(a) < FormulaText::text(b);
}


// ---------------------------------------------------------------- parser

namespace {

enum class Tok {
  Ident, LParen, RParen, LBrack, RBrack, Comma, Bang, Amp, Bar, Arrow,
  DArrow, EqEq, Next, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) ||
                              s[i] == '_'))
        ++i;
      std::string word(s.substr(start, i - start));
      std::size_t k = 0;
      while (k < word.size() && word[k] == 'O') {
        out.push_back({Tok::Next, "O", start + k});
        ++k;
      }
      if (k < word.size()) out.push_back({Tok::Ident, word.substr(k), start + k});
      continue;
    }
    auto two = s.substr(i, 2);
    if (s.substr(i, 3) == "<->") {
      out.push_back({Tok::DArrow, "<->", start});
      i += 3;
    } else if (two == "->") {
      out.push_back({Tok::Arrow, "->", start});
      i += 2;
    } else if (two == "==") {
      out.push_back({Tok::EqEq, "==", start});
      i += 2;
    } else {
      Tok k;
      switch (c) {
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '[': k = Tok::LBrack; break;
        case ']': k = Tok::RBrack; break;
        case ',': k = Tok::Comma; break;
        case '!': k = Tok::Bang; break;
        case '&': k = Tok::Amp; break;
        case '|': k = Tok::Bar; break;
        default:
          throw Error(ErrorCode::Lexical,
                      "unexpected character '" + std::string(1, c) + "'",
                      start);
      }
      out.push_back({k, std::string(1, c), start});
      ++i;
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const Vocabulary& voc, Dialect d)
      : toks_(lex(text)), voc_(voc), dialect_(d) {}

  Formula formula_eof() {
    Formula f = iff();
    expect(Tok::End, "end of input");
    return f;
  }

  Term term_eof() {
    Term t = term();
    expect(Tok::End, "end of input");
    return t;
  }

  TermSet termset_eof() {
    TermSet xs = termset();
    expect(Tok::End, "end of input");
    return xs;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& advance() { return toks_[pos_++]; }

  void expect(Tok k, const char* what) {
    if (!at(k))
      throw Error(ErrorCode::Syntax,
                  std::string("expected ") + what + " but found '" +
                      (at(Tok::End) ? std::string("end of input")
                                    : peek().text) +
                      "'",
                  peek().pos);
    advance();
  }

  Formula iff() {
    Formula f = imp();
    while (at(Tok::DArrow)) {
      advance();
      f = Formula::iff(f, imp());
    }
    return f;
  }

  Formula imp() {
    Formula f = disj();
    if (at(Tok::Arrow)) {
      advance();
      return Formula::implies(f, imp());
    }
    return f;
  }

  Formula disj() {
    Formula f = conj();
    while (at(Tok::Bar)) {
      advance();
      f = Formula::disj(f, conj());
    }
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (at(Tok::Amp)) {
      advance();
      f = Formula::conj(f, unary());
    }
    return f;
  }

  bool is_keyword(const char* kw) const {
    return at(Tok::Ident) && peek().text == kw;
  }

  Formula unary() {
    if (at(Tok::Bang)) {
      advance();
      return Formula::negate(unary());
    }
    if (at(Tok::Next)) {
      std::size_t save = pos_;
      std::optional<Term> lhs;
      try {
        lhs = term();
      } catch (const Error&) {
        lhs.reset();
      }
      if (lhs && at(Tok::EqEq)) return identity_rest(*lhs, toks_[save].pos);
      pos_ = save;
      advance();
      return Formula::next(unary());
    }
    if (is_keyword("D") && peek(1).kind == Tok::LBrack) {
      advance();
      TermSet xs = termset();
      return Formula::dep_mod(xs, unary());
    }
    return atom();
  }

  Formula identity_rest(Term lhs, std::size_t pos) {
    advance();  // '=='
    if (dialect_ != Dialect::TimedFuncId)
      throw Error(ErrorCode::IdentityNotInDialect,
                  "'==' is only available in the timed-func-id dialect", pos);
    Term rhs = term();
    return Formula::ident(lhs, rhs);
  }

  Formula atom() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      advance();
      Formula f = iff();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind != Tok::Ident)
      throw Error(ErrorCode::Syntax,
                  "expected a formula but found '" +
                      (t.kind == Tok::End ? std::string("end of input")
                                          : t.text) +
                      "'",
                  t.pos);
    if (t.text == "dep" && peek(1).kind == Tok::LBrack) {
      advance();
      TermSet xs = termset();
      Term y = term();
      return Formula::dep_atom(xs, y);
    }
    if (t.text == "true" || t.text == "false") {
      advance();
      return Formula::constant(t.text == "true");
    }
    if (voc_.is_predicate(t.text)) {
      std::string name = t.text;
      std::size_t pos = t.pos;
      advance();
      std::vector<Term> args;
      if (at(Tok::LParen)) args = arglist();
      int arity = voc_.predicates.at(name);
      if (static_cast<int>(args.size()) != arity)
        throw Error(ErrorCode::ArityMismatch,
                    "predicate " + name + " expects " + std::to_string(arity) +
                        " arguments, got " + std::to_string(args.size()),
                    pos);
      return Formula::pred(name, args);
    }
    std::size_t pos = t.pos;
    Term lhs = term();
    if (!at(Tok::EqEq))
      throw Error(ErrorCode::Syntax,
                  "a term must be followed by '==' in formula position",
                  peek().pos);
    return identity_rest(lhs, pos);
  }

  std::vector<Term> arglist() {
    expect(Tok::LParen, "'('");
    std::vector<Term> args;
    if (!at(Tok::RParen)) {
      args.push_back(term());
      while (at(Tok::Comma)) {
        advance();
        args.push_back(term());
      }
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  TermSet termset() {
    std::size_t pos = peek().pos;
    expect(Tok::LBrack, "'['");
    std::vector<Term> ts;
    if (!at(Tok::RBrack)) {
      ts.push_back(term());
      while (at(Tok::Comma)) {
        advance();
        ts.push_back(term());
      }
    }
    expect(Tok::RBrack, "']'");
    if (ts.empty() && dialect_ == Dialect::NonEmpty)
      throw Error(ErrorCode::EmptyDependenceSet,
                  "empty dependence set in the nonempty dialect", pos);
    return TermSet(std::move(ts));
  }

  Term term() {
    const Token& t = peek();
    if (t.kind == Tok::Next) {
      advance();
      return Term::next(term());
    }
    if (t.kind != Tok::Ident)
      throw Error(ErrorCode::Syntax, "expected a term", t.pos);
    if (voc_.is_variable(t.text)) {
      advance();
      return Term::var(t.text);
    }
    if (voc_.is_function(t.text)) {
      std::string name = t.text;
      std::size_t pos = t.pos;
      if (dialect_ != Dialect::TimedFuncId)
        throw Error(ErrorCode::FunctionNotInDialect,
                    "function symbols need the timed-func-id dialect", pos);
      advance();
      std::vector<Term> args;
      if (at(Tok::LParen)) args = arglist();
      int arity = voc_.functions.at(name);
      if (static_cast<int>(args.size()) != arity)
        throw Error(ErrorCode::ArityMismatch,
                    "function " + name + " expects " + std::to_string(arity) +
                        " arguments, got " + std::to_string(args.size()),
                    pos);
      return Term::app(name, args);
    }
    if (voc_.is_predicate(t.text))
      throw Error(ErrorCode::Syntax,
                  "predicate '" + t.text + "' used as a term", t.pos);
    throw Error(ErrorCode::UnknownSymbol, "unknown symbol '" + t.text + "'",
                t.pos);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Vocabulary& voc_;
  Dialect dialect_;
};

}  // namespace

Formula parse_formula(std::string_view text, const Vocabulary& voc,
                      Dialect dialect) {
  return Parser(text, voc, dialect).formula_eof();
}

Term parse_term(std::string_view text, const Vocabulary& voc,
                Dialect dialect) {
  return Parser(text, voc, dialect).term_eof();
}

TermSet parse_termset(std::string_view text, const Vocabulary& voc,
                      Dialect dialect) {
  return Parser(text, voc, dialect).termset_eof();
}

std::vector<Formula> parse_formula_lines(std::string_view text,
                                         const Vocabulary& voc,
                                         Dialect dialect) {
  std::vector<Formula> out;
  std::size_t start = 0, offset = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    bool blank = std::all_of(line.begin(), line.end(), [](char c) {
      return std::isspace(static_cast<unsigned char>(c));
    });
    if (!blank) {
      try {
        out.push_back(parse_formula(line, voc, dialect));
      } catch (const Error& e) {
        throw Error(e.code(), e.what(),
                    offset + e.position().value_or(0));
      }
    }
    offset = end + 1;
    start = end + 1;
    if (end == text.size()) break;
  }
  return out;
}

// ---------------------------------------------------------------- checks

namespace {

bool term_has_function(Term t) {
  switch (t.kind()) {
    case Term::Kind::Var: return false;
    case Term::Kind::Next: return term_has_function(t.operand());
    case Term::Kind::App: return true;
  }
  return false;
}

template <typename F>
void visit(Formula f, F&& fn) {
  fn(f);
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Not:
    case K::Next:
    case K::DepMod:
      visit(f.child(), fn);
      break;
    case K::And:
      visit(f.child(0), fn);
      visit(f.child(1), fn);
      break;
    default:
      break;
  }
}

void check_term(Term t, const Vocabulary& voc, Dialect d) {
  switch (t.kind()) {
    case Term::Kind::Var:
      if (!voc.is_variable(t.symbol()))
        throw Error(ErrorCode::UnknownSymbol,
                    "unknown variable '" + t.symbol() + "'");
      break;
    case Term::Kind::Next:
      check_term(t.operand(), voc, d);
      break;
    case Term::Kind::App: {
      if (d != Dialect::TimedFuncId)
        throw Error(ErrorCode::FunctionNotInDialect,
                    "function symbol '" + t.symbol() + "' outside timed-func-id");
      auto it = voc.functions.find(t.symbol());
      if (it == voc.functions.end())
        throw Error(ErrorCode::UnknownSymbol,
                    "unknown function '" + t.symbol() + "'");
      if (it->second != static_cast<int>(t.args().size()))
        throw Error(ErrorCode::ArityMismatch, "arity of " + t.symbol());
      for (Term a : t.args()) check_term(a, voc, d);
      break;
    }
  }
}

}  // namespace

bool valid_in(Formula f, Dialect d) {
  bool ok = true;
  visit(f, [&](Formula g) {
    using K = Formula::Kind;
    if (d != Dialect::TimedFuncId) {
      if (g.kind() == K::Ident) ok = false;
      for (Term t : g.terms())
        if (term_has_function(t)) ok = false;
      for (Term t : g.termset())
        if (term_has_function(t)) ok = false;
    }
    if (d == Dialect::NonEmpty &&
        (g.kind() == K::DepMod || g.kind() == K::DepAtom) &&
        g.termset().empty())
      ok = false;
  });
  return ok;
}

void check_formula(Formula f, const Vocabulary& voc, Dialect d) {
  visit(f, [&](Formula g) {
    using K = Formula::Kind;
    switch (g.kind()) {
      case K::Pred: {
        auto it = voc.predicates.find(g.symbol());
        if (it == voc.predicates.end())
          throw Error(ErrorCode::UnknownSymbol,
                      "unknown predicate '" + g.symbol() + "'");
        if (it->second != static_cast<int>(g.terms().size()))
          throw Error(ErrorCode::ArityMismatch, "arity of " + g.symbol());
        break;
      }
      case K::Ident:
        if (d != Dialect::TimedFuncId)
          throw Error(ErrorCode::IdentityNotInDialect,
                      "identity outside timed-func-id");
        break;
      case K::DepMod:
      case K::DepAtom:
        if (d == Dialect::NonEmpty && g.termset().empty())
          throw Error(ErrorCode::EmptyDependenceSet,
                      "empty dependence set in the nonempty dialect");
        for (Term t : g.termset()) check_term(t, voc, d);
        break;
      default:
        break;
    }
    for (Term t : g.terms()) check_term(t, voc, d);
  });
}

// ---------------------------------------------------------------- algorithms

int temporal_depth(Term t) { return t.depth(); }
int temporal_depth(const TermSet& xs) { return xs.depth(); }
int temporal_depth(Formula f) { return f.depth(); }
int temporal_depth(const FormulaSet& fs) {
  int d = 0;
  for (Formula f : fs) d = std::max(d, f.depth());
  return d;
}

Term next_shift(Term t, int n) {
  if (n == 0) return t;
  switch (t.kind()) {
    case Term::Kind::Var: return Term::next(t, n);
    case Term::Kind::Next: return Term::next(next_shift(t.operand(), n));
    case Term::Kind::App: {
      std::vector<Term> args;
      for (Term a : t.args()) args.push_back(next_shift(a, n));
      return Term::app(t.symbol(), args);
    }
  }
  return t;
}

TermSet next_shift(const TermSet& xs, int n) {
  std::vector<Term> out;
  for (Term t : xs) out.push_back(next_shift(t, n));
  return TermSet(std::move(out));
}

namespace {

template <typename TermFn>
Formula map_terms(Formula f, TermFn&& tf) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Const: return f;
    case K::Pred: {
      std::vector<Term> args;
      for (Term t : f.terms()) args.push_back(tf(t));
      return Formula::pred(f.symbol(), args);
    }
    case K::Ident: return Formula::ident(tf(f.terms()[0]), tf(f.terms()[1]));
    case K::Not: return Formula::negate(map_terms(f.child(), tf));
    case K::And:
      return Formula::conj(map_terms(f.child(0), tf),
                           map_terms(f.child(1), tf));
    case K::Next: return Formula::next(map_terms(f.child(), tf));
    case K::DepMod: {
      std::vector<Term> xs;
      for (Term t : f.termset()) xs.push_back(tf(t));
      return Formula::dep_mod(TermSet(std::move(xs)),
                              map_terms(f.child(), tf));
    }
    case K::DepAtom: {
      std::vector<Term> xs;
      for (Term t : f.termset()) xs.push_back(tf(t));
      return Formula::dep_atom(TermSet(std::move(xs)), tf(f.dep_target()));
    }
  }
  return f;
}

}  // namespace

Formula next_shift(Formula f, int n) {
  if (n == 0) return f;
  return map_terms(f, [n](Term t) { return next_shift(t, n); });
}

Term strip_next(Term t) {
  switch (t.kind()) {
    case Term::Kind::Var: return t;
    case Term::Kind::Next: return strip_next(t.operand());
    case Term::Kind::App: {
      std::vector<Term> args;
      for (Term a : t.args()) args.push_back(strip_next(a));
      return Term::app(t.symbol(), args);
    }
  }
  return t;
}

TermSet strip_next(const TermSet& xs) {
  std::vector<Term> out;
  for (Term t : xs) out.push_back(strip_next(t));
  return TermSet(std::move(out));
}

Formula strip_next(Formula f) {
  Formula g = map_terms(f, [](Term t) { return strip_next(t); });
  // Remove formula-level ○ in a second pass.
  std::function<Formula(Formula)> go = [&](Formula h) -> Formula {
    using K = Formula::Kind;
    switch (h.kind()) {
      case K::Next: return go(h.child());
      case K::Not: return Formula::negate(go(h.child()));
      case K::And: return Formula::conj(go(h.child(0)), go(h.child(1)));
      case K::DepMod: return Formula::dep_mod(h.termset(), go(h.child()));
      default: return h;
    }
  };
  return go(g);
}

std::vector<Formula> subformulas(Formula f) {
  std::vector<Formula> out;
  std::unordered_set<Formula, FormulaHash> seen;
  visit(f, [&](Formula g) {
    if (seen.insert(g).second) out.push_back(g);
  });
  return out;
}

bool is_subformula(Formula sub, Formula f) {
  bool found = false;
  visit(f, [&](Formula g) {
    if (g == sub) found = true;
  });
  return found;
}

bool is_generalized_subformula(Formula sub, Formula f) {
  return is_subformula(strip_next(sub), strip_next(f));
}

std::set<std::string> variables_of(Term t) {
  std::set<std::string> out;
  std::function<void(Term)> go = [&](Term u) {
    switch (u.kind()) {
      case Term::Kind::Var: out.insert(u.symbol()); break;
      case Term::Kind::Next: go(u.operand()); break;
      case Term::Kind::App:
        for (Term a : u.args()) go(a);
        break;
    }
  };
  go(t);
  return out;
}

std::set<std::string> variables_of(Formula f) {
  std::set<std::string> out;
  visit(f, [&](Formula g) {
    for (Term t : g.terms()) out.merge(variables_of(t));
    for (Term t : g.termset()) out.merge(variables_of(t));
  });
  return out;
}

bool mentions_functions(Formula f) {
  bool found = false;
  visit(f, [&](Formula g) {
    for (Term t : g.terms()) found = found || term_has_function(t);
    for (Term t : g.termset()) found = found || term_has_function(t);
  });
  return found;
}

bool has_formula_next(Formula f) {
  bool found = false;
  visit(f, [&](Formula g) {
    if (g.kind() == Formula::Kind::Next) found = true;
  });
  return found;
}

bool has_identity(Formula f) {
  bool found = false;
  visit(f, [&](Formula g) {
    if (g.kind() == Formula::Kind::Ident) found = true;
  });
  return found;
}

Term substitute(Term t, const std::map<std::string, Term>& sigma) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = sigma.find(t.symbol());
      return it == sigma.end() ? t : it->second;
    }
    case Term::Kind::Next: return Term::next(substitute(t.operand(), sigma));
    case Term::Kind::App: {
      std::vector<Term> args;
      for (Term a : t.args()) args.push_back(substitute(a, sigma));
      return Term::app(t.symbol(), args);
    }
  }
  return t;
}

Formula substitute(Formula f, const std::map<std::string, Term>& sigma) {
  return map_terms(f, [&](Term t) { return substitute(t, sigma); });
}

TermUniverse term_universe(const std::vector<std::string>& variables,
                           int depth) {
  TermUniverse u;
  u.variables = variables;
  u.depth = depth;
  std::vector<Term> ts;
  for (const auto& v : variables)
    for (int n = 0; n <= depth; ++n) ts.push_back(Term::next(Term::var(v), n));
  TermSet canon(std::move(ts));
  u.terms = canon.terms();
  return u;
}

TermUniverse term_universe(const FormulaSet& fs) {
  std::set<std::string> vars;
  for (Formula f : fs) vars.merge(variables_of(f));
  return term_universe(std::vector<std::string>(vars.begin(), vars.end()),
                       temporal_depth(fs));
}

std::vector<TermSet> nonempty_subsets(const std::vector<Term>& terms) {
  if (terms.size() > 20)
    throw Error(ErrorCode::InvalidArgument, "term universe too large");
  std::vector<TermSet> out;
  std::uint32_t n = static_cast<std::uint32_t>(terms.size());
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<Term> ts;
    for (std::uint32_t i = 0; i < n; ++i)
      if (mask & (1u << i)) ts.push_back(terms[i]);
    out.emplace_back(std::move(ts));
  }
  return out;
}

FormulaSet closure(const FormulaSet& psi,
                   const std::vector<std::string>& variables) {
  const int k = temporal_depth(psi);
  std::vector<std::string> vars = variables;
  if (vars.empty()) {
    std::set<std::string> vs;
    for (Formula f : psi) vs.merge(variables_of(f));
    vars.assign(vs.begin(), vs.end());
  }
  for (Formula f : psi) {
    if (!valid_in(f, Dialect::NonEmpty))
      throw Error(ErrorCode::DialectViolation,
                  "closure needs nonempty-dialect formulas: " + render(f));
  }
  TermUniverse u = term_universe(vars, k);
  std::vector<TermSet> ys = nonempty_subsets(u.terms);

  std::unordered_set<Formula, FormulaHash> phi;
  std::vector<Formula> work;
  auto add = [&](Formula f) {
    if (f.depth() > k) return;
    if (phi.insert(f).second) work.push_back(f);
  };
  for (Formula f : psi) add(f);
  for (const TermSet& y : ys)
    for (const TermSet& x : ys)
      for (Term t : u.terms) add(Formula::dep_mod(y, Formula::dep_atom(x, t)));

  constexpr std::size_t kLimit = 4'000'000;
  using K = Formula::Kind;
  while (!work.empty()) {
    Formula f = work.back();
    work.pop_back();
    if (phi.size() > kLimit)
      throw Error(ErrorCode::InvalidArgument, "closure exceeds size limit");
    if (f.kind() != K::Not) add(Formula::negate(f));
    switch (f.kind()) {
      case K::Not:
      case K::Next:
      case K::DepMod:
        add(f.child());
        break;
      case K::And:
        add(f.child(0));
        add(f.child(1));
        break;
      default:
        break;
    }
    if (f.depth() + 1 <= k) add(Formula::next(f));
    if (f.kind() == K::Pred && !f.terms().empty()) {
      bool all_next = std::all_of(f.terms().begin(), f.terms().end(),
                                  [](Term t) {
                                    return t.kind() == Term::Kind::Next;
                                  });
      if (all_next) {
        std::vector<Term> inner;
        for (Term t : f.terms()) inner.push_back(t.operand());
        add(Formula::next(Formula::pred(f.symbol(), inner)));
      }
    }
    if (f.kind() == K::Next && f.child().kind() == K::Pred &&
        !f.child().terms().empty()) {
      std::vector<Term> shifted;
      for (Term t : f.child().terms()) shifted.push_back(Term::next(t));
      add(Formula::pred(f.child().symbol(), shifted));
    }
    if (f.kind() == K::Next || f.kind() == K::Pred)
      for (const TermSet& y : ys) add(Formula::dep_mod(y, f));
  }
  return FormulaSet(phi.begin(), phi.end());
}

}  // namespace dfd
