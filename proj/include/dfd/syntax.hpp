#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dfd {

enum class ErrorCode {
  Lexical,
  Syntax,
  UnknownSymbol,
  ArityMismatch,
  EmptyDependenceSet,
  IdentityNotInDialect,
  FunctionNotInDialect,
  InvalidVocabulary,
  DepthBoundExceeded,
  NotTimed,
  InputHasFormulaNext,
  AlreadyMentionsTimeVariable,
  UnboundSlot,
  DialectViolation,
  InvalidModel,
  InvalidArgument,
  Internal,
};

std::string to_string(ErrorCode code);

// Every failure in the library is reported through this exception type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> position = std::nullopt);

  ErrorCode code() const { return code_; }
  std::optional<std::size_t> position() const { return position_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> position_;
};

enum class Dialect { Core, NonEmpty, Timed, TimedFuncId };

std::string to_string(Dialect d);
Dialect dialect_from_string(std::string_view s);

struct Vocabulary {
  std::vector<std::string> variables;
  std::map<std::string, int> predicates;
  std::map<std::string, int> functions;

  bool is_variable(std::string_view s) const;
  bool is_predicate(std::string_view s) const;
  bool is_function(std::string_view s) const;
  int variable_index(std::string_view s) const;  // -1 when absent

  // Throws InvalidVocabulary on duplicate, reserved or malformed symbols.
  void validate() const;
};

struct TermNode;

// Interned term handle. Structurally equal terms share one node, so equality
// is pointer equality and copies are free.
class Term {
 public:
  enum class Kind { Var, Next, App };

  Term() = default;
  static Term var(std::string_view name);
  static Term next(Term t);
  static Term next(Term t, int n);
  static Term app(std::string_view fn, const std::vector<Term>& args);

  Kind kind() const;
  const std::string& symbol() const;       // variable or function name
  Term operand() const;                    // Next only
  const std::vector<Term>& args() const;   // App only
  int depth() const;                       // temporal depth
  const std::string& str() const;          // rendered form
  std::size_t hash() const;
  std::uint32_t id() const;
  bool valid() const { return node_ != nullptr; }

  // For ○ⁿv returns v and n; nullopt for terms containing function symbols.
  std::optional<std::pair<std::string, int>> as_shifted_var() const;

  friend bool operator==(Term a, Term b) { return a.node_ == b.node_; }
  friend bool operator!=(Term a, Term b) { return a.node_ != b.node_; }

 private:
  explicit Term(const TermNode* n) : node_(n) {}
  const TermNode* node_ = nullptr;
  friend struct TermNode;
  friend class TermFactory;
};

// Canonical term order: temporal depth first, then spelling.
bool term_less(Term a, Term b);
struct TermLess {
  bool operator()(Term a, Term b) const { return term_less(a, b); }
};

class TermSet {
 public:
  TermSet() : TermSet(std::vector<Term>{}) {}
  TermSet(std::vector<Term> terms);
  TermSet(std::initializer_list<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  bool contains(Term t) const;
  bool subset_of(const TermSet& other) const;
  TermSet with(Term t) const;
  TermSet united(const TermSet& other) const;
  int depth() const;
  std::size_t hash() const { return hash_; }
  std::string str() const;  // "[x,Ox]"

  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  friend bool operator==(const TermSet& a, const TermSet& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const TermSet& a, const TermSet& b) {
    return !(a == b);
  }
  friend bool operator<(const TermSet& a, const TermSet& b);

 private:
  std::vector<Term> terms_;
  std::size_t hash_ = 0;
};

struct FormulaNode;

class Formula {
 public:
  enum class Kind { Const, Pred, Ident, Not, And, Next, DepMod, DepAtom };

  Formula() = default;
  static Formula constant(bool value);
  static Formula pred(std::string_view p, const std::vector<Term>& args);
  static Formula ident(Term a, Term b);
  static Formula negate(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula next(Formula f);
  static Formula next(Formula f, int n);
  static Formula dep_mod(const TermSet& xs, Formula f);
  static Formula dep_atom(const TermSet& xs, Term y);

  // Derived connectives, desugared into ¬ and ∧.
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula conj_all(const std::vector<Formula>& fs);  // ⊤ when empty
  static Formula disj_all(const std::vector<Formula>& fs);  // ⊥ when empty

  Kind kind() const;
  bool value() const;                       // Const
  const std::string& symbol() const;        // Pred
  const std::vector<Term>& terms() const;   // Pred args; Ident (2); DepAtom (1)
  const TermSet& termset() const;           // DepMod / DepAtom
  Formula child(std::size_t i = 0) const;   // Not, Next, DepMod (0); And (0, 1)
  Term dep_target() const;                  // DepAtom
  int depth() const;
  std::size_t hash() const;
  std::uint32_t id() const;
  bool valid() const { return node_ != nullptr; }
  std::size_t size() const;  // node count

  friend bool operator==(Formula a, Formula b) { return a.node_ == b.node_; }
  friend bool operator!=(Formula a, Formula b) { return a.node_ != b.node_; }

 private:
  explicit Formula(const FormulaNode* n) : node_(n) {}
  const FormulaNode* node_ = nullptr;
  friend class FormulaFactory;
  friend class FormulaText;
};

// Deterministic order (by rendering) for sets of formulas.
struct FormulaLess {
  bool operator()(Formula a, Formula b) const;
};

struct FormulaHash {
  std::size_t operator()(Formula f) const { return f.hash(); }
};
struct TermHash {
  std::size_t operator()(Term t) const { return t.hash(); }
};
struct TermSetHash {
  std::size_t operator()(const TermSet& s) const { return s.hash(); }
};

using FormulaSet = std::set<Formula, FormulaLess>;

// Concrete syntax.
Formula parse_formula(std::string_view text, const Vocabulary& voc,
                      Dialect dialect);
Term parse_term(std::string_view text, const Vocabulary& voc,
                Dialect dialect);
// Term sets are written "[t1,...,tk]".
TermSet parse_termset(std::string_view text, const Vocabulary& voc,
                      Dialect dialect);
std::string render(Formula f);
std::string render(Term t);

// Reads formula files: one formula per line, '#' starts a comment.
std::vector<Formula> parse_formula_lines(std::string_view text,
                                         const Vocabulary& voc,
                                         Dialect dialect);

// Dialect and vocabulary conformance.
bool valid_in(Formula f, Dialect d);
void check_formula(Formula f, const Vocabulary& voc, Dialect d);

// Syntactic algorithms.
int temporal_depth(Term t);
int temporal_depth(const TermSet& xs);
int temporal_depth(Formula f);
int temporal_depth(const FormulaSet& fs);

Term next_shift(Term t, int n);
TermSet next_shift(const TermSet& xs, int n);
Formula next_shift(Formula f, int n);

Term strip_next(Term t);
TermSet strip_next(const TermSet& xs);
Formula strip_next(Formula f);

bool is_subformula(Formula sub, Formula f);
bool is_generalized_subformula(Formula sub, Formula f);
std::vector<Formula> subformulas(Formula f);

std::set<std::string> variables_of(Formula f);
std::set<std::string> variables_of(Term t);
bool mentions_functions(Formula f);
bool has_formula_next(Formula f);
bool has_identity(Formula f);

// Substitutes terms for basic variables everywhere (including inside ○).
Term substitute(Term t, const std::map<std::string, Term>& sigma);
Formula substitute(Formula f, const std::map<std::string, Term>& sigma);

struct TermUniverse {
  std::vector<std::string> variables;  // 𝕍
  std::vector<Term> terms;             // 𝕋, canonical order
  int depth = 0;
};

TermUniverse term_universe(const std::vector<std::string>& variables,
                           int depth);
TermUniverse term_universe(const FormulaSet& fs);

// Nonempty subsets of the universe terms, as TermSets in mask order.
std::vector<TermSet> nonempty_subsets(const std::vector<Term>& terms);

// Closure of a NonEmpty formula set under P1, P2, P4 and the finite
// generalized-subformula clause described in the README. When `variables`
// is non-empty it overrides the variables used to build 𝕋.
FormulaSet closure(const FormulaSet& psi,
                   const std::vector<std::string>& variables = {});

}  // namespace dfd
