#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dfd/gen.hpp"
#include "dfd/models.hpp"

namespace dfd {

enum class SlotKind { Formula, Atom, Term, TermSet, Int };

struct Bindings {
  std::map<std::string, Formula> formulas;  // Formula and Atom slots
  std::map<std::string, Term> terms;
  std::map<std::string, TermSet> sets;
  std::map<std::string, int> ints;
};

struct Slot {
  std::string name;
  SlotKind kind;
};

struct AxiomSchema;
using SchemaBuilder = std::function<Formula(const AxiomSchema&,
                                            const Bindings&,
                                            const Vocabulary&)>;

struct AxiomSchema {
  std::string name;
  std::vector<Slot> slots;
  std::string pattern;            // human-readable template
  std::vector<Dialect> systems;   // systems that list it as an axiom
  bool derived = false;           // a derivable principle, not an axiom
  SchemaBuilder build;

  bool in(Dialect system) const;
};

// All axiom schemas followed by the derived principles.
const std::vector<AxiomSchema>& all_schemas();
const AxiomSchema& find_schema(const std::string& name);  // throws
std::vector<const AxiomSchema*> axioms_of(Dialect system);
std::vector<const AxiomSchema*> derived_principles();

// D_XY as the conjunction of D_Xy over y ∈ Y (⊤ when Y is empty).
Formula dep_all(const TermSet& xs, const TermSet& ys);

// Throws UnboundSlot, DialectViolation, or InvalidArgument when a side
// condition fails.
Formula instantiate(const AxiomSchema& schema, const Bindings& b,
                    const Vocabulary& voc, Dialect system);

// Random bindings for a schema; side conditions are respected.
Bindings random_bindings(Rng& rng, const AxiomSchema& schema,
                         const Vocabulary& voc, const GenOptions& o);

// Occurrences of t inside f, counting subterm positions in traversal order.
int count_occurrences(Formula f, Term t);
Formula replace_occurrence(Formula f, Term from, Term to, int index);

struct Justification {
  enum class Rule { Axiom, ModusPonens, DNecessitation, ONecessitation,
                    Tautology };
  Rule rule = Rule::Axiom;
  std::string schema;
  Bindings bindings;
  int premise1 = -1;  // 0-based line indices
  int premise2 = -1;
  TermSet xs;         // DNecessitation subscript
};

struct DerivationLine {
  Formula formula;
  Justification by;
};

struct Derivation {
  Vocabulary voc;
  Dialect system = Dialect::Core;
  std::vector<DerivationLine> lines;
};

struct CheckResult {
  bool ok = true;
  int line = 0;  // 1-based line of the first error
  std::string reason;
  std::string detail;
};

CheckResult check_derivation(const Derivation& d, Dialect system);
CheckResult check_derivation(const Derivation& d);

// Truth-table check over the maximal non-Boolean subformulas.
bool is_tautology(Formula f, int max_atoms = 20);

// Derivation files: {"system", "vocabulary", "lines": [{"formula", "by"}]}.
// Line references in files are 1-based.
Derivation derivation_from_json_text(const std::string& text);
std::string derivation_to_json_text(const Derivation& d);

struct Counterexample {
  std::string schema;
  std::string instance;
  int model = 0;
  std::string state;
};

struct SoundnessReport {
  int instances = 0;
  long long checks = 0;
  std::vector<Counterexample> failures;
  std::map<std::string, int> per_schema;
};

// Random validated models for a system: plain dynamical models for the
// untimed systems, timed models with cut-off chains and cycles otherwise.
// All share one vocabulary over x, y, z with P/1 and R/2 (plus f/1 and S/2
// for the function dialect) and have at most 8 states.
std::vector<DynamicalModel> soundness_suite(Dialect system, int count,
                                            std::uint64_t seed);

// Random schema instances checked on every model: dynamical semantics for
// the untimed systems, synchronized semantics at horizon-reliable states
// for the timed ones.
SoundnessReport soundness_harness(Dialect system,
                                  const std::vector<DynamicalModel>& models,
                                  int samples, int max_depth,
                                  std::uint64_t seed,
                                  bool include_derived = false);

}  // namespace dfd
