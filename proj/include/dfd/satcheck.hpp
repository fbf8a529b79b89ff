#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dfd/models.hpp"

namespace dfd {

// A closed formula set with its formulas indexed for bitset types.
struct ClosedSet {
  std::vector<Formula> formulas;
  std::vector<int> depth;  // td per formula
  std::unordered_map<std::uint32_t, int> index;  // formula id -> position
  std::vector<std::string> variables;            // 𝕍
  int k = 0;                                     // td of the whole set

  static ClosedSet of(Formula phi, const std::vector<std::string>& variables);
  std::optional<int> find(Formula f) const;
};

// The set of closure formulas of depth < layer true at a source state.
struct TypeAtom {
  int layer = 0;
  std::vector<char> members;  // indexed like ClosedSet::formulas
  std::vector<std::pair<int, int>> sources;  // (state, layer) pairs
  bool contains(int formula) const { return members[formula] != 0; }
  // td of the type: layer - 1, and 0 for the empty 0-type.
  int td() const { return layer == 0 ? 0 : layer - 1; }
};

// All i-types, i <= k + 1, of all states, without repetitions and ordered by
// layer and then by first source state.
std::vector<TypeAtom> extract_types(const GeneralRelationalModel& m,
                                    const ClosedSet& phi);

struct Filtration {
  ClosedSet closure;
  std::vector<TypeAtom> types;  // world i of model is types[i]
  GeneralRelationalModel model;
  // For each state s of the source model, the world of its (k+1)-type.
  std::vector<int> top_type;
};

// The filtration M† of a general relational model through the closure of
// phi over the model's variables. The model's depth bound must cover td(phi).
Filtration filtrate(const GeneralRelationalModel& m, Formula phi);

struct TruthLemmaReport {
  long long checks = 0;
  std::vector<std::string> failures;  // "world: formula (expected v)"
};
// Compares eval_general on M† with type membership for every layer formula.
TruthLemmaReport check_truth_lemma(const Filtration& f);

struct SatOptions {
  int max_states = 2;
  int budget_ms = 2000;
};

struct SatResult {
  bool sat = false;
  std::optional<GeneralRelationalModel> witness;
  int state = -1;
  bool budget_exhausted = false;
  long long candidates = 0;
  double elapsed_ms = 0;
};

// Bounded model search: general relational models induced by dynamical
// skeletons of at most max_states states. A negative answer only means no
// model was found within the bound or the budget.
SatResult bounded_sat(Formula phi, const Vocabulary& voc,
                      const SatOptions& opts);
// Vocabulary read off the formula.
SatResult bounded_sat(Formula phi, const SatOptions& opts);

}  // namespace dfd
