#pragma once

#include <cstdint>
#include <random>

#include "dfd/models.hpp"

namespace dfd {

using Rng = std::mt19937_64;

struct GenOptions {
  Dialect dialect = Dialect::Core;
  int term_depth = 1;     // maximal ○ nesting inside terms
  int formula_depth = 3;  // maximal connective nesting
  int max_set = 2;        // maximal size of dependence subscripts
  bool formula_next = true;
  bool identity = false;
  bool functions = false;
  // Restrict identities to plain variables.
  bool identity_vars_only = false;
};

// Options matching what a dialect admits.
GenOptions options_for(Dialect d, int term_depth, int formula_depth);

Term random_term(Rng& rng, const Vocabulary& voc, const GenOptions& o);
TermSet random_termset(Rng& rng, const Vocabulary& voc, const GenOptions& o);
Formula random_formula(Rng& rng, const Vocabulary& voc, const GenOptions& o);
Formula random_atom(Rng& rng, const Vocabulary& voc, const GenOptions& o);

// Variables x, y, z, u, ... and the given predicates and functions.
Vocabulary make_vocabulary(int variables,
                           const std::map<std::string, int>& predicates = {},
                           const std::map<std::string, int>& functions = {});

// Values are integers in [0, range); rows are pairwise distinct, g is
// uniform, predicate extensions and function tables are random.
DynamicalModel random_dynamical(Rng& rng, const Vocabulary& voc, int states,
                                int range);

// `chains` disjoint chains with times 0..horizon (the last state truncated)
// plus `cycle_states` states arranged in one or two cycles.
DynamicalModel random_timed(Rng& rng, const Vocabulary& voc, int chains,
                            int horizon, int cycle_states, int range);

// Random ∼_v, a g preserving ∼_V, and class-coherent atoms up to
// atom_depth.
StandardRelationalModel random_standard(Rng& rng, const Vocabulary& voc,
                                        int worlds, int classes,
                                        int atom_depth);

// Chain that reaches a self-loop after `chain` steps; variable x takes
// distinct values on the chain and a constant value on the loop.
DynamicalModel chain_into_loop(int chain);

int uniform(Rng& rng, int lo, int hi);  // inclusive bounds
bool coin(Rng& rng, double p = 0.5);

}  // namespace dfd
