#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dfd/models.hpp"
#include "dfd/transform.hpp"

namespace dfd {

// Optional record of which rewrite clause fired at each node.
using Trace = std::vector<std::string>;

// Pushes formula-level ○ onto the variables; the result has no Next node.
Formula eliminate_next(Formula f, Trace* trace = nullptr);

// Tr into functional LFD over lfdf_signature(voc). Throws
// InputHasFormulaNext when f still contains formula-level ○.
Formula tr_to_lfdf(Formula f, const LfdfSignature& sig,
                   Trace* trace = nullptr);
Term tr_term(Term t, const LfdfSignature& sig);

// Adds the time variable to every dependence subscript.
Formula rho(Formula f, const std::string& time_var);
// Removes it again; throws InvalidArgument outside the range of rho.
Formula rho_inverse(Formula f, const std::string& time_var);

// Equivalence relations on n elements as restricted growth strings, in
// lexicographic order.
std::vector<std::vector<int>> equivalence_relations(int n);

// χ_E over `vars`, with E given as a class label per variable.
Formula chi(const std::vector<std::string>& vars,
            const std::vector<int>& classes);

// T_E: rename each variable to the first variable of its class, then
// decide identities syntactically.
Formula eliminate_identity(Formula f, const std::vector<std::string>& vars,
                           const std::vector<int>& classes,
                           Trace* trace = nullptr);
// T(φ): disjunction of T_E(φ) over all E.
Formula eliminate_identity(Formula f, const std::vector<std::string>& vars,
                           Trace* trace = nullptr);
// ⋁_E (T_E(φ) ∧ χ_E), equivalent to φ.
Formula identity_case_split(Formula f, const std::vector<std::string>& vars);

struct Flattened {
  Formula body;  // functional terms replaced by fresh variables
  std::vector<std::pair<std::string, Term>> definitions;  // w_i := f(args)
  Formula constraints;  // D[] dep[args] w_i for every definition
  Vocabulary voc;       // input vocabulary plus the fresh variables
};

// Replaces complex functional terms by fresh variables w1, w2, ...,
// innermost first.
Flattened flatten_functions(Formula f, const Vocabulary& voc);

}  // namespace dfd
