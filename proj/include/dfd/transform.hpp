#pragma once

#include <map>
#include <string>
#include <utility>

#include "dfd/analysis.hpp"
#include "dfd/models.hpp"

namespace dfd {

// The functional LFD vocabulary used for a dynamical vocabulary V: the
// variables of V plus a time variable, one N-ary function per variable of V,
// and the original predicates and functions.
struct LfdfSignature {
  Vocabulary dfd;
  Vocabulary lfd;
  std::string time_var;
  std::map<std::string, std::string> step_fn;  // v -> f_v
};

LfdfSignature lfdf_signature(const Vocabulary& dfd);

// The ∞ object of to_lfdf; chosen to avoid clashing with model values.
Value infinity_token(const DynamicalModel& m);

// Induced standard relational model. Atoms are stored for every predicate
// over terms ○ⁿv with n <= atom_depth.
StandardRelationalModel to_standard(const DynamicalModel& m,
                                    int atom_depth = 1);

// Induced general relational model over the terms ○ⁿv with n <= depth_bound:
// relations are agreement, dependence atoms and predicate atoms are read off
// the dynamical semantics. Function symbols are dropped.
GeneralRelationalModel to_general(const DynamicalModel& m, int depth_bound,
                                  bool nonempty = true);

// Quotient by ∼_V. States and values are named after the least world of the
// class; a value of v is written "v/<world>".
DynamicalModel to_dynamical(const StandardRelationalModel& m);
// Class index of each world in the quotient.
std::vector<int> quotient_map(const StandardRelationalModel& m);

struct Unrolled {
  DynamicalModel model;
  TimingMap tau;
  std::vector<std::pair<int, int>> origin;  // (team member, time)
};

// Finite prefix of the unrolled dynamical model M↓ up to time `horizon`. The
// last layer is a truncated self-loop.
Unrolled unroll_lfdf(const LfdFModel& m, const Vocabulary& dfd, int s0,
                     int horizon);

// M⁺ for a timed dynamical model. Member i is the image of state i.
LfdFModel to_lfdf(const DynamicalModel& m, const TimingMap& tau);
// Computes the timing map first; throws NotTimed when there is none.
LfdFModel to_lfdf(const DynamicalModel& m);

}  // namespace dfd
