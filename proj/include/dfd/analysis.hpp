#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dfd/models.hpp"

namespace dfd {

struct Orbit {
  std::vector<int> prefix;
  std::vector<int> cycle;
};

Orbit orbit(const DynamicalModel& m, int s);

// Finite(n) when n is set; Infinite otherwise.
struct Rank {
  std::optional<int> n;
  bool finite() const { return n.has_value(); }
  std::string str() const;
  friend bool operator==(const Rank&, const Rank&) = default;
};

// States of the form gⁿ(s), as a membership vector.
std::vector<bool> image_after(const DynamicalModel& m, int n);

Rank rank(const DynamicalModel& m, const TermSet& xs);
Rank rank(const DynamicalModel& m, Term x);
std::optional<Value> eventual_value(const DynamicalModel& m, Term x);

struct Stability {
  bool absolute = false;
  std::vector<bool> relative;  // per state
};
Stability stability(const DynamicalModel& m, Term x);

// Edges used by timing analysis: g(s) for every state that is not marked
// truncated.
bool real_edge(const DynamicalModel& m, int s);

struct TimingResult {
  TimingMap map;               // meaningful only when timed()
  std::optional<int> witness;  // a state with unequal maximal histories
  bool timed() const { return !witness.has_value(); }
};

TimingResult timing_map(const DynamicalModel& m);
Partition synchronicity(const DynamicalModel& m, const TimingMap& tau);
// Checks the two synchronicity conditions for an arbitrary equivalence.
bool satisfies_synchronicity_conditions(const DynamicalModel& m,
                                        const Partition& rel);

// Steps along real edges before a truncated state is reached; nullopt when
// the future never hits one.
std::vector<std::optional<int>> future_horizon(const DynamicalModel& m);
// States where every formula of temporal depth <= depth has the same timed
// truth value as in the untruncated system: all states synchronous with s,
// or k steps later, see at least depth - k further real steps.
std::vector<bool> reliable_states(const DynamicalModel& m,
                                  const TimingMap& tau, int depth);

struct Classification {
  bool timed = false;
  bool temporal = false;
  bool linear_time = false;
  bool finite_past = false;
};
Classification classify(const DynamicalModel& m);

struct VariableProfile {
  bool fixed = false;
  std::optional<int> eventually_fixed_at;
  std::optional<int> period;
  std::optional<std::pair<int, int>> eventual_period;
  friend bool operator==(const VariableProfile&,
                         const VariableProfile&) = default;
};

// By direct iteration of values.
VariableProfile variable_profile_iterative(const DynamicalModel& m, Term x,
                                           int max_steps);
// By model checking the identity characterizations, e.g. ○ⁿ⁺¹x ≡ ○ⁿx.
VariableProfile variable_profile_formulas(const DynamicalModel& m, Term x,
                                          int max_steps);
// Runs both and throws Internal if they disagree.
VariableProfile variable_profile(const DynamicalModel& m, Term x,
                                 int max_steps);

}  // namespace dfd
