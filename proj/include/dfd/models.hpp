#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dfd/syntax.hpp"

namespace dfd {

using Value = std::variant<std::int64_t, std::string>;
using ValueTuple = std::vector<Value>;

std::string value_str(const Value& v);

// An equivalence relation on {0..n-1}, stored as the least member of each
// element's class.
class Partition {
 public:
  Partition() = default;
  static Partition universal(int n);
  static Partition identity(int n);
  // Elements with equal labels share a class.
  template <typename Label>
  static Partition from_labels(const std::vector<Label>& labels) {
    std::map<Label, int> first;
    Partition p;
    p.rep_.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto [it, fresh] = first.emplace(labels[i], static_cast<int>(i));
      p.rep_[i] = it->second;
    }
    return p;
  }
  // Throws InvalidModel unless the classes cover {0..n-1} disjointly.
  static Partition from_classes(const std::vector<std::vector<int>>& classes,
                                int n);

  int size() const { return static_cast<int>(rep_.size()); }
  int rep(int w) const { return rep_[w]; }
  bool same(int a, int b) const { return rep_[a] == rep_[b]; }
  std::vector<std::vector<int>> classes() const;
  Partition meet(const Partition& other) const;
  bool refines(const Partition& other) const;  // this ⊆ other
  bool is_universal() const;
  const std::vector<int>& reps() const { return rep_; }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.rep_ == b.rep_;
  }

 private:
  std::vector<int> rep_;
};

using WorldSet = std::vector<bool>;

struct Violation {
  std::string kind;
  std::string detail;
  std::vector<std::string> witnesses;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// States whose g self-loop is a boundary marker ("truncated") stand for a
// future that was cut off; "infinite_past" states stand for an unrepresented
// infinite history. Both only affect timing analysis and test horizons.
struct DynamicalModel {
  Vocabulary voc;
  std::vector<std::string> states;
  std::vector<int> g;                         // -1 marks a missing edge
  std::vector<std::vector<Value>> values;     // [state][variable]
  std::map<std::string, std::set<ValueTuple>> pred;
  std::map<std::string, std::map<ValueTuple, Value>> func;
  std::vector<bool> truncated;
  std::vector<bool> infinite_past;

  int size() const { return static_cast<int>(states.size()); }
  int state_index(const std::string& id) const;  // throws InvalidArgument
  bool is_truncated(int s) const { return !truncated.empty() && truncated[s]; }
  bool has_infinite_past(int s) const {
    return !infinite_past.empty() && infinite_past[s];
  }
  bool has_boundary_marks() const;
};

struct StandardRelationalModel {
  Vocabulary voc;
  std::vector<std::string> worlds;
  std::vector<int> g;
  std::vector<Partition> eqv;  // one per vocabulary variable
  // Atoms are stored for every predicate over terms of depth <= atom_depth;
  // atoms missing from the map have an empty extension.
  int atom_depth = 0;
  std::map<Formula, WorldSet, FormulaLess> atoms;

  int size() const { return static_cast<int>(worlds.size()); }
  int world_index(const std::string& id) const;
  // Class label of ○ⁿv at w: the ∼_v representative of gⁿ(w).
  int term_label(Term t, int w) const;
};

struct GeneralRelationalModel {
  Vocabulary voc;
  std::vector<std::string> worlds;
  std::vector<int> g;
  int depth_bound = 0;
  bool nonempty = true;        // false: Core dialect, eq[∅] stored
  std::vector<Term> universe;  // ○ⁿv, n <= depth_bound, canonical order
  std::vector<Partition> eq;   // indexed by subset mask of universe
  // dep[mask][i][w]: w ⊨ D_X universe[i] where X is given by mask.
  std::vector<std::vector<WorldSet>> dep;
  std::map<Formula, WorldSet, FormulaLess> atoms;

  int size() const { return static_cast<int>(worlds.size()); }
  int world_index(const std::string& id) const;
  // Throws DepthBoundExceeded for terms outside the universe.
  std::uint32_t mask_of(const TermSet& xs) const;
  int term_index(Term t) const;
  TermSet termset_of(std::uint32_t mask) const;
  // Allocates eq/dep for the universe of voc.variables up to depth_bound.
  void init_universe();
};

struct LfdFModel {
  Vocabulary voc;
  std::vector<Value> objects;
  std::map<std::string, std::map<ValueTuple, Value>> func;
  std::map<std::string, Value> func_default;  // value outside the table
  std::map<std::string, std::set<ValueTuple>> pred;
  std::vector<std::string> names;
  std::vector<std::vector<Value>> team;  // [member][variable]

  int size() const { return static_cast<int>(team.size()); }
  int member_index(const std::string& id) const;
  Value apply(const std::string& f, const ValueTuple& args) const;
};

// τ values; kInfinity stands for ∞.
constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max();
struct TimingMap {
  std::vector<std::int64_t> tau;
};
std::string time_str(std::int64_t t);

ValidationReport validate_dynamical(const DynamicalModel& m,
                                    int closure_rounds = 3);
ValidationReport validate_standard(const StandardRelationalModel& m);
ValidationReport validate_general(const GeneralRelationalModel& m,
                                  Dialect dialect);
ValidationReport validate_lfdf(const LfdFModel& m);

Value term_value(const DynamicalModel& m, int s, Term t);
bool agree(const DynamicalModel& m, int s, int t, const TermSet& xs);
bool agree(const StandardRelationalModel& m, int s, int t, const TermSet& xs);
bool agree(const GeneralRelationalModel& m, int s, int t, const TermSet& xs);

}  // namespace dfd
