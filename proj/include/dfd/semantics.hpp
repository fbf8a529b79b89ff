#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <unordered_map>
#include <vector>

#include "dfd/models.hpp"

namespace dfd {

// What the evaluator needs from a model: worlds, successor, the agreement
// relation for a term set, atom truth and global identity.
class Structure {
 public:
  virtual ~Structure() = default;
  virtual int size() const = 0;
  virtual int successor(int w) const = 0;
  virtual Partition relation(const TermSet& xs) const = 0;
  virtual bool pred(Formula atom, int w) const = 0;
  // Models that treat D_Xy as primitive return its truth here.
  virtual std::optional<bool> dep_atom(const TermSet& xs, Term y,
                                       int w) const;
  virtual bool identity(Term a, Term b) const = 0;
};

// Memoizing evaluator. Truth values are computed for all worlds at once and
// cached per formula; agreement relations are cached per term set. The model
// must outlive the evaluator.
class Evaluator {
 public:
  static Evaluator dynamical(const DynamicalModel& m);
  static Evaluator timed(const DynamicalModel& m, const TimingMap& tau);
  static Evaluator standard(const StandardRelationalModel& m);
  static Evaluator general(const GeneralRelationalModel& m);
  static Evaluator lfdf(const LfdFModel& m);

  explicit Evaluator(std::shared_ptr<Structure> s);

  int size() const { return structure_->size(); }
  bool eval(Formula f, int w);
  const std::vector<char>& truth(Formula f);
  const Partition& relation(const TermSet& xs);
  bool valid(Formula f);
  std::optional<int> counterexample(Formula f);

 private:
  std::shared_ptr<Structure> structure_;
  std::unordered_map<std::uint32_t, std::vector<char>> truth_;
  std::unordered_map<TermSet, Partition, TermSetHash> relations_;
};

bool eval_dynamical(const DynamicalModel& m, int s, Formula f);
bool eval_standard(const StandardRelationalModel& m, int s, Formula f);
bool eval_general(const GeneralRelationalModel& m, int s, Formula f);
bool eval_timed(const DynamicalModel& m, const TimingMap& tau, int s,
                Formula f);
// Computes the timing map first; throws NotTimed when there is none.
bool eval_timed(const DynamicalModel& m, int s, Formula f);
bool eval_lfdf(const LfdFModel& m, int member, Formula f);

bool valid_on_model(const DynamicalModel& m, Formula f);
std::optional<int> find_countermodel_state(const DynamicalModel& m,
                                           Formula f);

// Two states that agree on xs but not on y, when dep[xs] y fails.
std::optional<std::pair<int, int>> dependence_counterexample(
    const DynamicalModel& m, const TermSet& xs, Term y);

// Agreement relation =_X computed without any caching, for cross-checks.
Partition naive_agreement(const DynamicalModel& m, const TermSet& xs);

}  // namespace dfd
