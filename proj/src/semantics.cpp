#include "dfd/semantics.hpp"

#include <algorithm>

#include "dfd/analysis.hpp"

namespace dfd {

std::optional<bool> Structure::dep_atom(const TermSet&, Term, int) const {
  return std::nullopt;
}

namespace {

// Worlds labelled by integers per term; agreement is equality of labels.
class LabelledStructure : public Structure {
 public:
  Partition relation(const TermSet& xs) const override {
    std::vector<std::vector<int>> rows(size());
    for (Term t : xs) {
      const auto& l = labels(t);
      for (int w = 0; w < size(); ++w) rows[w].push_back(l[w]);
    }
    Partition p = Partition::from_labels(rows);
    return refine(p);
  }

  bool identity(Term a, Term b) const override {
    const auto& la = labels(a);
    const auto& lb = labels(b);
    return la == lb;
  }

 protected:
  virtual std::vector<int> compute_labels(Term t) const = 0;
  virtual Partition refine(const Partition& p) const { return p; }

  const std::vector<int>& labels(Term t) const {
    auto it = cache_.find(t.id());
    if (it != cache_.end()) return it->second;
    auto v = compute_labels(t);
    return cache_.emplace(t.id(), std::move(v)).first->second;
  }

 private:
  mutable std::unordered_map<std::uint32_t, std::vector<int>> cache_;
};

class DynamicalStructure : public LabelledStructure {
 public:
  DynamicalStructure(const DynamicalModel& m, const TimingMap* tau)
      : m_(m) {
    if (tau) {
      if (tau->tau.size() != static_cast<std::size_t>(m.size()))
        throw Error(ErrorCode::InvalidArgument, "timing map size mismatch");
      sync_ = Partition::from_labels(tau->tau);
    }
  }

  int size() const override { return m_.size(); }
  int successor(int w) const override { return m_.g[w]; }

  bool pred(Formula atom, int w) const override {
    auto pt = m_.pred.find(atom.symbol());
    if (!m_.voc.is_predicate(atom.symbol()))
      throw Error(ErrorCode::UnknownSymbol,
                  "unknown predicate '" + atom.symbol() + "'");
    if (pt == m_.pred.end()) return false;
    ValueTuple args;
    for (Term t : atom.terms()) args.push_back(values_[labels(t)[w]]);
    return pt->second.count(args) > 0;
  }

  // Identity compares actual values, which label equality captures because
  // labels are interned values.
 protected:
  std::vector<int> compute_labels(Term t) const override {
    const int n = size();
    std::vector<int> out(n);
    switch (t.kind()) {
      case Term::Kind::Var: {
        int vi = m_.voc.variable_index(t.symbol());
        if (vi < 0)
          throw Error(ErrorCode::UnknownSymbol,
                      "unknown variable '" + t.symbol() + "'");
        for (int w = 0; w < n; ++w) out[w] = intern(m_.values[w][vi]);
        break;
      }
      case Term::Kind::Next: {
        const auto& inner = labels(t.operand());
        for (int w = 0; w < n; ++w) out[w] = inner[m_.g[w]];
        break;
      }
      case Term::Kind::App: {
        auto ft = m_.func.find(t.symbol());
        if (ft == m_.func.end())
          throw Error(ErrorCode::UnknownSymbol,
                      "no interpretation for function '" + t.symbol() + "'");
        std::vector<const std::vector<int>*> args;
        for (Term a : t.args()) args.push_back(&labels(a));
        for (int w = 0; w < n; ++w) {
          ValueTuple tuple;
          for (auto* a : args) tuple.push_back(values_[(*a)[w]]);
          auto it = ft->second.find(tuple);
          if (it == ft->second.end())
            throw Error(ErrorCode::InvalidModel,
                        "function " + t.symbol() + " undefined on a value");
          out[w] = intern(it->second);
        }
        break;
      }
    }
    return out;
  }

  Partition refine(const Partition& p) const override {
    return sync_ ? p.meet(*sync_) : p;
  }

 private:
  int intern(const Value& v) const {
    auto [it, fresh] = ids_.emplace(v, static_cast<int>(values_.size()));
    if (fresh) values_.push_back(v);
    return it->second;
  }

  const DynamicalModel& m_;
  std::optional<Partition> sync_;
  mutable std::map<Value, int> ids_;
  mutable std::vector<Value> values_;
};

class StandardStructure : public LabelledStructure {
 public:
  explicit StandardStructure(const StandardRelationalModel& m) : m_(m) {}
  int size() const override { return m_.size(); }
  int successor(int w) const override { return m_.g[w]; }

  bool pred(Formula atom, int w) const override {
    for (Term t : atom.terms())
      if (t.depth() > m_.atom_depth)
        throw Error(ErrorCode::DepthBoundExceeded,
                    "atom " + render(atom) + " exceeds the stored depth");
    auto it = m_.atoms.find(atom);
    return it != m_.atoms.end() && it->second[w];
  }

  bool identity(Term, Term) const override {
    throw Error(ErrorCode::IdentityNotInDialect,
                "standard relational models do not interpret identity");
  }

 protected:
  std::vector<int> compute_labels(Term t) const override {
    std::vector<int> out(size());
    for (int w = 0; w < size(); ++w) out[w] = m_.term_label(t, w);
    return out;
  }

 private:
  const StandardRelationalModel& m_;
};

class GeneralStructure : public Structure {
 public:
  explicit GeneralStructure(const GeneralRelationalModel& m) : m_(m) {}
  int size() const override { return m_.size(); }
  int successor(int w) const override { return m_.g[w]; }
  Partition relation(const TermSet& xs) const override {
    return m_.eq[m_.mask_of(xs)];
  }
  std::optional<bool> dep_atom(const TermSet& xs, Term y,
                               int w) const override {
    return m_.dep[m_.mask_of(xs)][m_.term_index(y)][w];
  }
  bool pred(Formula atom, int w) const override {
    for (Term t : atom.terms()) m_.term_index(t);
    auto it = m_.atoms.find(atom);
    return it != m_.atoms.end() && it->second[w];
  }
  bool identity(Term, Term) const override {
    throw Error(ErrorCode::IdentityNotInDialect,
                "general relational models do not interpret identity");
  }

 private:
  const GeneralRelationalModel& m_;
};

class LfdStructure : public LabelledStructure {
 public:
  explicit LfdStructure(const LfdFModel& m) : m_(m) {}
  int size() const override { return m_.size(); }
  int successor(int) const override {
    throw Error(ErrorCode::InputHasFormulaNext,
                "LFD models have no next-time operator");
  }
  bool pred(Formula atom, int w) const override {
    if (!m_.voc.is_predicate(atom.symbol()))
      throw Error(ErrorCode::UnknownSymbol,
                  "unknown predicate '" + atom.symbol() + "'");
    auto pt = m_.pred.find(atom.symbol());
    if (pt == m_.pred.end()) return false;
    ValueTuple args;
    for (Term t : atom.terms()) args.push_back(values_[labels(t)[w]]);
    return pt->second.count(args) > 0;
  }

 protected:
  std::vector<int> compute_labels(Term t) const override {
    const int n = size();
    std::vector<int> out(n);
    switch (t.kind()) {
      case Term::Kind::Var: {
        int vi = m_.voc.variable_index(t.symbol());
        if (vi < 0)
          throw Error(ErrorCode::UnknownSymbol,
                      "unknown variable '" + t.symbol() + "'");
        for (int w = 0; w < n; ++w) out[w] = intern(m_.team[w][vi]);
        break;
      }
      case Term::Kind::Next:
        throw Error(ErrorCode::InputHasFormulaNext,
                    "LFD terms cannot contain the next-time operator");
      case Term::Kind::App: {
        if (!m_.voc.is_function(t.symbol()))
          throw Error(ErrorCode::UnknownSymbol,
                      "unknown function '" + t.symbol() + "'");
        std::vector<const std::vector<int>*> args;
        for (Term a : t.args()) args.push_back(&labels(a));
        for (int w = 0; w < n; ++w) {
          ValueTuple tuple;
          for (auto* a : args) tuple.push_back(values_[(*a)[w]]);
          out[w] = intern(m_.apply(t.symbol(), tuple));
        }
        break;
      }
    }
    return out;
  }

 private:
  int intern(const Value& v) const {
    auto [it, fresh] = ids_.emplace(v, static_cast<int>(values_.size()));
    if (fresh) values_.push_back(v);
    return it->second;
  }

  const LfdFModel& m_;
  mutable std::map<Value, int> ids_;
  mutable std::vector<Value> values_;
};

}  // namespace

Evaluator::Evaluator(std::shared_ptr<Structure> s) : structure_(std::move(s)) {}

Evaluator Evaluator::dynamical(const DynamicalModel& m) {
  return Evaluator(std::make_shared<DynamicalStructure>(m, nullptr));
}
Evaluator Evaluator::timed(const DynamicalModel& m, const TimingMap& tau) {
  return Evaluator(std::make_shared<DynamicalStructure>(m, &tau));
}
Evaluator Evaluator::standard(const StandardRelationalModel& m) {
  return Evaluator(std::make_shared<StandardStructure>(m));
}
Evaluator Evaluator::general(const GeneralRelationalModel& m) {
  return Evaluator(std::make_shared<GeneralStructure>(m));
}
Evaluator Evaluator::lfdf(const LfdFModel& m) {
  return Evaluator(std::make_shared<LfdStructure>(m));
}

const Partition& Evaluator::relation(const TermSet& xs) {
  auto it = relations_.find(xs);
  if (it != relations_.end()) return it->second;
  return relations_.emplace(xs, structure_->relation(xs)).first->second;
}

const std::vector<char>& Evaluator::truth(Formula f) {
  auto it = truth_.find(f.id());
  if (it != truth_.end()) return it->second;
  const int n = size();
  std::vector<char> out(n);
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Const:
      std::fill(out.begin(), out.end(), f.value());
      break;
    case K::Pred:
      for (int w = 0; w < n; ++w) out[w] = structure_->pred(f, w);
      break;
    case K::Ident:
      std::fill(out.begin(), out.end(),
                structure_->identity(f.terms()[0], f.terms()[1]));
      break;
    case K::Not: {
      const auto& c = truth(f.child());
      for (int w = 0; w < n; ++w) out[w] = !c[w];
      break;
    }
    case K::And: {
      const auto a = truth(f.child(0));
      const auto& b = truth(f.child(1));
      for (int w = 0; w < n; ++w) out[w] = a[w] && b[w];
      break;
    }
    case K::Next: {
      const auto& c = truth(f.child());
      for (int w = 0; w < n; ++w) out[w] = c[structure_->successor(w)];
      break;
    }
    case K::DepMod: {
      const auto c = truth(f.child());
      const Partition& p = relation(f.termset());
      std::vector<char> all(n, 1);
      for (int w = 0; w < n; ++w)
        if (!c[w]) all[p.rep(w)] = 0;
      for (int w = 0; w < n; ++w) out[w] = all[p.rep(w)];
      break;
    }
    case K::DepAtom: {
      if (structure_->dep_atom(f.termset(), f.dep_target(), 0)) {
        for (int w = 0; w < n; ++w)
          out[w] = *structure_->dep_atom(f.termset(), f.dep_target(), w);
        break;
      }
      const Partition& p = relation(f.termset());
      const Partition& py = relation(TermSet{f.dep_target()});
      // A class determines y iff all its members share one y-class.
      std::vector<int> yrep(n, -1);
      std::vector<char> ok(n, 1);
      for (int w = 0; w < n; ++w) {
        int r = p.rep(w);
        if (yrep[r] == -1)
          yrep[r] = py.rep(w);
        else if (yrep[r] != py.rep(w))
          ok[r] = 0;
      }
      for (int w = 0; w < n; ++w) out[w] = ok[p.rep(w)];
      break;
    }
  }
  return truth_.emplace(f.id(), std::move(out)).first->second;
}

bool Evaluator::eval(Formula f, int w) {
  if (w < 0 || w >= size())
    throw Error(ErrorCode::InvalidArgument, "state index out of range");
  return truth(f)[w];
}

bool Evaluator::valid(Formula f) { return !counterexample(f).has_value(); }

std::optional<int> Evaluator::counterexample(Formula f) {
  const auto& t = truth(f);
  for (int w = 0; w < size(); ++w)
    if (!t[w]) return w;
  return std::nullopt;
}

bool eval_dynamical(const DynamicalModel& m, int s, Formula f) {
  return Evaluator::dynamical(m).eval(f, s);
}
bool eval_standard(const StandardRelationalModel& m, int s, Formula f) {
  return Evaluator::standard(m).eval(f, s);
}
bool eval_general(const GeneralRelationalModel& m, int s, Formula f) {
  return Evaluator::general(m).eval(f, s);
}
bool eval_timed(const DynamicalModel& m, const TimingMap& tau, int s,
                Formula f) {
  return Evaluator::timed(m, tau).eval(f, s);
}
bool eval_timed(const DynamicalModel& m, int s, Formula f) {
  auto tm = timing_map(m);
  if (!tm.timed())
    throw Error(ErrorCode::NotTimed,
                "model has no timing map (witness " +
                    m.states[*tm.witness] + ")");
  return eval_timed(m, tm.map, s, f);
}
bool eval_lfdf(const LfdFModel& m, int member, Formula f) {
  return Evaluator::lfdf(m).eval(f, member);
}

bool valid_on_model(const DynamicalModel& m, Formula f) {
  return Evaluator::dynamical(m).valid(f);
}

std::optional<int> find_countermodel_state(const DynamicalModel& m,
                                           Formula f) {
  return Evaluator::dynamical(m).counterexample(f);
}

Partition naive_agreement(const DynamicalModel& m, const TermSet& xs) {
  const int n = m.size();
  std::vector<int> label(n);
  for (int s = 0; s < n; ++s) {
    label[s] = s;
    for (int t = 0; t < s; ++t)
      if (agree(m, s, t, xs)) {
        label[s] = label[t];
        break;
      }
  }
  return Partition::from_labels(label);
}

std::optional<std::pair<int, int>> dependence_counterexample(
    const DynamicalModel& m, const TermSet& xs, Term y) {
  Partition rel = naive_agreement(m, xs);
  for (int s = 0; s < m.size(); ++s) {
    int r = rel.rep(s);
    if (r != s && term_value(m, s, y) != term_value(m, r, y))
      return std::make_pair(r, s);
  }
  return std::nullopt;
}

}  // namespace dfd
