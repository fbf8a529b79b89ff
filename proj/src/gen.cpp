#include "dfd/gen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

namespace dfd {

int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

GenOptions options_for(Dialect d, int term_depth, int formula_depth) {
  GenOptions o;
  o.dialect = d;
  o.term_depth = term_depth;
  o.formula_depth = formula_depth;
  o.identity = d == Dialect::TimedFuncId;
  o.functions = d == Dialect::TimedFuncId;
  return o;
}

namespace {

bool allows_empty(const GenOptions& o) {
  return o.dialect != Dialect::NonEmpty;
}

Term random_var(Rng& rng, const Vocabulary& voc) {
  return Term::var(voc.variables[uniform(rng, 0, voc.variables.size() - 1)]);
}

Term random_term_at(Rng& rng, const Vocabulary& voc, const GenOptions& o,
                    int depth_left, int fuel) {
  if (o.functions && !voc.functions.empty() && fuel > 0 && coin(rng, 0.3)) {
    auto it = voc.functions.begin();
    std::advance(it, uniform(rng, 0, voc.functions.size() - 1));
    std::vector<Term> args;
    for (int i = 0; i < it->second; ++i)
      args.push_back(random_term_at(rng, voc, o, depth_left, fuel - 1));
    return Term::app(it->first, args);
  }
  int n = uniform(rng, 0, std::max(0, depth_left));
  return Term::next(random_var(rng, voc), n);
}

}  // namespace

Term random_term(Rng& rng, const Vocabulary& voc, const GenOptions& o) {
  return random_term_at(rng, voc, o, o.term_depth, 1);
}

TermSet random_termset(Rng& rng, const Vocabulary& voc, const GenOptions& o) {
  int lo = allows_empty(o) ? 0 : 1;
  int k = uniform(rng, lo, std::max(lo, o.max_set));
  std::vector<Term> ts;
  for (int i = 0; i < k; ++i) ts.push_back(random_term(rng, voc, o));
  return TermSet(ts);
}

Formula random_atom(Rng& rng, const Vocabulary& voc, const GenOptions& o) {
  if (voc.predicates.empty())
    throw Error(ErrorCode::InvalidArgument, "vocabulary has no predicates");
  auto it = voc.predicates.begin();
  std::advance(it, uniform(rng, 0, voc.predicates.size() - 1));
  std::vector<Term> args;
  for (int i = 0; i < it->second; ++i) args.push_back(random_term(rng, voc, o));
  return Formula::pred(it->first, args);
}

Formula random_formula(Rng& rng, const Vocabulary& voc, const GenOptions& o) {
  std::function<Formula(int)> go = [&](int depth) -> Formula {
    // Leaves: predicate atoms, dependence atoms, identities.
    auto leaf = [&]() -> Formula {
      int choice = uniform(rng, 0, 9);
      if (o.identity && choice >= 8) {
        if (o.identity_vars_only)
          return Formula::ident(random_var(rng, voc), random_var(rng, voc));
        return Formula::ident(random_term(rng, voc, o),
                              random_term(rng, voc, o));
      }
      if (choice < 5 && !voc.predicates.empty())
        return random_atom(rng, voc, o);
      TermSet xs = random_termset(rng, voc, o);
      return Formula::dep_atom(xs, random_term(rng, voc, o));
    };
    if (depth <= 0 || coin(rng, 0.25)) return leaf();
    switch (uniform(rng, 0, o.formula_next ? 4 : 3)) {
      case 0:
        return Formula::negate(go(depth - 1));
      case 1:
        return Formula::conj(go(depth - 1), go(depth - 1));
      case 2:
        return coin(rng) ? Formula::implies(go(depth - 1), go(depth - 1))
                         : Formula::disj(go(depth - 1), go(depth - 1));
      case 3:
        return Formula::dep_mod(random_termset(rng, voc, o), go(depth - 1));
      default:
        return Formula::next(go(depth - 1));
    }
  };
  return go(o.formula_depth);
}

Vocabulary make_vocabulary(int variables,
                           const std::map<std::string, int>& predicates,
                           const std::map<std::string, int>& functions) {
  static const char* names[] = {"x", "y", "z", "u", "v", "w", "p", "q"};
  if (variables < 1 || variables > 8)
    throw Error(ErrorCode::InvalidArgument, "between 1 and 8 variables");
  Vocabulary voc;
  for (int i = 0; i < variables; ++i) voc.variables.push_back(names[i]);
  voc.predicates = predicates;
  voc.functions = functions;
  voc.validate();
  return voc;
}

namespace {

void all_tuples(int range, int arity,
                const std::function<void(const ValueTuple&)>& fn) {
  ValueTuple cur(arity, Value{std::int64_t{0}});
  std::function<void(int)> rec = [&](int i) {
    if (i == arity) {
      fn(cur);
      return;
    }
    for (int v = 0; v < range; ++v) {
      cur[i] = std::int64_t{v};
      rec(i + 1);
    }
  };
  rec(0);
}

void random_interpretation(Rng& rng, DynamicalModel& m, int range) {
  for (const auto& [p, arity] : m.voc.predicates) {
    auto& ext = m.pred[p];
    all_tuples(range, arity, [&](const ValueTuple& t) {
      if (coin(rng)) ext.insert(t);
    });
  }
  for (const auto& [f, arity] : m.voc.functions) {
    auto& table = m.func[f];
    all_tuples(range, arity, [&](const ValueTuple& t) {
      table[t] = std::int64_t{uniform(rng, 0, range - 1)};
    });
  }
}

// `count` distinct rows of width n over [0, range).
std::vector<std::vector<Value>> distinct_rows(Rng& rng, int count, int n,
                                              int range) {
  double space = std::pow(static_cast<double>(range), n);
  if (space < count)
    throw Error(ErrorCode::InvalidArgument,
                "value range too small for distinct rows");
  std::set<std::vector<std::int64_t>> seen;
  std::vector<std::vector<Value>> rows;
  while (static_cast<int>(rows.size()) < count) {
    std::vector<std::int64_t> r(n);
    for (auto& v : r) v = uniform(rng, 0, range - 1);
    if (!seen.insert(r).second) continue;
    rows.emplace_back(r.begin(), r.end());
  }
  return rows;
}

}  // namespace

DynamicalModel random_dynamical(Rng& rng, const Vocabulary& voc, int states,
                                int range) {
  DynamicalModel m;
  m.voc = voc;
  m.values = distinct_rows(rng, states, voc.variables.size(), range);
  for (int s = 0; s < states; ++s) {
    m.states.push_back("s" + std::to_string(s));
    m.g.push_back(uniform(rng, 0, states - 1));
  }
  random_interpretation(rng, m, range);
  return m;
}

DynamicalModel random_timed(Rng& rng, const Vocabulary& voc, int chains,
                            int horizon, int cycle_states, int range) {
  DynamicalModel m;
  m.voc = voc;
  const int total = chains * (horizon + 1) + cycle_states;
  m.values = distinct_rows(rng, total, voc.variables.size(), range);
  m.truncated.assign(total, false);
  for (int c = 0; c < chains; ++c)
    for (int t = 0; t <= horizon; ++t) {
      int s = m.size();
      m.states.push_back("c" + std::to_string(c) + "_" + std::to_string(t));
      m.g.push_back(t < horizon ? s + 1 : s);
      m.truncated[s] = t == horizon;
    }
  if (cycle_states > 0) {
    int first = cycle_states >= 2 && coin(rng) ? uniform(rng, 1, cycle_states - 1)
                                               : cycle_states;
    int start = m.size();
    for (int i = 0; i < cycle_states; ++i) {
      int s = m.size();
      m.states.push_back("k" + std::to_string(i));
      bool in_first = i < first;
      int lo = in_first ? start : start + first;
      int hi = in_first ? start + first - 1 : start + cycle_states - 1;
      m.g.push_back(s == hi ? lo : s + 1);
    }
  }
  random_interpretation(rng, m, range);
  return m;
}

StandardRelationalModel random_standard(Rng& rng, const Vocabulary& voc,
                                        int worlds, int classes,
                                        int atom_depth) {
  StandardRelationalModel m;
  m.voc = voc;
  m.voc.functions.clear();
  m.atom_depth = atom_depth;
  for (int w = 0; w < worlds; ++w) m.worlds.push_back("w" + std::to_string(w));
  for (std::size_t v = 0; v < voc.variables.size(); ++v) {
    std::vector<int> labels(worlds);
    for (auto& l : labels) l = uniform(rng, 0, classes - 1);
    m.eqv.push_back(Partition::from_labels(labels));
  }
  Partition all = Partition::universal(worlds);
  for (const auto& p : m.eqv) all = all.meet(p);
  // Each V-class picks a target V-class; members map into it.
  std::map<int, int> target;
  std::vector<int> reps;
  for (int w = 0; w < worlds; ++w)
    if (all.rep(w) == w) reps.push_back(w);
  for (int r : reps) target[r] = reps[uniform(rng, 0, reps.size() - 1)];
  m.g.resize(worlds);
  for (int w = 0; w < worlds; ++w) {
    int tr = target[all.rep(w)];
    std::vector<int> members;
    for (int u = 0; u < worlds; ++u)
      if (all.rep(u) == tr) members.push_back(u);
    m.g[w] = members[uniform(rng, 0, members.size() - 1)];
  }
  // Predicate truth is a random function of the typed class labels.
  auto pool = term_universe(voc.variables, atom_depth).terms;
  for (const auto& [p, arity] : voc.predicates) {
    std::map<std::vector<std::pair<std::string, int>>, bool> rel;
    std::vector<Term> args;
    std::function<void()> rec = [&] {
      if (static_cast<int>(args.size()) == arity) {
        WorldSet ws(worlds, false);
        bool any = false;
        for (int w = 0; w < worlds; ++w) {
          std::vector<std::pair<std::string, int>> key;
          for (Term t : args)
            key.emplace_back(t.as_shifted_var()->first, m.term_label(t, w));
          auto it = rel.find(key);
          if (it == rel.end()) it = rel.emplace(key, coin(rng)).first;
          ws[w] = it->second;
          any = any || ws[w];
        }
        if (any) m.atoms[Formula::pred(p, args)] = ws;
        return;
      }
      for (Term t : pool) {
        args.push_back(t);
        rec();
        args.pop_back();
      }
    };
    rec();
  }
  return m;
}

DynamicalModel chain_into_loop(int chain) {
  DynamicalModel m;
  m.voc = make_vocabulary(1);
  for (int i = 0; i <= chain; ++i) {
    m.states.push_back("c" + std::to_string(i));
    m.g.push_back(i < chain ? i + 1 : i);
    m.values.push_back({Value{std::int64_t{i < chain ? i + 1 : 0}}});
  }
  return m;
}

}  // namespace dfd
