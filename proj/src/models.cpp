#include "dfd/models.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace dfd {

std::string value_str(const Value& v) {
  if (std::holds_alternative<std::int64_t>(v))
    return std::to_string(std::get<std::int64_t>(v));
  return std::get<std::string>(v);
}

std::string time_str(std::int64_t t) {
  return t == kInfinity ? "inf" : std::to_string(t);
}

// ---------------------------------------------------------------- Partition

Partition Partition::universal(int n) {
  Partition p;
  p.rep_.assign(n, 0);
  return p;
}

Partition Partition::identity(int n) {
  Partition p;
  p.rep_.resize(n);
  for (int i = 0; i < n; ++i) p.rep_[i] = i;
  return p;
}

Partition Partition::from_classes(const std::vector<std::vector<int>>& classes,
                                  int n) {
  std::vector<int> label(n, -1);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (int w : classes[c]) {
      if (w < 0 || w >= n)
        throw Error(ErrorCode::InvalidModel, "partition member out of range");
      if (label[w] != -1)
        throw Error(ErrorCode::InvalidModel,
                    "partition classes overlap at element " +
                        std::to_string(w));
      label[w] = static_cast<int>(c);
    }
  }
  for (int w = 0; w < n; ++w)
    if (label[w] == -1)
      throw Error(ErrorCode::InvalidModel,
                  "partition misses element " + std::to_string(w));
  return from_labels(label);
}

std::vector<std::vector<int>> Partition::classes() const {
  std::map<int, std::vector<int>> by_rep;
  for (int i = 0; i < size(); ++i) by_rep[rep_[i]].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [r, members] : by_rep) out.push_back(std::move(members));
  return out;
}

Partition Partition::meet(const Partition& other) const {
  std::vector<std::pair<int, int>> labels(rep_.size());
  for (std::size_t i = 0; i < rep_.size(); ++i)
    labels[i] = {rep_[i], other.rep_[i]};
  return from_labels(labels);
}

bool Partition::refines(const Partition& other) const {
  for (int i = 0; i < size(); ++i)
    if (!other.same(i, rep_[i])) return false;
  return true;
}

bool Partition::is_universal() const {
  return std::all_of(rep_.begin(), rep_.end(), [](int r) { return r == 0; });
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::ostringstream os;
  const Violation& v = violations.front();
  os << "violation(" << v.kind;
  for (const auto& w : v.witnesses) os << ", " << w;
  os << ")";
  if (!v.detail.empty()) os << ": " << v.detail;
  return os.str();
}

namespace {

int index_of(const std::vector<std::string>& ids, const std::string& id) {
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return static_cast<int>(i);
  throw Error(ErrorCode::InvalidArgument, "unknown state '" + id + "'");
}

std::string tuple_str(const ValueTuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += value_str(t[i]);
  }
  return s + ")";
}

ValidationReport fail(std::string kind, std::string detail,
                      std::vector<std::string> witnesses = {}) {
  ValidationReport r;
  r.violations.push_back(
      {std::move(kind), std::move(detail), std::move(witnesses)});
  return r;
}

// Checks ids are distinct and g is a total function on them.
std::optional<ValidationReport> check_frame(
    const std::vector<std::string>& ids, const std::vector<int>& g) {
  if (ids.empty()) return fail("NonEmpty", "no states");
  std::set<std::string> seen;
  for (const auto& id : ids)
    if (!seen.insert(id).second)
      return fail("DuplicateState", "state listed twice", {id});
  if (g.size() != ids.size())
    return fail("TotalFunction", "g has the wrong number of entries");
  for (std::size_t s = 0; s < g.size(); ++s)
    if (g[s] < 0 || g[s] >= static_cast<int>(ids.size()))
      return fail("TotalFunction", "g undefined", {ids[s]});
  return std::nullopt;
}

bool valid_reps(const Partition& p) {
  return Partition::from_labels(p.reps()) == p;
}

// All tuples of length n over the given universe.
void for_each_tuple(const std::vector<Term>& universe, int n,
                    const std::function<void(const std::vector<Term>&)>& fn) {
  std::vector<Term> cur(n);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      fn(cur);
      return;
    }
    for (Term t : universe) {
      cur[i] = t;
      rec(i + 1);
    }
  };
  rec(0);
}

}  // namespace

// ---------------------------------------------------------------- Dynamical

int DynamicalModel::state_index(const std::string& id) const {
  return index_of(states, id);
}

bool DynamicalModel::has_boundary_marks() const {
  return std::find(truncated.begin(), truncated.end(), true) !=
             truncated.end() ||
         std::find(infinite_past.begin(), infinite_past.end(), true) !=
             infinite_past.end();
}

ValidationReport validate_dynamical(const DynamicalModel& m,
                                    int closure_rounds) {
  try {
    m.voc.validate();
  } catch (const Error& e) {
    return fail("Vocabulary", e.what());
  }
  if (auto r = check_frame(m.states, m.g)) return *r;
  const int n = m.size();
  const std::size_t nv = m.voc.variables.size();
  if (m.values.size() != static_cast<std::size_t>(n))
    return fail("Valuation", "values missing for some state");
  for (int s = 0; s < n; ++s)
    if (m.values[s].size() != nv)
      return fail("Valuation", "row has the wrong length", {m.states[s]});
  if (!m.truncated.empty() && m.truncated.size() != static_cast<std::size_t>(n))
    return fail("Boundary", "truncated flags have the wrong length");
  if (!m.infinite_past.empty() &&
      m.infinite_past.size() != static_cast<std::size_t>(n))
    return fail("Boundary", "infinite_past flags have the wrong length");
  for (int s = 0; s < n; ++s)
    if (m.is_truncated(s) && m.g[s] != s)
      return fail("Boundary", "a truncated state must map to itself",
                  {m.states[s]});

  std::map<std::vector<Value>, int> rows;
  for (int s = 0; s < n; ++s) {
    auto [it, fresh] = rows.emplace(m.values[s], s);
    if (!fresh)
      return fail("StateDetermination",
                  "two states agree on every basic variable",
                  {m.states[it->second], m.states[s]});
  }

  for (const auto& [p, tuples] : m.pred) {
    auto it = m.voc.predicates.find(p);
    if (it == m.voc.predicates.end())
      return fail("UnknownSymbol", "predicate not in vocabulary", {p});
    for (const auto& t : tuples)
      if (static_cast<int>(t.size()) != it->second)
        return fail("Arity", "predicate tuple " + tuple_str(t), {p});
  }
  for (const auto& [f, table] : m.func) {
    auto it = m.voc.functions.find(f);
    if (it == m.voc.functions.end())
      return fail("UnknownSymbol", "function not in vocabulary", {f});
    for (const auto& [args, res] : table)
      if (static_cast<int>(args.size()) != it->second)
        return fail("Arity", "function row " + tuple_str(args), {f});
  }
  if (!m.voc.functions.empty()) {
    std::set<Value> universe;
    for (const auto& row : m.values) universe.insert(row.begin(), row.end());
    for (int round = 0; round < closure_rounds; ++round) {
      std::set<Value> added;
      std::vector<Value> u(universe.begin(), universe.end());
      for (const auto& [f, arity] : m.voc.functions) {
        auto ft = m.func.find(f);
        ValueTuple cur(arity);
        std::optional<ValidationReport> bad;
        std::function<void(int)> rec = [&](int i) {
          if (bad) return;
          if (i == arity) {
            if (ft == m.func.end() || !ft->second.count(cur)) {
              bad = fail("FunctionTotality",
                         "no value for " + f + tuple_str(cur), {f});
              return;
            }
            const Value& r = ft->second.at(cur);
            if (!universe.count(r)) added.insert(r);
            return;
          }
          for (const Value& v : u) {
            cur[i] = v;
            rec(i + 1);
          }
        };
        rec(0);
        if (bad) return *bad;
      }
      if (added.empty()) break;
      universe.insert(added.begin(), added.end());
    }
  }
  return {};
}

Value term_value(const DynamicalModel& m, int s, Term t) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      int i = m.voc.variable_index(t.symbol());
      if (i < 0)
        throw Error(ErrorCode::UnknownSymbol,
                    "unknown variable '" + t.symbol() + "'");
      return m.values[s][i];
    }
    case Term::Kind::Next:
      return term_value(m, m.g[s], t.operand());
    case Term::Kind::App: {
      auto ft = m.func.find(t.symbol());
      if (ft == m.func.end())
        throw Error(ErrorCode::UnknownSymbol,
                    "unknown function '" + t.symbol() + "'");
      ValueTuple args;
      for (Term a : t.args()) args.push_back(term_value(m, s, a));
      auto it = ft->second.find(args);
      if (it == ft->second.end())
        throw Error(ErrorCode::InvalidModel,
                    "function " + t.symbol() + " undefined at " +
                        tuple_str(args));
      return it->second;
    }
  }
  return Value{};
}

bool agree(const DynamicalModel& m, int s, int t, const TermSet& xs) {
  for (Term x : xs)
    if (term_value(m, s, x) != term_value(m, t, x)) return false;
  return true;
}

// ---------------------------------------------------------------- Standard

int StandardRelationalModel::world_index(const std::string& id) const {
  return index_of(worlds, id);
}

int StandardRelationalModel::term_label(Term t, int w) const {
  auto sv = t.as_shifted_var();
  if (!sv)
    throw Error(ErrorCode::InvalidArgument,
                "standard relational models have no function symbols");
  int vi = voc.variable_index(sv->first);
  if (vi < 0)
    throw Error(ErrorCode::UnknownSymbol,
                "unknown variable '" + sv->first + "'");
  for (int i = 0; i < sv->second; ++i) w = g[w];
  return eqv[vi].rep(w);
}

bool agree(const StandardRelationalModel& m, int s, int t, const TermSet& xs) {
  for (Term x : xs)
    if (m.term_label(x, s) != m.term_label(x, t)) return false;
  return true;
}

ValidationReport validate_standard(const StandardRelationalModel& m) {
  try {
    m.voc.validate();
  } catch (const Error& e) {
    return fail("Vocabulary", e.what());
  }
  if (auto r = check_frame(m.worlds, m.g)) return *r;
  const int n = m.size();
  if (m.eqv.size() != m.voc.variables.size())
    return fail("Equivalence", "one relation per variable is required");
  for (std::size_t v = 0; v < m.eqv.size(); ++v)
    if (m.eqv[v].size() != n || !valid_reps(m.eqv[v]))
      return fail("Equivalence", "not an equivalence relation",
                  {m.voc.variables[v]});

  Partition all = Partition::universal(n);
  for (const auto& p : m.eqv) all = all.meet(p);
  for (int s = 0; s < n; ++s)
    for (int w = s + 1; w < n; ++w)
      if (all.same(s, w) && !all.same(m.g[s], m.g[w]))
        return fail("Preservation", "g does not preserve the V-relation",
                    {m.worlds[s], m.worlds[w]});

  for (const auto& [atom, ext] : m.atoms) {
    if (atom.kind() != Formula::Kind::Pred)
      return fail("Atom", "stored atom is not a predicate atom",
                  {render(atom)});
    auto it = m.voc.predicates.find(atom.symbol());
    if (it == m.voc.predicates.end() ||
        it->second != static_cast<int>(atom.terms().size()))
      return fail("Atom", "atom does not match the vocabulary",
                  {render(atom)});
    for (Term t : atom.terms())
      if (!t.as_shifted_var() || t.depth() > m.atom_depth)
        return fail("AtomDepth", "atom outside the stored depth",
                    {render(atom)});
    if (static_cast<int>(ext.size()) != n)
      return fail("Atom", "extension has the wrong size", {render(atom)});
    TermSet xs(atom.terms());
    for (int s = 0; s < n; ++s)
      for (int w = 0; w < n; ++w)
        if (ext[s] && !ext[w] && agree(m, s, w, xs))
          return fail("AtomInvariance",
                      "atom " + render(atom) + " separates X-related worlds",
                      {m.worlds[s], m.worlds[w]});
  }

  // Truth of P(x̄) must depend only on the class values of x̄.
  TermUniverse u = term_universe(m.voc.variables, m.atom_depth);
  for (const auto& [p, arity] : m.voc.predicates) {
    std::map<std::vector<std::pair<std::string, int>>, std::pair<bool, Formula>>
        seen;
    std::optional<ValidationReport> bad;
    for_each_tuple(u.terms, arity, [&](const std::vector<Term>& args) {
      if (bad) return;
      Formula atom = Formula::pred(p, args);
      auto it = m.atoms.find(atom);
      for (int w = 0; w < n && !bad; ++w) {
        bool truth = it != m.atoms.end() && it->second[w];
        std::vector<std::pair<std::string, int>> key;
        for (Term t : args)
          key.emplace_back(t.as_shifted_var()->first, m.term_label(t, w));
        auto [pos, fresh] = seen.emplace(key, std::make_pair(truth, atom));
        if (!fresh && pos->second.first != truth)
          bad = fail("Coherence",
                     "atoms " + render(pos->second.second) + " and " +
                         render(atom) + " disagree on equal class values",
                     {m.worlds[w]});
      }
    });
    if (bad) return *bad;
  }
  return {};
}

// ---------------------------------------------------------------- General

int GeneralRelationalModel::world_index(const std::string& id) const {
  return index_of(worlds, id);
}

int GeneralRelationalModel::term_index(Term t) const {
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (universe[i] == t) return static_cast<int>(i);
  throw Error(ErrorCode::DepthBoundExceeded,
              "term " + t.str() + " lies outside the stored universe");
}

std::uint32_t GeneralRelationalModel::mask_of(const TermSet& xs) const {
  std::uint32_t mask = 0;
  for (Term t : xs) mask |= 1u << term_index(t);
  if (mask == 0 && nonempty)
    throw Error(ErrorCode::DialectViolation,
                "empty term set in a nonempty general model");
  return mask;
}

TermSet GeneralRelationalModel::termset_of(std::uint32_t mask) const {
  std::vector<Term> ts;
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (mask & (1u << i)) ts.push_back(universe[i]);
  return TermSet(std::move(ts));
}

void GeneralRelationalModel::init_universe() {
  universe = term_universe(voc.variables, depth_bound).terms;
  if (universe.size() > 16)
    throw Error(ErrorCode::InvalidArgument,
                "general models support at most 16 universe terms");
  std::size_t masks = std::size_t{1} << universe.size();
  eq.assign(masks, Partition::universal(size()));
  dep.assign(masks, std::vector<WorldSet>(universe.size(),
                                          WorldSet(size(), false)));
}

bool agree(const GeneralRelationalModel& m, int s, int t, const TermSet& xs) {
  return m.eq[m.mask_of(xs)].same(s, t);
}

ValidationReport validate_general(const GeneralRelationalModel& m,
                                  Dialect dialect) {
  try {
    m.voc.validate();
  } catch (const Error& e) {
    return fail("Vocabulary", e.what());
  }
  if (auto r = check_frame(m.worlds, m.g)) return *r;
  const int n = m.size();
  const int nt = static_cast<int>(m.universe.size());
  const std::uint32_t full = (1u << nt);
  if (m.universe != term_universe(m.voc.variables, m.depth_bound).terms)
    return fail("Universe", "universe does not match depth bound");
  if (m.eq.size() != full || m.dep.size() != full)
    return fail("Universe", "relation family has the wrong size");
  const bool core = dialect == Dialect::Core;
  if (core && m.nonempty)
    return fail("C1", "core dialect requires a relation for the empty set");
  const std::uint32_t first = core ? 0 : 1;
  auto ts = [&](std::uint32_t mask) { return m.termset_of(mask).str(); };

  if (core && !m.eq[0].is_universal())
    return fail("C1", "=_[] is not the universal relation");

  for (std::uint32_t x = first; x < full; ++x) {
    if (m.eq[x].size() != n || !valid_reps(m.eq[x]))
      return fail("C2", "not an equivalence relation", {ts(x)});
    if (m.dep[x].size() != static_cast<std::size_t>(nt))
      return fail("Universe", "dependence table has the wrong size");
    for (const auto& row : m.dep[x])
      if (static_cast<int>(row.size()) != n)
        return fail("Universe", "dependence row has the wrong size");
  }

  // C_s(X) = {y : s ⊨ D_X y} as a mask.
  auto closure_mask = [&](std::uint32_t x, int s) {
    std::uint32_t c = 0;
    for (int i = 0; i < nt; ++i)
      if (m.dep[x][i][s]) c |= 1u << i;
    return c;
  };

  // C3: reflexivity, determinism and transitivity.
  std::uint32_t vmask = 0;
  for (int i = 0; i < nt; ++i)
    if (m.universe[i].depth() == 0) vmask |= 1u << i;
  for (std::uint32_t x = first; x < full; ++x)
    for (int i = 0; i < nt; ++i)
      if (x & (1u << i))
        for (int s = 0; s < n; ++s)
          if (!m.dep[x][i][s])
            return fail("C3/Dep-Reflexivity", "D_X x fails",
                        {ts(x), m.universe[i].str(), m.worlds[s]});
  for (int i = 0; i < nt; ++i)
    if (m.universe[i].depth() >= 1)
      for (int s = 0; s < n; ++s)
        if (!m.dep[vmask][i][s])
          return fail("C3/Determinism", "D_V of a next term fails",
                      {m.universe[i].str(), m.worlds[s]});
  for (int s = 0; s < n; ++s) {
    for (std::uint32_t x = first; x < full; ++x) {
      std::uint32_t cx = closure_mask(x, s);
      for (int t = 0; t < nt; ++t) {
        std::uint32_t xt = x | (1u << t);
        if ((closure_mask(xt, s) & cx) != cx)
          return fail("C3/Dep-Transitivity",
                      "D_{X+t} X and D_X y hold but D_{X+t} y fails",
                      {ts(xt), ts(x), m.worlds[s]});
      }
      std::uint32_t ccx = closure_mask(cx, s);
      if ((ccx & cx) != ccx)
        return fail("C3/Dep-Transitivity",
                    "D_X Y and D_Y Z hold but D_X Z fails",
                    {ts(x), ts(cx), m.worlds[s]});
    }
  }

  // C4.
  for (std::uint32_t x = first; x < full; ++x) {
    for (int s = 0; s < n; ++s) {
      std::uint32_t cx = closure_mask(x, s);
      for (int w = 0; w < n; ++w) {
        if (w == s || !m.eq[x].same(s, w)) continue;
        if ((closure_mask(x, w) & cx) != cx)
          return fail("C4", "D_X Y not transferred along =_X",
                      {ts(x), m.worlds[s], m.worlds[w]});
        for (std::uint32_t y = cx; y; y = (y - 1) & cx)
          if (!m.eq[y].same(s, w))
            return fail("C4", "=_X and D_X Y hold but =_Y fails",
                        {ts(x), ts(y), m.worlds[s], m.worlds[w]});
      }
    }
  }

  // C5 and C6 on predicate atoms.
  auto atom_ext = [&](Formula a) -> WorldSet {
    auto it = m.atoms.find(a);
    return it == m.atoms.end() ? WorldSet(n, false) : it->second;
  };
  for (const auto& [atom, ext] : m.atoms) {
    if (atom.kind() != Formula::Kind::Pred)
      return fail("Atom", "stored atom is not a predicate atom",
                  {render(atom)});
    if (static_cast<int>(ext.size()) != n)
      return fail("Atom", "extension has the wrong size", {render(atom)});
    std::uint32_t amask = 0;
    try {
      for (Term t : atom.terms()) amask |= 1u << m.term_index(t);
    } catch (const Error&) {
      return fail("Atom", "atom outside the depth bound", {render(atom)});
    }
    for (std::uint32_t x = std::max(amask, first); x < full; ++x) {
      if ((x & amask) != amask) continue;
      for (int s = 0; s < n; ++s)
        if (ext[s] != ext[m.eq[x].rep(s)])
          return fail("C5", "atom not invariant under =_X",
                      {render(atom), ts(x), m.worlds[s]});
    }
    bool can_shift = std::all_of(atom.terms().begin(), atom.terms().end(),
                                 [&](Term t) {
                                   return t.depth() < m.depth_bound;
                                 });
    if (can_shift) {
      std::vector<Term> shifted;
      for (Term t : atom.terms()) shifted.push_back(Term::next(t));
      WorldSet sext = atom_ext(Formula::pred(atom.symbol(), shifted));
      for (int s = 0; s < n; ++s)
        if (sext[s] != ext[m.g[s]])
          return fail("C6", "P(Ox) at s differs from P(x) at g(s)",
                      {render(atom), m.worlds[s]});
    }
    bool all_next = !atom.terms().empty() &&
                    std::all_of(atom.terms().begin(), atom.terms().end(),
                                [](Term t) {
                                  return t.kind() == Term::Kind::Next;
                                });
    if (all_next) {
      std::vector<Term> inner;
      for (Term t : atom.terms()) inner.push_back(t.operand());
      WorldSet iext = atom_ext(Formula::pred(atom.symbol(), inner));
      for (int s = 0; s < n; ++s)
        if (ext[s] != iext[m.g[s]])
          return fail("C6", "P(Ox) at s differs from P(x) at g(s)",
                      {render(atom), m.worlds[s]});
    }
  }

  // C7 and C8 where the shifted set stays inside the universe.
  std::vector<int> shift_index(nt, -1);
  for (int i = 0; i < nt; ++i)
    if (m.universe[i].depth() < m.depth_bound)
      shift_index[i] = m.term_index(Term::next(m.universe[i]));
  auto shift_mask = [&](std::uint32_t x) -> std::optional<std::uint32_t> {
    std::uint32_t r = 0;
    for (int i = 0; i < nt; ++i)
      if (x & (1u << i)) {
        if (shift_index[i] < 0) return std::nullopt;
        r |= 1u << shift_index[i];
      }
    return r;
  };
  for (std::uint32_t x = first; x < full; ++x) {
    auto ox = shift_mask(x);
    if (!ox) continue;
    for (int s = 0; s < n; ++s)
      for (int w = s + 1; w < n; ++w)
        if (m.eq[*ox].same(s, w) && !m.eq[x].same(m.g[s], m.g[w]))
          return fail("C7", "=_OX holds but =_X fails after g",
                      {ts(x), m.worlds[s], m.worlds[w]});
    for (int i = 0; i < nt; ++i) {
      if (shift_index[i] < 0) continue;
      for (int s = 0; s < n; ++s)
        if (m.dep[x][i][m.g[s]] && !m.dep[*ox][shift_index[i]][s])
          return fail("C8", "D_X y at g(s) but not D_OX Oy at s",
                      {ts(x), m.universe[i].str(), m.worlds[s]});
    }
  }
  return {};
}

// ---------------------------------------------------------------- LFD^f

int LfdFModel::member_index(const std::string& id) const {
  return index_of(names, id);
}

Value LfdFModel::apply(const std::string& f, const ValueTuple& args) const {
  auto ft = func.find(f);
  if (ft != func.end()) {
    auto it = ft->second.find(args);
    if (it != ft->second.end()) return it->second;
  }
  auto d = func_default.find(f);
  if (d != func_default.end()) return d->second;
  throw Error(ErrorCode::InvalidModel,
              "function " + f + " undefined at " + tuple_str(args));
}

ValidationReport validate_lfdf(const LfdFModel& m) {
  try {
    m.voc.validate();
  } catch (const Error& e) {
    return fail("Vocabulary", e.what());
  }
  if (m.team.empty()) return fail("NonEmpty", "empty team");
  if (m.names.size() != m.team.size())
    return fail("Team", "member names do not match the team");
  std::set<Value> objs(m.objects.begin(), m.objects.end());
  for (std::size_t a = 0; a < m.team.size(); ++a) {
    if (m.team[a].size() != m.voc.variables.size())
      return fail("Team", "assignment is not total", {m.names[a]});
    for (const Value& v : m.team[a])
      if (!objs.count(v))
        return fail("Team", "value " + value_str(v) + " is not an object",
                    {m.names[a]});
  }
  for (const auto& [f, arity] : m.voc.functions) {
    if (m.func_default.count(f)) continue;
    auto ft = m.func.find(f);
    ValueTuple cur(arity);
    std::optional<ValidationReport> bad;
    std::function<void(int)> rec = [&](int i) {
      if (bad) return;
      if (i == arity) {
        if (ft == m.func.end() || !ft->second.count(cur))
          bad = fail("FunctionTotality", "no value for " + f + tuple_str(cur),
                     {f});
        return;
      }
      for (const Value& v : m.objects) {
        cur[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
    if (bad) return *bad;
  }
  for (const auto& [p, tuples] : m.pred) {
    auto it = m.voc.predicates.find(p);
    if (it == m.voc.predicates.end())
      return fail("UnknownSymbol", "predicate not in vocabulary", {p});
    for (const auto& t : tuples)
      if (static_cast<int>(t.size()) != it->second)
        return fail("Arity", "predicate tuple " + tuple_str(t), {p});
  }
  return {};
}

}  // namespace dfd
