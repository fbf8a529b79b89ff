#include "dfd/transform.hpp"

#include <algorithm>

#include "dfd/semantics.hpp"

namespace dfd {

namespace {

bool symbol_taken(const Vocabulary& voc, const std::string& s) {
  return voc.is_variable(s) || voc.is_predicate(s) || voc.is_function(s);
}

std::string fresh(const Vocabulary& voc, std::string base) {
  while (symbol_taken(voc, base)) base += "_";
  return base;
}

// All tuples of `k` terms drawn from `pool`.
void for_each_args(const std::vector<Term>& pool, int k,
                   const std::function<void(const std::vector<Term>&)>& fn) {
  std::vector<Term> cur;
  std::function<void()> rec = [&] {
    if (static_cast<int>(cur.size()) == k) {
      fn(cur);
      return;
    }
    for (Term t : pool) {
      cur.push_back(t);
      rec();
      cur.pop_back();
    }
  };
  rec();
}

}  // namespace

LfdfSignature lfdf_signature(const Vocabulary& dfd) {
  LfdfSignature sig;
  sig.dfd = dfd;
  sig.lfd = dfd;
  sig.time_var = fresh(dfd, "time");
  sig.lfd.variables.push_back(sig.time_var);
  const int n = static_cast<int>(dfd.variables.size());
  for (const auto& v : dfd.variables) {
    std::string f = fresh(sig.lfd, "f_" + v);
    sig.step_fn[v] = f;
    sig.lfd.functions[f] = n;
  }
  return sig;
}

Value infinity_token(const DynamicalModel& m) {
  std::string tok = "inf";
  auto used = [&](const std::string& s) {
    for (const auto& row : m.values)
      for (const auto& v : row)
        if (v == Value{s}) return true;
    return false;
  };
  while (used(tok)) tok += "_";
  return tok;
}

StandardRelationalModel to_standard(const DynamicalModel& m, int atom_depth) {
  if (atom_depth < 0)
    throw Error(ErrorCode::InvalidArgument, "atom depth must be non-negative");
  StandardRelationalModel out;
  out.voc = m.voc;
  out.voc.functions.clear();
  out.worlds = m.states;
  out.g = m.g;
  for (std::size_t v = 0; v < m.voc.variables.size(); ++v) {
    std::vector<Value> col;
    for (int s = 0; s < m.size(); ++s) col.push_back(m.values[s][v]);
    out.eqv.push_back(Partition::from_labels(col));
  }
  out.atom_depth = atom_depth;
  Evaluator ev = Evaluator::dynamical(m);
  const auto pool = term_universe(m.voc.variables, atom_depth).terms;
  for (const auto& [p, arity] : m.voc.predicates) {
    for_each_args(pool, arity, [&](const std::vector<Term>& args) {
      Formula atom = Formula::pred(p, args);
      const auto& t = ev.truth(atom);
      WorldSet ws(t.begin(), t.end());
      if (std::find(ws.begin(), ws.end(), true) != ws.end())
        out.atoms[atom] = ws;
    });
  }
  return out;
}

GeneralRelationalModel to_general(const DynamicalModel& m, int depth_bound,
                                  bool nonempty) {
  if (depth_bound < 0)
    throw Error(ErrorCode::InvalidArgument, "depth bound must be non-negative");
  GeneralRelationalModel out;
  out.voc = m.voc;
  out.voc.functions.clear();
  out.worlds = m.states;
  out.g = m.g;
  out.depth_bound = depth_bound;
  out.nonempty = nonempty;
  out.init_universe();
  Evaluator ev = Evaluator::dynamical(m);
  const std::uint32_t masks = static_cast<std::uint32_t>(out.eq.size());
  for (std::uint32_t mask = nonempty ? 1 : 0; mask < masks; ++mask) {
    TermSet xs = out.termset_of(mask);
    out.eq[mask] = ev.relation(xs);
    for (std::size_t i = 0; i < out.universe.size(); ++i) {
      const auto& t = ev.truth(Formula::dep_atom(xs, out.universe[i]));
      out.dep[mask][i] = WorldSet(t.begin(), t.end());
    }
  }
  for (const auto& [p, arity] : m.voc.predicates) {
    for_each_args(out.universe, arity, [&](const std::vector<Term>& args) {
      Formula atom = Formula::pred(p, args);
      const auto& t = ev.truth(atom);
      WorldSet ws(t.begin(), t.end());
      if (std::find(ws.begin(), ws.end(), true) != ws.end())
        out.atoms[atom] = ws;
    });
  }
  return out;
}

std::vector<int> quotient_map(const StandardRelationalModel& m) {
  Partition all = Partition::universal(m.size());
  for (const auto& p : m.eqv) all = all.meet(p);
  // Classes are numbered in order of their least world.
  std::vector<int> index(m.size(), -1), out(m.size());
  int next = 0;
  for (int w = 0; w < m.size(); ++w) {
    int r = all.rep(w);
    if (index[r] < 0) index[r] = next++;
    out[w] = index[r];
  }
  return out;
}

DynamicalModel to_dynamical(const StandardRelationalModel& m) {
  const auto cls = quotient_map(m);
  const int k = cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;
  std::vector<int> rep(k, -1);
  for (int w = 0; w < m.size(); ++w)
    if (rep[cls[w]] < 0) rep[cls[w]] = w;

  auto value_of = [&](std::size_t v, int w) -> Value {
    return m.voc.variables[v] + "/" + m.worlds[m.eqv[v].rep(w)];
  };

  DynamicalModel out;
  out.voc = m.voc;
  for (int c = 0; c < k; ++c) out.states.push_back(m.worlds[rep[c]]);
  out.g.assign(k, -1);
  for (int w = 0; w < m.size(); ++w) {
    int target = cls[m.g[w]];
    int& slot = out.g[cls[w]];
    if (slot >= 0 && slot != target)
      throw Error(ErrorCode::Internal,
                  "g does not preserve the V-equivalence at " + m.worlds[w]);
    slot = target;
  }
  out.values.assign(k, {});
  for (int c = 0; c < k; ++c)
    for (std::size_t v = 0; v < m.voc.variables.size(); ++v)
      out.values[c].push_back(value_of(v, rep[c]));
  // An argument ○ⁿv contributes the ∼_v class of gⁿ(w). Coherence of the
  // valuation makes the result independent of which atom supplied a tuple.
  for (const auto& [atom, ws] : m.atoms) {
    auto& ext = out.pred[atom.symbol()];
    for (int w = 0; w < m.size(); ++w) {
      if (!ws[w]) continue;
      ValueTuple tuple;
      for (Term t : atom.terms()) {
        auto [v, n] = *t.as_shifted_var();
        int u = w;
        for (int i = 0; i < n; ++i) u = m.g[u];
        tuple.push_back(value_of(m.voc.variable_index(v), u));
      }
      ext.insert(tuple);
    }
  }
  return out;
}

Unrolled unroll_lfdf(const LfdFModel& m, const Vocabulary& dfd, int s0,
                     int horizon) {
  if (horizon <= 0)
    throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  if (s0 < 0 || s0 >= m.size())
    throw Error(ErrorCode::InvalidArgument, "designated member out of range");
  LfdfSignature sig = lfdf_signature(dfd);
  const int time_idx = m.voc.variable_index(sig.time_var);
  if (time_idx < 0)
    throw Error(ErrorCode::InvalidModel,
                "LFD model lacks the time variable " + sig.time_var);
  std::vector<int> var_idx;
  for (const auto& v : dfd.variables) {
    int i = m.voc.variable_index(v);
    if (i < 0)
      throw Error(ErrorCode::InvalidModel, "LFD model lacks variable " + v);
    var_idx.push_back(i);
    const std::string& f = sig.step_fn.at(v);
    if (!m.func.count(f) && !m.func_default.count(f))
      throw Error(ErrorCode::InvalidModel,
                  "LFD model does not interpret " + f);
  }

  Unrolled out;
  DynamicalModel& d = out.model;
  d.voc = dfd;
  const Value& now = m.team[s0][time_idx];
  std::map<std::vector<Value>, std::string> rows;
  for (int a = 0; a < m.size(); ++a) {
    if (m.team[a][time_idx] != now) continue;
    std::vector<Value> row;
    for (int i : var_idx) row.push_back(m.team[a][i]);
    for (int t = 0; t <= horizon; ++t) {
      std::string id = m.names[a] + "@" + std::to_string(t);
      auto [it, fresh_row] = rows.emplace(row, id);
      if (!fresh_row)
        throw Error(ErrorCode::InvalidModel,
                    "states " + it->second + " and " + id +
                        " have identical variable rows");
      int s = d.size();
      d.states.push_back(id);
      d.values.push_back(row);
      d.g.push_back(t < horizon ? s + 1 : s);
      d.truncated.push_back(t == horizon);
      out.tau.tau.push_back(t);
      out.origin.emplace_back(a, t);
      std::vector<Value> next;
      for (const auto& v : dfd.variables)
        next.push_back(m.apply(sig.step_fn.at(v), row));
      row = std::move(next);
    }
  }
  for (const auto& [p, arity] : dfd.predicates) {
    (void)arity;
    auto it = m.pred.find(p);
    if (it != m.pred.end()) d.pred[p] = it->second;
  }
  for (const auto& [f, arity] : dfd.functions) {
    (void)arity;
    auto it = m.func.find(f);
    if (it != m.func.end()) d.func[f] = it->second;
  }
  return out;
}

LfdFModel to_lfdf(const DynamicalModel& m, const TimingMap& tau) {
  if (tau.tau.size() != static_cast<std::size_t>(m.size()))
    throw Error(ErrorCode::InvalidArgument, "timing map size mismatch");
  LfdfSignature sig = lfdf_signature(m.voc);
  const Value inf = infinity_token(m);
  auto time_value = [&](std::int64_t t) -> Value {
    return t == kInfinity ? inf : Value{t};
  };

  LfdFModel out;
  out.voc = sig.lfd;
  std::set<Value> objects;
  std::int64_t max_tau = 0;
  for (auto t : tau.tau)
    if (t != kInfinity) max_tau = std::max(max_tau, t);
  for (std::int64_t i = 0; i <= max_tau; ++i) objects.insert(i);
  objects.insert(inf);
  for (const auto& row : m.values)
    for (const auto& v : row) objects.insert(v);
  out.objects.assign(objects.begin(), objects.end());

  for (int s = 0; s < m.size(); ++s) {
    out.names.push_back(m.states[s]);
    std::vector<Value> a = m.values[s];
    a.push_back(time_value(tau.tau[s]));
    out.team.push_back(std::move(a));
  }
  for (std::size_t v = 0; v < m.voc.variables.size(); ++v) {
    const std::string& f = sig.step_fn.at(m.voc.variables[v]);
    auto& table = out.func[f];
    for (int s = 0; s < m.size(); ++s) {
      // The successor of a truncated state is not part of the model.
      if (m.is_truncated(s)) continue;
      table[m.values[s]] = m.values[m.g[s]][v];
    }
    out.func_default[f] = inf;
  }
  for (const auto& [f, table] : m.func) {
    out.func[f] = table;
    out.func_default[f] = inf;
  }
  out.pred = m.pred;
  return out;
}

LfdFModel to_lfdf(const DynamicalModel& m) {
  auto r = timing_map(m);
  if (!r.timed())
    throw Error(ErrorCode::NotTimed,
                "model has no timing map (witness " + m.states[*r.witness] +
                    ")");
  return to_lfdf(m, r.map);
}

}  // namespace dfd
