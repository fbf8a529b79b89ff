#include "dfd/analysis.hpp"

#include <deque>

#include "dfd/semantics.hpp"

namespace dfd {

Orbit orbit(const DynamicalModel& m, int s) {
  std::vector<int> seen(m.size(), -1);
  std::vector<int> path;
  int cur = s;
  while (seen[cur] < 0) {
    seen[cur] = static_cast<int>(path.size());
    path.push_back(cur);
    cur = m.g[cur];
  }
  Orbit o;
  o.prefix.assign(path.begin(), path.begin() + seen[cur]);
  o.cycle.assign(path.begin() + seen[cur], path.end());
  return o;
}

std::string Rank::str() const {
  return n ? "Finite(" + std::to_string(*n) + ")" : "Infinite";
}

std::vector<bool> image_after(const DynamicalModel& m, int n) {
  std::vector<bool> img(m.size(), true);
  for (int i = 0; i < n; ++i) {
    std::vector<bool> next(m.size(), false);
    for (int s = 0; s < m.size(); ++s)
      if (img[s]) next[m.g[s]] = true;
    img = std::move(next);
  }
  return img;
}

namespace {

bool constant_on(const DynamicalModel& m, const std::vector<bool>& img,
                 Term x) {
  std::optional<Value> v;
  for (int s = 0; s < m.size(); ++s) {
    if (!img[s]) continue;
    Value here = term_value(m, s, x);
    if (!v)
      v = here;
    else if (*v != here)
      return false;
  }
  return true;
}

}  // namespace

Rank rank(const DynamicalModel& m, const TermSet& xs) {
  std::vector<bool> img(m.size(), true);
  for (int n = 0; n <= m.size(); ++n) {
    bool all = true;
    for (Term x : xs) all = all && constant_on(m, img, x);
    if (all) return Rank{n};
    std::vector<bool> next(m.size(), false);
    for (int s = 0; s < m.size(); ++s)
      if (img[s]) next[m.g[s]] = true;
    if (next == img) break;  // images have stabilized
    img = std::move(next);
  }
  return Rank{};
}

Rank rank(const DynamicalModel& m, Term x) { return rank(m, TermSet{x}); }

std::optional<Value> eventual_value(const DynamicalModel& m, Term x) {
  Rank r = rank(m, x);
  if (!r.finite()) return std::nullopt;
  auto img = image_after(m, *r.n);
  for (int s = 0; s < m.size(); ++s)
    if (img[s]) {
      // The image after rank steps lies on cycles, so g maps it into itself.
      if (!img[m.g[s]])
        throw Error(ErrorCode::Internal, "image not closed under g");
      return term_value(m, s, x);
    }
  return std::nullopt;
}

Stability stability(const DynamicalModel& m, Term x) {
  Stability st;
  st.relative.assign(m.size(), false);
  // Cycle value per state: the common value on its orbit's cycle, if any.
  std::vector<std::optional<Value>> cycle_value(m.size());
  for (int s = 0; s < m.size(); ++s) {
    Orbit o = orbit(m, s);
    std::optional<Value> v = term_value(m, o.cycle[0], x);
    for (int c : o.cycle)
      if (term_value(m, c, x) != *v) {
        v.reset();
        break;
      }
    cycle_value[s] = v;
    st.relative[s] = v.has_value();
  }
  st.absolute = true;
  for (int s = 0; s < m.size(); ++s)
    if (!cycle_value[s] || *cycle_value[s] != *cycle_value[0])
      st.absolute = false;
  return st;
}

bool real_edge(const DynamicalModel& m, int s) { return !m.is_truncated(s); }

TimingResult timing_map(const DynamicalModel& m) {
  const int n = m.size();
  std::vector<std::vector<int>> preds(n);
  for (int s = 0; s < n; ++s)
    if (real_edge(m, s)) preds[m.g[s]].push_back(s);

  // States on a cycle of real edges.
  std::vector<bool> on_cycle(n, false);
  std::vector<int> color(n, 0);  // 0 new, 1 on stack, 2 done
  for (int s = 0; s < n; ++s) {
    std::vector<int> path;
    int cur = s;
    while (color[cur] == 0) {
      color[cur] = 1;
      path.push_back(cur);
      if (!real_edge(m, cur)) break;
      cur = m.g[cur];
    }
    if (color[cur] == 1 && real_edge(m, path.back())) {
      for (auto it = path.rbegin(); it != path.rend(); ++it) {
        on_cycle[*it] = true;
        if (*it == cur) break;
      }
    }
    for (int p : path) color[p] = 2;
  }

  // Forward propagation of infinite histories and of finite roots.
  auto propagate = [&](std::vector<bool>& mark) {
    std::deque<int> q;
    for (int s = 0; s < n; ++s)
      if (mark[s]) q.push_back(s);
    while (!q.empty()) {
      int s = q.front();
      q.pop_front();
      if (!real_edge(m, s)) continue;
      int t = m.g[s];
      if (!mark[t]) {
        mark[t] = true;
        q.push_back(t);
      }
    }
  };
  std::vector<bool> inf(n, false), has_finite(n, false);
  for (int s = 0; s < n; ++s) {
    inf[s] = on_cycle[s] || m.has_infinite_past(s);
    has_finite[s] = preds[s].empty() && !m.has_infinite_past(s);
  }
  propagate(inf);
  propagate(has_finite);

  // Shortest and longest finite histories on the acyclic finite part.
  std::vector<int> lo(n, 0), hi(n, 0), pending(n, 0);
  std::deque<int> q;
  for (int s = 0; s < n; ++s) {
    if (inf[s]) continue;
    pending[s] = static_cast<int>(preds[s].size());
    if (pending[s] == 0) q.push_back(s);
  }
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    if (!preds[s].empty()) {
      lo[s] = hi[s] = -1;
      for (int p : preds[s]) {
        lo[s] = lo[s] < 0 ? lo[p] + 1 : std::min(lo[s], lo[p] + 1);
        hi[s] = std::max(hi[s], hi[p] + 1);
      }
    }
    if (real_edge(m, s) && !inf[m.g[s]] && --pending[m.g[s]] == 0)
      q.push_back(m.g[s]);
  }

  TimingResult r;
  r.map.tau.assign(n, 0);
  for (int s = 0; s < n; ++s) {
    bool bad = inf[s] ? has_finite[s] : lo[s] != hi[s];
    if (bad && !r.witness) r.witness = s;
    r.map.tau[s] = inf[s] ? kInfinity : hi[s];
  }
  return r;
}

Partition synchronicity(const DynamicalModel& m, const TimingMap& tau) {
  if (tau.tau.size() != static_cast<std::size_t>(m.size()))
    throw Error(ErrorCode::InvalidArgument, "timing map size mismatch");
  Partition p = Partition::from_labels(tau.tau);
  if (!satisfies_synchronicity_conditions(m, p))
    throw Error(ErrorCode::Internal,
                "synchronicity relation violates its conditions");
  return p;
}

bool satisfies_synchronicity_conditions(const DynamicalModel& m,
                                        const Partition& rel) {
  const int n = m.size();
  std::vector<bool> has_pred(n, false);
  for (int s = 0; s < n; ++s)
    if (real_edge(m, s)) has_pred[m.g[s]] = true;
  for (int s = 0; s < n; ++s) {
    if (!real_edge(m, s)) continue;
    for (int w = 0; w < n; ++w) {
      if (!real_edge(m, w)) continue;
      if (rel.same(s, w) != rel.same(m.g[s], m.g[w])) return false;
    }
  }
  // A state synchronous with a successor has a predecessor itself, unless
  // its history lies outside the model.
  for (int s = 0; s < n; ++s) {
    if (has_pred[s] || m.has_infinite_past(s)) continue;
    for (int w = 0; w < n; ++w)
      if (real_edge(m, w) && rel.same(s, m.g[w])) return false;
  }
  return true;
}

std::vector<std::optional<int>> future_horizon(const DynamicalModel& m) {
  std::vector<std::optional<int>> fh(m.size());
  for (int s = 0; s < m.size(); ++s) {
    int cur = s;
    for (int k = 0; k <= m.size(); ++k) {
      if (!real_edge(m, cur)) {
        fh[s] = k;
        break;
      }
      cur = m.g[cur];
    }
  }
  return fh;
}

std::vector<bool> reliable_states(const DynamicalModel& m,
                                  const TimingMap& tau, int depth) {
  const auto fh = future_horizon(m);
  // Least horizon among states of each time value.
  std::map<std::int64_t, std::int64_t> least;
  for (int s = 0; s < m.size(); ++s) {
    std::int64_t h = fh[s] ? *fh[s] : kInfinity;
    auto [it, fresh] = least.emplace(tau.tau[s], h);
    if (!fresh) it->second = std::min(it->second, h);
  }
  std::vector<bool> out(m.size(), true);
  for (int s = 0; s < m.size(); ++s) {
    for (int k = 0; k <= depth && out[s]; ++k) {
      std::int64_t t = tau.tau[s] == kInfinity ? kInfinity : tau.tau[s] + k;
      auto it = least.find(t);
      if (it != least.end() && it->second < depth - k) out[s] = false;
    }
  }
  return out;
}

Classification classify(const DynamicalModel& m) {
  Classification c;
  c.timed = timing_map(m).timed();
  const int n = m.size();
  std::vector<int> indeg(n, 0);
  bool cyclic = false;
  for (int s = 0; s < n; ++s)
    if (real_edge(m, s)) ++indeg[m.g[s]];
  bool one_pred = true;
  for (int s = 0; s < n; ++s) one_pred = one_pred && indeg[s] <= 1;
  for (int s = 0; s < n && !cyclic; ++s) {
    int cur = s;
    for (int k = 0; k <= n && real_edge(m, cur); ++k) {
      cur = m.g[cur];
      if (cur == s) {
        cyclic = true;
        break;
      }
    }
  }
  bool inf_past = false;
  for (int s = 0; s < n; ++s) inf_past = inf_past || m.has_infinite_past(s);
  c.temporal = c.timed && one_pred;
  c.linear_time = c.temporal && !cyclic;
  c.finite_past = c.linear_time && !inf_past;
  return c;
}

VariableProfile variable_profile_iterative(const DynamicalModel& m, Term x,
                                           int max_steps) {
  if (max_steps < 1)
    throw Error(ErrorCode::InvalidArgument, "maxSteps must be at least 1");
  const int n = m.size();
  const int horizon = 2 * max_steps + 1;
  // vals[k][s] = value of x at gᵏ(s).
  std::vector<std::vector<Value>> vals(horizon + 1,
                                       std::vector<Value>(n));
  std::vector<int> pos(n);
  for (int s = 0; s < n; ++s) pos[s] = s;
  for (int k = 0; k <= horizon; ++k) {
    for (int s = 0; s < n; ++s) {
      vals[k][s] = term_value(m, pos[s], x);
      pos[s] = m.g[pos[s]];
    }
  }
  auto same = [&](int a, int b) { return vals[a] == vals[b]; };
  VariableProfile p;
  p.fixed = same(1, 0);
  for (int k = 0; k <= max_steps && !p.eventually_fixed_at; ++k)
    if (same(k + 1, k)) p.eventually_fixed_at = k;
  for (int k = 1; k <= max_steps && !p.period; ++k)
    if (same(k, 0)) p.period = k;
  for (int a = 0; a <= max_steps && !p.eventual_period; ++a)
    for (int b = 1; b <= max_steps; ++b)
      if (same(a + b, a)) {
        p.eventual_period = std::make_pair(a, b);
        break;
      }
  return p;
}

VariableProfile variable_profile_formulas(const DynamicalModel& m, Term x,
                                          int max_steps) {
  if (max_steps < 1)
    throw Error(ErrorCode::InvalidArgument, "maxSteps must be at least 1");
  Evaluator ev = Evaluator::dynamical(m);
  auto holds = [&](int a, int b) {
    Formula f = Formula::ident(next_shift(x, a), next_shift(x, b));
    return ev.valid(f);
  };
  VariableProfile p;
  p.fixed = holds(1, 0);
  for (int k = 0; k <= max_steps && !p.eventually_fixed_at; ++k)
    if (holds(k + 1, k)) p.eventually_fixed_at = k;
  for (int k = 1; k <= max_steps && !p.period; ++k)
    if (holds(k, 0)) p.period = k;
  for (int a = 0; a <= max_steps && !p.eventual_period; ++a)
    for (int b = 1; b <= max_steps; ++b)
      if (holds(a + b, a)) {
        p.eventual_period = std::make_pair(a, b);
        break;
      }
  return p;
}

VariableProfile variable_profile(const DynamicalModel& m, Term x,
                                 int max_steps) {
  auto a = variable_profile_iterative(m, x, max_steps);
  auto b = variable_profile_formulas(m, x, max_steps);
  if (!(a == b))
    throw Error(ErrorCode::Internal,
                "iteration and identity formulas disagree on " + render(x));
  return a;
}

}  // namespace dfd
