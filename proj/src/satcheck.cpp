#include "dfd/satcheck.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "dfd/semantics.hpp"
#include "dfd/transform.hpp"

namespace dfd {

using K = Formula::Kind;

ClosedSet ClosedSet::of(Formula phi, const std::vector<std::string>& variables) {
  ClosedSet c;
  c.variables = variables;
  FormulaSet all = closure(FormulaSet{phi}, variables);
  c.formulas.assign(all.begin(), all.end());
  for (std::size_t i = 0; i < c.formulas.size(); ++i) {
    c.depth.push_back(c.formulas[i].depth());
    c.index.emplace(c.formulas[i].id(), static_cast<int>(i));
    c.k = std::max(c.k, c.depth.back());
  }
  return c;
}

std::optional<int> ClosedSet::find(Formula f) const {
  auto it = index.find(f.id());
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::vector<TypeAtom> extract_types(const GeneralRelationalModel& m,
                                    const ClosedSet& phi) {
  Evaluator ev = Evaluator::general(m);
  const int n = m.size();
  const int nf = static_cast<int>(phi.formulas.size());
  // truth[s][j]
  std::vector<std::vector<char>> truth(n, std::vector<char>(nf, 0));
  for (int j = 0; j < nf; ++j) {
    const auto& t = ev.truth(phi.formulas[j]);
    for (int s = 0; s < n; ++s) truth[s][j] = t[s];
  }
  std::vector<TypeAtom> out;
  for (int layer = 0; layer <= phi.k + 1; ++layer) {
    std::map<std::vector<char>, int> seen;
    for (int s = 0; s < n; ++s) {
      std::vector<char> bits(nf, 0);
      for (int j = 0; j < nf; ++j)
        bits[j] = phi.depth[j] < layer && truth[s][j];
      auto [it, fresh] = seen.emplace(bits, static_cast<int>(out.size()));
      if (fresh) out.push_back(TypeAtom{layer, std::move(bits), {}});
      out[it->second].sources.emplace_back(s, layer);
    }
  }
  return out;
}

namespace {

// up[X] = OR of val[X'] over all X' ⊆ X.
template <typename T>
std::vector<T> subset_or(std::vector<T> val, int bits) {
  for (int b = 0; b < bits; ++b)
    for (std::size_t mask = 0; mask < val.size(); ++mask)
      if (mask & (std::size_t{1} << b)) val[mask] |= val[mask ^ (std::size_t{1} << b)];
  return val;
}

}  // namespace

Filtration filtrate(const GeneralRelationalModel& m, Formula phi) {
  if (!valid_in(phi, Dialect::NonEmpty))
    throw Error(ErrorCode::DialectViolation,
                "filtration needs a nonempty-dialect formula");
  if (!m.nonempty)
    throw Error(ErrorCode::DialectViolation,
                "filtration needs a nonempty general model");
  if (temporal_depth(phi) > m.depth_bound)
    throw Error(ErrorCode::DepthBoundExceeded,
                "formula is deeper than the model's depth bound");

  Filtration out;
  out.closure = ClosedSet::of(phi, m.voc.variables);
  const ClosedSet& cs = out.closure;
  out.types = extract_types(m, cs);
  const auto& types = out.types;
  const int nt = static_cast<int>(types.size());
  const int k = cs.k;

  GeneralRelationalModel& md = out.model;
  md.voc = m.voc;
  md.voc.functions.clear();
  md.depth_bound = k;
  md.nonempty = true;
  for (int a = 0; a < nt; ++a) {
    int j = 0;
    for (int b = 0; b < a; ++b) j += types[b].layer == types[a].layer;
    md.worlds.push_back("t" + std::to_string(types[a].layer) + "." +
                        std::to_string(j));
  }
  md.init_universe();
  const int nu = static_cast<int>(md.universe.size());
  const std::uint32_t masks = 1u << nu;

  // G(α) = {ψ : ○ψ ∈ α}, located among the max(0, i-1)-types.
  md.g.assign(nt, -1);
  for (int a = 0; a < nt; ++a) {
    std::vector<char> bits(cs.formulas.size(), 0);
    for (std::size_t j = 0; j < cs.formulas.size(); ++j) {
      if (!types[a].members[j] || cs.formulas[j].kind() != K::Next) continue;
      auto c = cs.find(cs.formulas[j].child());
      if (!c)
        throw Error(ErrorCode::Internal, "closure misses the body of a next");
      bits[*c] = 1;
    }
    const int want = std::max(0, types[a].layer - 1);
    for (int b = 0; b < nt; ++b)
      if (types[b].layer == want && types[b].members == bits) md.g[a] = b;
    if (md.g[a] < 0)
      throw Error(ErrorCode::Internal,
                  "G(alpha) is not a type of " + md.worlds[a]);
  }

  // Per type and subscript mask X: the y with D_X y ∈ α.
  std::vector<int> term_td(nu);
  for (int i = 0; i < nu; ++i) term_td[i] = temporal_depth(md.universe[i]);
  std::vector<int> mask_td(masks, 0);
  for (std::uint32_t x = 1; x < masks; ++x)
    for (int i = 0; i < nu; ++i)
      if (x & (1u << i)) mask_td[x] = std::max(mask_td[x], term_td[i]);
  std::vector<std::uint32_t> layer_mask(k + 1, 0);  // ○^m 𝕍
  for (int i = 0; i < nu; ++i) layer_mask[term_td[i]] |= 1u << i;

  std::vector<std::vector<int>> dep_index(masks, std::vector<int>(nu, -1));
  for (std::uint32_t x = 1; x < masks; ++x) {
    TermSet xs = md.termset_of(x);
    for (int i = 0; i < nu; ++i)
      if (auto j = cs.find(Formula::dep_atom(xs, md.universe[i])))
        dep_index[x][i] = *j;
  }
  std::vector<std::vector<std::uint32_t>> deps(
      nt, std::vector<std::uint32_t>(masks, 0));
  for (int a = 0; a < nt; ++a)
    for (std::uint32_t x = 1; x < masks; ++x)
      for (int i = 0; i < nu; ++i)
        if (dep_index[x][i] >= 0 && types[a].members[dep_index[x][i]])
          deps[a][x] |= 1u << i;

  // Per type and mask Y: an id for {D_Y ψ ∈ α}.
  std::vector<std::vector<int>> groups(masks);
  for (std::size_t j = 0; j < cs.formulas.size(); ++j)
    if (cs.formulas[j].kind() == K::DepMod)
      groups[md.mask_of(cs.formulas[j].termset())].push_back(
          static_cast<int>(j));
  std::vector<std::vector<int>> sig(nt, std::vector<int>(masks, 0));
  {
    std::map<std::vector<char>, int> ids;
    for (int a = 0; a < nt; ++a)
      for (std::uint32_t y = 1; y < masks; ++y) {
        std::vector<char> bits;
        bits.reserve(groups[y].size());
        for (int j : groups[y]) bits.push_back(types[a].members[j]);
        sig[a][y] = ids.emplace(bits, static_cast<int>(ids.size()))
                        .first->second;
      }
  }

  auto e1 = [&](int a, int b, std::uint32_t x) {
    if (types[a].td() != types[b].td() || types[a].td() < mask_td[x])
      return false;
    if (deps[a][x] != deps[b][x]) return false;
    const std::uint32_t ys = deps[a][x];
    for (std::uint32_t y = ys; y; y = (y - 1) & ys)
      if (sig[a][y] != sig[b][y]) return false;
    return true;
  };
  auto approx = [&](int a, int b, std::uint32_t x) {
    if (types[a].td() != types[b].td()) return false;
    if (types[a].td() >= mask_td[x]) return e1(a, b, x);
    int lo = types[a].td();
    for (int i = 0; i < nu; ++i)
      if (x & (1u << i)) lo = std::min(lo, term_td[i]);
    for (int mm = 0; mm <= lo; ++mm)
      if (e1(a, b, layer_mask[mm])) return true;
    return false;
  };

  for (std::uint32_t x = 1; x < masks; ++x) {
    std::vector<std::vector<char>> rel(nt, std::vector<char>(nt, 0));
    for (int a = 0; a < nt; ++a)
      for (int b = 0; b < nt; ++b) rel[a][b] = approx(a, b, x);
    std::vector<int> label(nt);
    for (int a = 0; a < nt; ++a) {
      label[a] = a;
      for (int b = 0; b < a; ++b)
        if (rel[a][b]) {
          label[a] = label[b];
          break;
        }
    }
    for (int a = 0; a < nt; ++a)
      for (int b = 0; b < nt; ++b)
        if ((label[a] == label[b]) != static_cast<bool>(rel[a][b]))
          throw Error(ErrorCode::Internal,
                      "filtration relation is not an equivalence for " +
                          md.termset_of(x).str());
    md.eq[x] = Partition::from_labels(label);
  }

  // Dependence valuation: the least sets closed under V1-V4.
  for (int a = 0; a < nt; ++a) {
    std::vector<std::uint32_t> v3 = subset_or(deps[a], nu);
    std::vector<std::uint32_t> m_ok(masks, 0);  // bit m: V4 premise for ○^m 𝕍
    for (std::uint32_t x = 1; x < masks; ++x)
      for (int mm = 0; mm <= k; ++mm)
        if ((deps[a][x] & layer_mask[mm]) == layer_mask[mm])
          m_ok[x] |= 1u << mm;
    std::vector<std::uint32_t> v4 = subset_or(m_ok, nu);
    for (std::uint32_t x = 1; x < masks; ++x)
      for (int i = 0; i < nu; ++i) {
        const std::uint32_t upto = (2u << term_td[i]) - 1;  // m <= td(y)
        bool v1 = false;
        for (int mm = 0; mm <= term_td[i]; ++mm)
          v1 = v1 || (x & layer_mask[mm]) == layer_mask[mm];
        bool v2 = x & (1u << i);
        bool in = v1 || v2 || (v3[x] & (1u << i)) || (v4[x] & upto);
        md.dep[x][i][a] = in;
      }
  }

  for (std::size_t j = 0; j < cs.formulas.size(); ++j) {
    if (cs.formulas[j].kind() != K::Pred) continue;
    WorldSet ext(nt, false);
    bool any = false;
    for (int a = 0; a < nt; ++a) {
      ext[a] = types[a].members[j];
      any = any || ext[a];
    }
    if (any) md.atoms[cs.formulas[j]] = ext;
  }

  out.top_type.assign(m.size(), -1);
  for (int a = 0; a < nt; ++a)
    for (auto [s, layer] : types[a].sources)
      if (layer == k + 1) out.top_type[s] = a;
  return out;
}

TruthLemmaReport check_truth_lemma(const Filtration& f) {
  TruthLemmaReport rep;
  Evaluator ev = Evaluator::general(f.model);
  const auto& cs = f.closure;
  for (std::size_t j = 0; j < cs.formulas.size(); ++j) {
    const auto& truth = ev.truth(cs.formulas[j]);
    for (std::size_t a = 0; a < f.types.size(); ++a) {
      if (cs.depth[j] >= f.types[a].layer) continue;
      ++rep.checks;
      bool member = f.types[a].members[j];
      if (static_cast<bool>(truth[a]) != member && rep.failures.size() < 20)
        rep.failures.push_back(f.model.worlds[a] + ": " +
                               render(cs.formulas[j]) + " (expected " +
                               (member ? "true" : "false") + ")");
    }
  }
  return rep;
}

namespace {

Vocabulary vocabulary_of(Formula phi) {
  Vocabulary voc;
  for (const auto& v : variables_of(phi)) voc.variables.push_back(v);
  for (Formula f : subformulas(phi))
    if (f.kind() == K::Pred)
      voc.predicates[f.symbol()] = static_cast<int>(f.terms().size());
  return voc;
}

bool canonical(const std::vector<int>& g) {
  const int n = static_cast<int>(g.size());
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<int> h(n);
  while (std::next_permutation(p.begin(), p.end())) {
    for (int i = 0; i < n; ++i) h[p[i]] = p[g[i]];
    if (h < g) return false;
  }
  return true;
}

// Restricted growth strings of length n.
void for_each_rgs(int n, const std::function<bool(const std::vector<int>&)>& fn) {
  std::vector<int> cur(n, 0);
  std::function<bool(int, int)> rec = [&](int i, int top) {
    if (i == n) return fn(cur);
    for (int v = 0; v <= top + 1; ++v) {
      cur[i] = v;
      if (!rec(i + 1, std::max(top, v))) return false;
    }
    return true;
  };
  if (n > 0) {
    cur[0] = 0;
    rec(1, 0);
  }
}

}  // namespace

SatResult bounded_sat(Formula phi, const SatOptions& opts) {
  return bounded_sat(phi, vocabulary_of(phi), opts);
}

SatResult bounded_sat(Formula phi, const Vocabulary& voc,
                      const SatOptions& opts) {
  if (!valid_in(phi, Dialect::NonEmpty))
    throw Error(ErrorCode::DialectViolation,
                "bounded_sat needs a nonempty-dialect formula");
  check_formula(phi, voc, Dialect::NonEmpty);
  if (opts.max_states < 1)
    throw Error(ErrorCode::InvalidArgument, "max states must be positive");
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::milliseconds(opts.budget_ms);
  SatResult res;
  const int nv = static_cast<int>(voc.variables.size());

  std::vector<Formula> atoms;
  for (Formula f : subformulas(phi))
    if (f.kind() == K::Pred) atoms.push_back(f);

  auto out_of_time = [&] {
    if (Clock::now() < deadline) return false;
    res.budget_exhausted = true;
    return true;
  };

  // Returns false to stop the search.
  auto try_model = [&](DynamicalModel& m) {
    // Tuples at which the formula can consult each predicate.
    std::vector<std::pair<std::string, ValueTuple>> slots;
    {
      std::set<std::pair<std::string, ValueTuple>> seen;
      for (Formula a : atoms)
        for (int s = 0; s < m.size(); ++s) {
          ValueTuple t;
          for (Term arg : a.terms()) t.push_back(term_value(m, s, arg));
          if (seen.emplace(a.symbol(), t).second) slots.emplace_back(a.symbol(), t);
        }
    }
    if (slots.size() > 24)
      throw Error(ErrorCode::InvalidArgument,
                  "too many predicate cases for the bounded search");
    const std::uint64_t total = std::uint64_t{1} << slots.size();
    for (std::uint64_t bits = 0; bits < total; ++bits) {
      if (out_of_time()) return false;
      ++res.candidates;
      m.pred.clear();
      for (const auto& [p, arity] : voc.predicates) m.pred[p];
      for (std::size_t i = 0; i < slots.size(); ++i)
        if (bits & (std::uint64_t{1} << i))
          m.pred[slots[i].first].insert(slots[i].second);
      Evaluator ev = Evaluator::dynamical(m);
      auto w = ev.counterexample(Formula::negate(phi));
      if (!w) continue;
      GeneralRelationalModel gm = to_general(m, temporal_depth(phi), true);
      auto report = validate_general(gm, Dialect::NonEmpty);
      if (!report.ok())
        throw Error(ErrorCode::Internal,
                    "induced witness fails validation: " + report.summary());
      if (!eval_general(gm, *w, phi))
        throw Error(ErrorCode::Internal,
                    "induced witness disagrees with the dynamical model");
      res.sat = true;
      res.witness = std::move(gm);
      res.state = *w;
      return false;
    }
    return true;
  };

  for (int n = 1; n <= opts.max_states && !res.sat && !res.budget_exhausted;
       ++n) {
    std::vector<int> g(n, 0);
    bool go = true;
    while (go) {
      if (canonical(g)) {
        DynamicalModel m;
        m.voc = voc;
        for (int s = 0; s < n; ++s) m.states.push_back("s" + std::to_string(s));
        m.g = g;
        m.values.assign(n, std::vector<Value>(nv, Value{std::int64_t{0}}));
        // Each variable gets its own value range so predicates can tell
        // variables apart.
        std::function<bool(int)> assign = [&](int v) -> bool {
          if (v == nv) {
            // States are determined by their rows.
            std::set<std::vector<Value>> rows(m.values.begin(),
                                              m.values.end());
            return static_cast<int>(rows.size()) < n || try_model(m);
          }
          bool keep = true;
          for_each_rgs(n, [&](const std::vector<int>& labels) {
            for (int s = 0; s < n; ++s)
              m.values[s][v] = std::int64_t{v * n + labels[s]};
            keep = assign(v + 1);
            return keep;
          });
          return keep;
        };
        if (!assign(0)) break;
      }
      int i = n - 1;
      while (i >= 0 && ++g[i] == n) g[i--] = 0;
      go = i >= 0;
    }
  }
  res.elapsed_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return res;
}

}  // namespace dfd
