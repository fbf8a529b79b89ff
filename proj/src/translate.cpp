#include "dfd/translate.hpp"

#include <functional>
#include <map>

namespace dfd {

namespace {

using K = Formula::Kind;

void note(Trace* trace, const std::string& clause, Formula in, Formula out) {
  if (trace) trace->push_back(clause + ": " + render(in) + " => " + render(out));
}

// Rebuilds f bottom-up, applying `tf` to every term and `ff` to every
// rebuilt node.
Formula rebuild(Formula f, const std::function<Term(Term)>& tf,
                const std::function<Formula(Formula, Formula)>& ff) {
  Formula out;
  switch (f.kind()) {
    case K::Const:
      out = f;
      break;
    case K::Pred: {
      std::vector<Term> ts;
      for (Term t : f.terms()) ts.push_back(tf(t));
      out = Formula::pred(f.symbol(), ts);
      break;
    }
    case K::Ident:
      out = Formula::ident(tf(f.terms()[0]), tf(f.terms()[1]));
      break;
    case K::Not:
      out = Formula::negate(rebuild(f.child(), tf, ff));
      break;
    case K::And:
      out = Formula::conj(rebuild(f.child(0), tf, ff),
                          rebuild(f.child(1), tf, ff));
      break;
    case K::Next:
      out = Formula::next(rebuild(f.child(), tf, ff));
      break;
    case K::DepMod: {
      std::vector<Term> xs;
      for (Term t : f.termset()) xs.push_back(tf(t));
      out = Formula::dep_mod(TermSet(xs), rebuild(f.child(), tf, ff));
      break;
    }
    case K::DepAtom: {
      std::vector<Term> xs;
      for (Term t : f.termset()) xs.push_back(tf(t));
      out = Formula::dep_atom(TermSet(xs), tf(f.dep_target()));
      break;
    }
  }
  return ff(f, out);
}

Term identity_term(Term t) { return t; }

}  // namespace

Formula eliminate_next(Formula f, Trace* trace) {
  switch (f.kind()) {
    case K::Const:
    case K::Pred:
    case K::Ident:
    case K::DepAtom:
      return f;
    case K::Not:
      return Formula::negate(eliminate_next(f.child(), trace));
    case K::And:
      return Formula::conj(eliminate_next(f.child(0), trace),
                           eliminate_next(f.child(1), trace));
    case K::DepMod:
      return Formula::dep_mod(f.termset(), eliminate_next(f.child(), trace));
    case K::Next: {
      Formula out = next_shift(eliminate_next(f.child(), trace), 1);
      note(trace, "next-elim", f, out);
      return out;
    }
  }
  throw Error(ErrorCode::Internal, "unhandled formula kind");
}

Term tr_term(Term t, const LfdfSignature& sig) {
  std::map<std::pair<std::uint32_t, int>, Term> memo;
  std::function<Term(Term, int)> go = [&](Term u, int n) -> Term {
    auto key = std::make_pair(u.id(), n);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Term out;
    switch (u.kind()) {
      case Term::Kind::Var: {
        if (!sig.dfd.is_variable(u.symbol()))
          throw Error(ErrorCode::UnknownSymbol,
                      "unknown variable '" + u.symbol() + "'");
        if (n == 0) {
          out = u;
        } else {
          std::vector<Term> args;
          for (const auto& v : sig.dfd.variables)
            args.push_back(go(Term::var(v), n - 1));
          out = Term::app(sig.step_fn.at(u.symbol()), args);
        }
        break;
      }
      case Term::Kind::Next:
        out = go(u.operand(), n + 1);
        break;
      case Term::Kind::App: {
        std::vector<Term> args;
        for (Term a : u.args()) args.push_back(go(a, n));
        out = Term::app(u.symbol(), args);
        break;
      }
    }
    memo.emplace(key, out);
    return out;
  };
  return go(t, 0);
}

Formula tr_to_lfdf(Formula f, const LfdfSignature& sig, Trace* trace) {
  if (has_formula_next(f))
    throw Error(ErrorCode::InputHasFormulaNext,
                "eliminate formula-level next before translating: " +
                    render(f));
  const Term time = Term::var(sig.time_var);
  auto tf = [&](Term t) { return tr_term(t, sig); };
  return rebuild(f, tf, [&](Formula in, Formula out) {
    if (out.kind() == K::DepMod)
      out = Formula::dep_mod(out.termset().with(time), out.child());
    else if (out.kind() == K::DepAtom)
      out = Formula::dep_atom(out.termset().with(time), out.dep_target());
    else if (out.kind() != K::Pred && out.kind() != K::Ident)
      return out;
    note(trace, "tr", in, out);
    return out;
  });
}

Formula rho(Formula f, const std::string& time_var) {
  if (variables_of(f).count(time_var))
    throw Error(ErrorCode::AlreadyMentionsTimeVariable,
                "formula already mentions " + time_var);
  const Term time = Term::var(time_var);
  return rebuild(f, identity_term, [&](Formula, Formula out) {
    if (out.kind() == K::DepMod)
      return Formula::dep_mod(out.termset().with(time), out.child());
    if (out.kind() == K::DepAtom)
      return Formula::dep_atom(out.termset().with(time), out.dep_target());
    return out;
  });
}

Formula rho_inverse(Formula f, const std::string& time_var) {
  const Term time = Term::var(time_var);
  auto drop = [&](const TermSet& xs) {
    if (!xs.contains(time))
      throw Error(ErrorCode::InvalidArgument,
                  "subscript " + xs.str() + " lacks " + time_var);
    std::vector<Term> rest;
    for (Term t : xs)
      if (t != time) rest.push_back(t);
    return TermSet(rest);
  };
  Formula out = rebuild(f, identity_term, [&](Formula, Formula g) {
    if (g.kind() == K::DepMod) return Formula::dep_mod(drop(g.termset()), g.child());
    if (g.kind() == K::DepAtom)
      return Formula::dep_atom(drop(g.termset()), g.dep_target());
    return g;
  });
  if (variables_of(out).count(time_var))
    throw Error(ErrorCode::InvalidArgument,
                time_var + " occurs outside dependence subscripts");
  return out;
}

std::vector<std::vector<int>> equivalence_relations(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int top) {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (int c = 0; c <= top + 1; ++c) {
      cur.push_back(c);
      rec(std::max(top, c));
      cur.pop_back();
    }
  };
  if (n == 0) return {{}};
  cur.push_back(0);
  rec(0);
  return out;
}

Formula chi(const std::vector<std::string>& vars,
            const std::vector<int>& classes) {
  if (classes.size() != vars.size())
    throw Error(ErrorCode::InvalidArgument,
                "equivalence relation does not match the variables");
  std::vector<Formula> in, out;
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t j = 0; j < vars.size(); ++j) {
      Formula id = Formula::ident(Term::var(vars[i]), Term::var(vars[j]));
      if (classes[i] == classes[j])
        in.push_back(id);
      else
        out.push_back(Formula::negate(id));
    }
  in.insert(in.end(), out.begin(), out.end());
  return Formula::conj_all(in);
}

Formula eliminate_identity(Formula f, const std::vector<std::string>& vars,
                           const std::vector<int>& classes, Trace* trace) {
  if (classes.size() != vars.size())
    throw Error(ErrorCode::InvalidArgument,
                "equivalence relation does not match the variables");
  std::map<std::string, Term> sigma;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    std::size_t first = i;
    for (std::size_t j = 0; j < i; ++j)
      if (classes[j] == classes[i]) {
        first = j;
        break;
      }
    sigma[vars[i]] = Term::var(vars[first]);
  }
  Formula renamed = substitute(f, sigma);
  return rebuild(renamed, identity_term, [&](Formula, Formula g) {
    if (g.kind() != K::Ident) return g;
    Term a = g.terms()[0], b = g.terms()[1];
    Formula out = g;
    if (a == b)
      out = Formula::constant(true);
    else if (a.kind() == Term::Kind::Var && b.kind() == Term::Kind::Var)
      out = Formula::constant(false);
    if (out != g) note(trace, "identity", g, out);
    return out;
  });
}

Formula eliminate_identity(Formula f, const std::vector<std::string>& vars,
                           Trace* trace) {
  std::vector<Formula> cases;
  for (const auto& e : equivalence_relations(static_cast<int>(vars.size())))
    cases.push_back(eliminate_identity(f, vars, e, trace));
  return Formula::disj_all(cases);
}

Formula identity_case_split(Formula f, const std::vector<std::string>& vars) {
  std::vector<Formula> cases;
  for (const auto& e : equivalence_relations(static_cast<int>(vars.size())))
    cases.push_back(
        Formula::conj(eliminate_identity(f, vars, e), chi(vars, e)));
  return Formula::disj_all(cases);
}

Flattened flatten_functions(Formula f, const Vocabulary& voc) {
  Flattened out;
  out.voc = voc;
  std::map<std::uint32_t, Term> named;
  std::vector<Formula> constraints;
  int counter = 0;
  std::function<Term(Term)> go = [&](Term t) -> Term {
    switch (t.kind()) {
      case Term::Kind::Var:
        return t;
      case Term::Kind::Next:
        return Term::next(go(t.operand()));
      case Term::Kind::App: {
        if (auto it = named.find(t.id()); it != named.end()) return it->second;
        std::vector<Term> args;
        for (Term a : t.args()) args.push_back(go(a));
        std::string name;
        do {
          name = "w" + std::to_string(++counter);
        } while (out.voc.is_variable(name) || out.voc.is_predicate(name) ||
                 out.voc.is_function(name));
        out.voc.variables.push_back(name);
        Term w = Term::var(name);
        out.definitions.emplace_back(name, Term::app(t.symbol(), args));
        constraints.push_back(Formula::dep_mod(
            TermSet{}, Formula::dep_atom(TermSet(args), w)));
        named.emplace(t.id(), w);
        return w;
      }
    }
    throw Error(ErrorCode::Internal, "unhandled term kind");
  };
  out.body = rebuild(f, go, [](Formula, Formula g) { return g; });
  out.constraints = Formula::conj_all(constraints);
  out.voc.functions.clear();
  return out;
}

}  // namespace dfd
