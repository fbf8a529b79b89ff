#include "dfd/proofsys.hpp"

#include <algorithm>

#include "dfd/analysis.hpp"
#include "dfd/io.hpp"
#include "dfd/semantics.hpp"

namespace dfd {

namespace {

using K = Formula::Kind;
constexpr Dialect kC = Dialect::Core, kN = Dialect::NonEmpty,
                  kT = Dialect::Timed, kF = Dialect::TimedFuncId;

Formula F(const Bindings& b, const std::string& s) {
  auto it = b.formulas.find(s);
  if (it == b.formulas.end())
    throw Error(ErrorCode::UnboundSlot, "slot '" + s + "' is unbound");
  return it->second;
}
Term T(const Bindings& b, const std::string& s) {
  auto it = b.terms.find(s);
  if (it == b.terms.end())
    throw Error(ErrorCode::UnboundSlot, "slot '" + s + "' is unbound");
  return it->second;
}
TermSet S(const Bindings& b, const std::string& s) {
  auto it = b.sets.find(s);
  if (it == b.sets.end())
    throw Error(ErrorCode::UnboundSlot, "slot '" + s + "' is unbound");
  return it->second;
}
int I(const Bindings& b, const std::string& s) {
  auto it = b.ints.find(s);
  if (it == b.ints.end())
    throw Error(ErrorCode::UnboundSlot, "slot '" + s + "' is unbound");
  if (it->second < 0)
    throw Error(ErrorCode::InvalidArgument, "slot '" + s + "' is negative");
  return it->second;
}

TermSet shift(const TermSet& xs, int n) {
  std::vector<Term> out;
  for (Term t : xs) out.push_back(Term::next(t, n));
  return TermSet(out);
}

Formula atom_of(const Bindings& b, const std::string& s) {
  Formula p = F(b, s);
  if (p.kind() != K::Pred)
    throw Error(ErrorCode::InvalidArgument,
                "slot '" + s + "' needs a predicate atom");
  return p;
}

Term app_of(const Bindings& b, const std::string& s) {
  Term t = T(b, s);
  if (t.kind() != Term::Kind::App)
    throw Error(ErrorCode::InvalidArgument,
                "slot '" + s + "' needs a function application");
  return t;
}

const std::vector<Dialect> kAll{kC, kN, kT, kF};

Slot fs(const char* n) { return {n, SlotKind::Formula}; }
Slot as(const char* n) { return {n, SlotKind::Atom}; }
Slot ts(const char* n) { return {n, SlotKind::Term}; }
Slot ss(const char* n) { return {n, SlotKind::TermSet}; }
Slot is(const char* n) { return {n, SlotKind::Int}; }

std::vector<AxiomSchema> make_schemas() {
  using B = const Bindings&;
  using V = const Vocabulary&;
  using A = const AxiomSchema&;
  std::vector<AxiomSchema> v;
  auto add = [&](std::string name, std::vector<Slot> slots, std::string pat,
                 std::vector<Dialect> systems, SchemaBuilder build,
                 bool derived = false) {
    v.push_back(AxiomSchema{std::move(name), std::move(slots), std::move(pat),
                            std::move(systems), derived, std::move(build)});
  };

  add("O-Distribution", {fs("phi"), fs("psi")},
      "O(phi -> psi) -> (O phi -> O psi)", kAll, [](A, B b, V) {
        Formula p = F(b, "phi"), q = F(b, "psi");
        return Formula::implies(
            Formula::next(Formula::implies(p, q)),
            Formula::implies(Formula::next(p), Formula::next(q)));
      });
  add("Functionality", {fs("phi")}, "O !phi <-> !O phi", kAll, [](A, B b, V) {
    Formula p = F(b, "phi");
    return Formula::iff(Formula::next(Formula::negate(p)),
                        Formula::negate(Formula::next(p)));
  });
  add("D-Distribution", {ss("X"), fs("phi"), fs("psi")},
      "D[X](phi -> psi) -> (D[X] phi -> D[X] psi)", kAll, [](A, B b, V) {
        TermSet x = S(b, "X");
        Formula p = F(b, "phi"), q = F(b, "psi");
        return Formula::implies(
            Formula::dep_mod(x, Formula::implies(p, q)),
            Formula::implies(Formula::dep_mod(x, p), Formula::dep_mod(x, q)));
      });
  add("D-Introduction1", {as("P")}, "P(x1..xn) -> D[x1..xn] P(x1..xn)", kAll,
      [](A, B b, V) {
        Formula p = atom_of(b, "P");
        return Formula::implies(p, Formula::dep_mod(TermSet(p.terms()), p));
      });
  add("D-Introduction2", {ss("X"), ts("y")}, "dep[X] y -> D[X] dep[X] y",
      kAll, [](A, B b, V) {
        Formula d = Formula::dep_atom(S(b, "X"), T(b, "y"));
        return Formula::implies(d, Formula::dep_mod(S(b, "X"), d));
      });
  add("D-T", {ss("X"), fs("phi")}, "D[X] phi -> phi", kAll, [](A, B b, V) {
    return Formula::implies(Formula::dep_mod(S(b, "X"), F(b, "phi")),
                            F(b, "phi"));
  });
  add("D-4", {ss("X"), fs("phi")}, "D[X] phi -> D[X] D[X] phi", kAll,
      [](A, B b, V) {
        Formula d = Formula::dep_mod(S(b, "X"), F(b, "phi"));
        return Formula::implies(d, Formula::dep_mod(S(b, "X"), d));
      });
  add("D-5", {ss("X"), fs("phi")}, "!D[X] phi -> D[X] !D[X] phi", kAll,
      [](A, B b, V) {
        Formula nd =
            Formula::negate(Formula::dep_mod(S(b, "X"), F(b, "phi")));
        return Formula::implies(nd, Formula::dep_mod(S(b, "X"), nd));
      });
  add("Dep-Ref", {ss("X"), ts("x")}, "dep[X] x, for x in X", kAll,
      [](A, B b, V) {
        if (!S(b, "X").contains(T(b, "x")))
          throw Error(ErrorCode::InvalidArgument,
                      "Dep-Ref needs x to be a member of X");
        return Formula::dep_atom(S(b, "X"), T(b, "x"));
      });
  add("Dep-Trans", {ss("X"), ss("Y"), ss("Z")},
      "dep[X] Y & dep[Y] Z -> dep[X] Z", kAll, [](A, B b, V) {
        return Formula::implies(
            Formula::conj(dep_all(S(b, "X"), S(b, "Y")),
                          dep_all(S(b, "Y"), S(b, "Z"))),
            dep_all(S(b, "X"), S(b, "Z")));
      });
  add("Determinism", {ts("v")}, "dep[V] O v, for a variable v", kAll,
      [](A, B b, V voc) {
        Term v = T(b, "v");
        if (v.kind() != Term::Kind::Var)
          throw Error(ErrorCode::InvalidArgument,
                      "Determinism needs a basic variable");
        std::vector<Term> all;
        for (const auto& name : voc.variables) all.push_back(Term::var(name));
        return Formula::dep_atom(TermSet(all), Term::next(v));
      });
  add("Transfer", {ss("X"), ss("Y"), fs("phi")},
      "dep[X] Y & D[Y] phi -> D[X] phi", kAll, [](A, B b, V) {
        return Formula::implies(
            Formula::conj(dep_all(S(b, "X"), S(b, "Y")),
                          Formula::dep_mod(S(b, "Y"), F(b, "phi"))),
            Formula::dep_mod(S(b, "X"), F(b, "phi")));
      });
  add("D-Next", {fs("phi")}, "D[] phi -> O phi", {kC}, [](A, B b, V) {
    return Formula::implies(Formula::dep_mod(TermSet{}, F(b, "phi")),
                            Formula::next(F(b, "phi")));
  });
  add("Atomic-Reduction", {as("P")}, "O P(x1..xk) <-> P(Ox1..Oxk)", kAll,
      [](A, B b, V) {
        Formula p = atom_of(b, "P");
        std::vector<Term> shifted;
        for (Term t : p.terms()) shifted.push_back(Term::next(t));
        return Formula::iff(Formula::next(p),
                            Formula::pred(p.symbol(), shifted));
      });
  add("Next-Time1", {ss("X"), fs("phi")}, "O D[X] phi -> D[OX] O phi",
      {kC, kN}, [](A, B b, V) {
        return Formula::implies(
            Formula::next(Formula::dep_mod(S(b, "X"), F(b, "phi"))),
            Formula::dep_mod(shift(S(b, "X"), 1), Formula::next(F(b, "phi"))));
      });
  add("Next-Time2", {ss("X"), ts("y")}, "O dep[X] y -> dep[OX] O y", {kC, kN},
      [](A, B b, V) {
        return Formula::implies(
            Formula::next(Formula::dep_atom(S(b, "X"), T(b, "y"))),
            Formula::dep_atom(shift(S(b, "X"), 1), Term::next(T(b, "y"))));
      });
  add("t-Next-Time1", {ss("X"), fs("phi")}, "O D[X] phi <-> D[OX] O phi",
      {kT, kF}, [](A, B b, V) {
        return Formula::iff(
            Formula::next(Formula::dep_mod(S(b, "X"), F(b, "phi"))),
            Formula::dep_mod(shift(S(b, "X"), 1), Formula::next(F(b, "phi"))));
      });
  add("t-Next-Time2", {ss("X"), ts("y")}, "O dep[X] y <-> dep[OX] O y",
      {kT, kF}, [](A, B b, V) {
        return Formula::iff(
            Formula::next(Formula::dep_atom(S(b, "X"), T(b, "y"))),
            Formula::dep_atom(shift(S(b, "X"), 1), Term::next(T(b, "y"))));
      });
  add("Function-Dependence", {ts("t")}, "dep[x1..xn] f(x1..xn)", {kF},
      [](A, B b, V) {
        Term t = app_of(b, "t");
        return Formula::dep_atom(TermSet(t.args()), t);
      });
  add("Identity-Reflexivity", {ts("x")}, "x == x", {kF}, [](A, B b, V) {
    return Formula::ident(T(b, "x"), T(b, "x"));
  });
  add("Identity-Substitution", {ts("x"), ts("y"), fs("phi"), is("k")},
      "x == y -> (phi -> phi[y at the k-th occurrence of x])", {kF},
      [](A, B b, V) {
        Formula p = F(b, "phi");
        Formula q = replace_occurrence(p, T(b, "x"), T(b, "y"), I(b, "k"));
        return Formula::implies(Formula::ident(T(b, "x"), T(b, "y")),
                                Formula::implies(p, q));
      });
  add("Term-Reduction", {ts("t")}, "O f(x1..xn) == f(Ox1..Oxn)", {kF},
      [](A, B b, V) {
        Term t = app_of(b, "t");
        std::vector<Term> shifted;
        for (Term a : t.args()) shifted.push_back(Term::next(a));
        return Formula::ident(Term::next(t), Term::app(t.symbol(), shifted));
      });

  const std::vector<Dialect> untimed{kC, kN};
  add("Additivity", {ss("X"), ss("Y"), ss("Z"), ss("U")},
      "dep[X] Y & dep[Z] U -> dep[X+Z] (Y+U)", untimed,
      [](A, B b, V) {
        return Formula::implies(
            Formula::conj(dep_all(S(b, "X"), S(b, "Y")),
                          dep_all(S(b, "Z"), S(b, "U"))),
            dep_all(S(b, "X").united(S(b, "Z")),
                    S(b, "Y").united(S(b, "U"))));
      },
      true);
  add("Monotonicity-Dependence", {ss("X"), ts("y"), ss("Z")},
      "dep[X] y -> dep[X+Z] y", untimed,
      [](A, B b, V) {
        return Formula::implies(
            Formula::dep_atom(S(b, "X"), T(b, "y")),
            Formula::dep_atom(S(b, "X").united(S(b, "Z")), T(b, "y")));
      },
      true);
  add("Monotonicity-Quantifier", {ss("X"), ss("Z"), fs("phi")},
      "D[X] phi -> D[X+Z] phi", untimed,
      [](A, B b, V) {
        return Formula::implies(
            Formula::dep_mod(S(b, "X"), F(b, "phi")),
            Formula::dep_mod(S(b, "X").united(S(b, "Z")), F(b, "phi")));
      },
      true);
  add("Dyn-Transfer", {ss("X"), ss("Y"), is("n"), fs("phi")},
      "dep[X] O^n Y & O^n D[Y] phi -> D[X] O^n phi", untimed,
      [](A, B b, V) {
        int n = I(b, "n");
        return Formula::implies(
            Formula::conj(
                dep_all(S(b, "X"), shift(S(b, "Y"), n)),
                Formula::next(Formula::dep_mod(S(b, "Y"), F(b, "phi")), n)),
            Formula::dep_mod(S(b, "X"), Formula::next(F(b, "phi"), n)));
      },
      true);
  add("Dyn-Trans", {ss("X"), ss("Y"), ss("Z"), is("n"), is("m")},
      "dep[X] O^n Y & O^n dep[Y] O^m Z -> dep[X] O^(m+n) Z", untimed,
      [](A, B b, V) {
        int n = I(b, "n"), m = I(b, "m");
        return Formula::implies(
            Formula::conj(dep_all(S(b, "X"), shift(S(b, "Y"), n)),
                          Formula::next(
                              dep_all(S(b, "Y"), shift(S(b, "Z"), m)), n)),
            dep_all(S(b, "X"), shift(S(b, "Z"), m + n)));
      },
      true);
  add("O-D_V-Commutation", {fs("phi")}, "O D[V] phi -> D[V] O phi", untimed,
      [](A, B b, V voc) {
        std::vector<Term> all;
        for (const auto& name : voc.variables) all.push_back(Term::var(name));
        TermSet vs(all);
        return Formula::implies(
            Formula::next(Formula::dep_mod(vs, F(b, "phi"))),
            Formula::dep_mod(vs, Formula::next(F(b, "phi"))));
      },
      true);
  return v;
}

// Applies `fn` to each term occurrence in traversal order and rebuilds.
struct OccurrenceWalker {
  std::function<Term(Term)> visit;

  Term term(Term t) {
    Term here = visit(t);
    if (here != t) return here;
    switch (t.kind()) {
      case Term::Kind::Var:
        return t;
      case Term::Kind::Next:
        return Term::next(term(t.operand()));
      case Term::Kind::App: {
        std::vector<Term> args;
        for (Term a : t.args()) args.push_back(term(a));
        return Term::app(t.symbol(), args);
      }
    }
    return t;
  }

  TermSet set(const TermSet& xs) {
    std::vector<Term> out;
    for (Term t : xs) out.push_back(term(t));
    return TermSet(out);
  }

  Formula formula(Formula f) {
    switch (f.kind()) {
      case K::Const:
        return f;
      case K::Pred: {
        std::vector<Term> ts;
        for (Term t : f.terms()) ts.push_back(term(t));
        return Formula::pred(f.symbol(), ts);
      }
      case K::Ident: {
        Term a = term(f.terms()[0]);
        Term b = term(f.terms()[1]);
        return Formula::ident(a, b);
      }
      case K::Not:
        return Formula::negate(formula(f.child()));
      case K::And: {
        Formula a = formula(f.child(0));
        Formula b = formula(f.child(1));
        return Formula::conj(a, b);
      }
      case K::Next:
        return Formula::next(formula(f.child()));
      case K::DepMod: {
        TermSet xs = set(f.termset());
        return Formula::dep_mod(xs, formula(f.child()));
      }
      case K::DepAtom: {
        TermSet xs = set(f.termset());
        return Formula::dep_atom(xs, term(f.dep_target()));
      }
    }
    return f;
  }
};

}  // namespace

bool AxiomSchema::in(Dialect system) const {
  return std::find(systems.begin(), systems.end(), system) != systems.end();
}

const std::vector<AxiomSchema>& all_schemas() {
  static const std::vector<AxiomSchema> schemas = make_schemas();
  return schemas;
}

const AxiomSchema& find_schema(const std::string& name) {
  for (const auto& s : all_schemas())
    if (s.name == name) return s;
  throw Error(ErrorCode::InvalidArgument, "unknown axiom schema '" + name + "'");
}

std::vector<const AxiomSchema*> axioms_of(Dialect system) {
  std::vector<const AxiomSchema*> out;
  for (const auto& s : all_schemas())
    if (!s.derived && s.in(system)) out.push_back(&s);
  return out;
}

std::vector<const AxiomSchema*> derived_principles() {
  std::vector<const AxiomSchema*> out;
  for (const auto& s : all_schemas())
    if (s.derived) out.push_back(&s);
  return out;
}

Formula dep_all(const TermSet& xs, const TermSet& ys) {
  std::vector<Formula> parts;
  for (Term y : ys) parts.push_back(Formula::dep_atom(xs, y));
  return Formula::conj_all(parts);
}

Formula instantiate(const AxiomSchema& schema, const Bindings& b,
                    const Vocabulary& voc, Dialect system) {
  Formula f = schema.build(schema, b, voc);
  if (!valid_in(f, system))
    throw Error(ErrorCode::DialectViolation,
                schema.name + " instance is outside the " + to_string(system) +
                    " language: " + render(f));
  check_formula(f, voc, system);
  return f;
}

int count_occurrences(Formula f, Term t) {
  int count = 0;
  OccurrenceWalker w{[&](Term u) {
    if (u == t) ++count;
    return u;
  }};
  w.formula(f);
  return count;
}

Formula replace_occurrence(Formula f, Term from, Term to, int index) {
  int seen = 0;
  bool done = false;
  OccurrenceWalker w{[&](Term u) {
    if (u != from || done) return u;
    if (seen++ == index) {
      done = true;
      return to;
    }
    return u;
  }};
  Formula out = w.formula(f);
  if (!done)
    throw Error(ErrorCode::InvalidArgument,
                "formula has no occurrence " + std::to_string(index) + " of " +
                    render(from));
  return out;
}

Bindings random_bindings(Rng& rng, const AxiomSchema& schema,
                         const Vocabulary& voc, const GenOptions& o) {
  Bindings b;
  GenOptions sub = o;
  sub.formula_depth = std::max(0, o.formula_depth - 1);
  for (const auto& slot : schema.slots) {
    switch (slot.kind) {
      case SlotKind::Formula:
        b.formulas[slot.name] = random_formula(rng, voc, sub);
        break;
      case SlotKind::Atom:
        b.formulas[slot.name] = random_atom(rng, voc, o);
        break;
      case SlotKind::Term:
        b.terms[slot.name] = random_term(rng, voc, o);
        break;
      case SlotKind::TermSet:
        b.sets[slot.name] = random_termset(rng, voc, o);
        break;
      case SlotKind::Int:
        b.ints[slot.name] = uniform(rng, 0, 2);
        break;
    }
  }
  const std::string& n = schema.name;
  if (n == "Dep-Ref") {
    TermSet xs = b.sets["X"];
    if (xs.empty()) xs = TermSet{random_term(rng, voc, o)};
    b.sets["X"] = xs;
    b.terms["x"] = xs.terms()[uniform(rng, 0, xs.size() - 1)];
  } else if (n == "Determinism") {
    b.terms["v"] =
        Term::var(voc.variables[uniform(rng, 0, voc.variables.size() - 1)]);
  } else if (n == "Function-Dependence" || n == "Term-Reduction") {
    if (voc.functions.empty())
      throw Error(ErrorCode::InvalidArgument, n + " needs function symbols");
    auto it = voc.functions.begin();
    std::advance(it, uniform(rng, 0, voc.functions.size() - 1));
    GenOptions plain = o;
    plain.functions = false;
    std::vector<Term> args;
    for (int i = 0; i < it->second; ++i)
      args.push_back(random_term(rng, voc, plain));
    b.terms["t"] = Term::app(it->first, args);
  } else if (n == "Identity-Substitution") {
    Formula p = b.formulas["phi"];
    std::vector<Term> occurring;
    OccurrenceWalker w{[&](Term u) {
      occurring.push_back(u);
      return u;
    }};
    w.formula(p);
    if (occurring.empty()) {
      p = random_atom(rng, voc, o);
      b.formulas["phi"] = p;
      occurring = p.terms();
    }
    Term x = occurring[uniform(rng, 0, occurring.size() - 1)];
    b.terms["x"] = x;
    b.ints["k"] = uniform(rng, 0, count_occurrences(p, x) - 1);
  }
  return b;
}

bool is_tautology(Formula f, int max_atoms) {
  std::vector<Formula> atoms;
  std::map<std::uint32_t, int> index;
  std::function<void(Formula)> collect = [&](Formula g) {
    if (g.kind() == K::Not) return collect(g.child());
    if (g.kind() == K::And) {
      collect(g.child(0));
      collect(g.child(1));
      return;
    }
    if (g.kind() == K::Const) return;
    if (index.emplace(g.id(), static_cast<int>(atoms.size())).second)
      atoms.push_back(g);
  };
  collect(f);
  if (static_cast<int>(atoms.size()) > max_atoms)
    throw Error(ErrorCode::InvalidArgument,
                "too many propositional atoms (" +
                    std::to_string(atoms.size()) + ")");
  std::function<bool(Formula, std::uint64_t)> eval = [&](Formula g,
                                                         std::uint64_t row) {
    switch (g.kind()) {
      case K::Const:
        return g.value();
      case K::Not:
        return !eval(g.child(), row);
      case K::And:
        return eval(g.child(0), row) && eval(g.child(1), row);
      default:
        return ((row >> index.at(g.id())) & 1u) != 0;
    }
  };
  const std::uint64_t rows = std::uint64_t{1} << atoms.size();
  for (std::uint64_t row = 0; row < rows; ++row)
    if (!eval(f, row)) return false;
  return true;
}

CheckResult check_derivation(const Derivation& d, Dialect system) {
  using R = Justification::Rule;
  auto fail = [](int line, std::string reason, std::string detail) {
    return CheckResult{false, line + 1, std::move(reason), std::move(detail)};
  };
  for (int i = 0; i < static_cast<int>(d.lines.size()); ++i) {
    const auto& line = d.lines[i];
    Formula cur = line.formula;
    if (!valid_in(cur, system))
      return fail(i, "dialect-violation", render(cur));
    try {
      check_formula(cur, d.voc, system);
    } catch (const Error& e) {
      return fail(i, "bad-formula", e.what());
    }
    auto premise = [&](int p) -> const Formula* {
      if (p < 0 || p >= i) return nullptr;
      return &d.lines[p].formula;
    };
    const auto& by = line.by;
    switch (by.rule) {
      case R::Axiom: {
        const AxiomSchema* schema = nullptr;
        for (const auto& s : all_schemas())
          if (s.name == by.schema) schema = &s;
        if (!schema) return fail(i, "unknown-schema", by.schema);
        if (schema->derived) return fail(i, "not-an-axiom", by.schema);
        if (!schema->in(system))
          return fail(i, "schema-not-in-system",
                      by.schema + " is not an axiom of " + to_string(system));
        Formula expected;
        try {
          expected = instantiate(*schema, by.bindings, d.voc, system);
        } catch (const Error& e) {
          return fail(i, "bad-instance", e.what());
        }
        if (expected != cur)
          return fail(i, "not-an-instance",
                      "expected " + render(expected));
        break;
      }
      case R::ModusPonens: {
        const Formula* a = premise(by.premise1);
        const Formula* b = premise(by.premise2);
        if (!a || !b) return fail(i, "premise-out-of-range", "");
        if (*b != Formula::implies(*a, cur) && *a != Formula::implies(*b, cur))
          return fail(i, "mp-mismatch",
                      "premises do not have the form phi, phi -> " +
                          render(cur));
        break;
      }
      case R::DNecessitation: {
        const Formula* a = premise(by.premise1);
        if (!a) return fail(i, "premise-out-of-range", "");
        if (system == Dialect::NonEmpty && by.xs.empty())
          return fail(i, "dialect-violation",
                      "D-Necessitation needs a non-empty set here");
        if (cur != Formula::dep_mod(by.xs, *a))
          return fail(i, "dnec-mismatch",
                      "expected " + render(Formula::dep_mod(by.xs, *a)));
        break;
      }
      case R::ONecessitation: {
        if (system == Dialect::Core)
          return fail(i, "rule-not-in-system",
                      "O-Necessitation is not a rule of dfd");
        const Formula* a = premise(by.premise1);
        if (!a) return fail(i, "premise-out-of-range", "");
        if (cur != Formula::next(*a))
          return fail(i, "onec-mismatch",
                      "expected " + render(Formula::next(*a)));
        break;
      }
      case R::Tautology: {
        bool ok = false;
        try {
          ok = is_tautology(cur);
        } catch (const Error& e) {
          return fail(i, "tautology-too-large", e.what());
        }
        if (!ok) return fail(i, "not-a-tautology", render(cur));
        break;
      }
    }
  }
  return {};
}

CheckResult check_derivation(const Derivation& d) {
  return check_derivation(d, d.system);
}

Derivation derivation_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("derivation is not valid JSON: ") + e.what());
  }
  Derivation d;
  try {
    d.system = dialect_from_string(j.at("system").get<std::string>());
    d.voc = vocabulary_from_json(j.at("vocabulary"));
    int lineno = 0;
    for (const auto& row : j.at("lines")) {
      ++lineno;
      auto where = [&](const std::string& msg) {
        return "line " + std::to_string(lineno) + ": " + msg;
      };
      DerivationLine line;
      try {
        line.formula =
            parse_formula(row.at("formula").get<std::string>(), d.voc, d.system);
      } catch (const Error& e) {
        throw Error(e.code(), where(e.what()));
      }
      const json& by = row.at("by");
      const std::string rule = by.at("rule").get<std::string>();
      auto& jb = line.by;
      using R = Justification::Rule;
      if (rule == "axiom") {
        jb.rule = R::Axiom;
        jb.schema = by.at("schema").get<std::string>();
        const AxiomSchema* schema = nullptr;
        for (const auto& s : all_schemas())
          if (s.name == jb.schema) schema = &s;
        if (schema && by.contains("bindings")) {
          const json& bj = by.at("bindings");
          for (const auto& slot : schema->slots) {
            if (!bj.contains(slot.name)) continue;
            const json& v = bj.at(slot.name);
            try {
              switch (slot.kind) {
                case SlotKind::Formula:
                case SlotKind::Atom:
                  jb.bindings.formulas[slot.name] =
                      parse_formula(v.get<std::string>(), d.voc, d.system);
                  break;
                case SlotKind::Term:
                  jb.bindings.terms[slot.name] =
                      parse_term(v.get<std::string>(), d.voc, d.system);
                  break;
                case SlotKind::TermSet:
                  jb.bindings.sets[slot.name] =
                      parse_termset(v.get<std::string>(), d.voc, d.system);
                  break;
                case SlotKind::Int:
                  jb.bindings.ints[slot.name] = v.get<int>();
                  break;
              }
            } catch (const Error& e) {
              throw Error(e.code(), where(slot.name + ": " + e.what()));
            }
          }
        }
      } else if (rule == "mp") {
        jb.rule = R::ModusPonens;
        jb.premise1 = by.at("premises").at(0).get<int>() - 1;
        jb.premise2 = by.at("premises").at(1).get<int>() - 1;
      } else if (rule == "dnec") {
        jb.rule = R::DNecessitation;
        jb.premise1 = by.at("premise").get<int>() - 1;
        jb.xs = parse_termset(by.at("X").get<std::string>(), d.voc, Dialect::Core);
      } else if (rule == "onec") {
        jb.rule = R::ONecessitation;
        jb.premise1 = by.at("premise").get<int>() - 1;
      } else if (rule == "tautology") {
        jb.rule = R::Tautology;
      } else {
        throw Error(ErrorCode::InvalidArgument, where("unknown rule " + rule));
      }
      d.lines.push_back(std::move(line));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("malformed derivation: ") + e.what());
  }
  return d;
}

std::string derivation_to_json_text(const Derivation& d) {
  using R = Justification::Rule;
  json j;
  j["system"] = to_string(d.system);
  j["vocabulary"] = to_json(d.voc);
  json lines = json::array();
  for (const auto& line : d.lines) {
    json row;
    row["formula"] = render(line.formula);
    json by;
    switch (line.by.rule) {
      case R::Axiom: {
        by["rule"] = "axiom";
        by["schema"] = line.by.schema;
        json bj = json::object();
        for (const auto& [k, v] : line.by.bindings.formulas) bj[k] = render(v);
        for (const auto& [k, v] : line.by.bindings.terms) bj[k] = render(v);
        for (const auto& [k, v] : line.by.bindings.sets) bj[k] = v.str();
        for (const auto& [k, v] : line.by.bindings.ints) bj[k] = v;
        by["bindings"] = bj;
        break;
      }
      case R::ModusPonens:
        by["rule"] = "mp";
        by["premises"] = {line.by.premise1 + 1, line.by.premise2 + 1};
        break;
      case R::DNecessitation:
        by["rule"] = "dnec";
        by["premise"] = line.by.premise1 + 1;
        by["X"] = line.by.xs.str();
        break;
      case R::ONecessitation:
        by["rule"] = "onec";
        by["premise"] = line.by.premise1 + 1;
        break;
      case R::Tautology:
        by["rule"] = "tautology";
        break;
    }
    row["by"] = by;
    lines.push_back(row);
  }
  j["lines"] = lines;
  return j.dump(2) + "\n";
}

std::vector<DynamicalModel> soundness_suite(Dialect system, int count,
                                            std::uint64_t seed) {
  const bool timed = system == Dialect::Timed || system == Dialect::TimedFuncId;
  std::map<std::string, int> funcs;
  if (system == Dialect::TimedFuncId) funcs = {{"f", 1}, {"S", 2}};
  Vocabulary voc = make_vocabulary(3, {{"P", 1}, {"R", 2}}, funcs);
  Rng rng(seed);
  std::vector<DynamicalModel> out;
  while (static_cast<int>(out.size()) < count) {
    const int range = uniform(rng, 2, 3);
    DynamicalModel m;
    if (timed) {
      const int chains = uniform(rng, 0, 2);
      const int horizon = chains == 0 ? 0 : uniform(rng, 1, 3);
      const int used = chains * (horizon + 1);
      const int cycles = chains == 0 ? uniform(rng, 1, 8)
                                     : uniform(rng, 0, std::min(4, 8 - used));
      m = random_timed(rng, voc, chains, horizon, cycles, range);
    } else {
      m = random_dynamical(rng, voc, uniform(rng, 1, 8), range);
    }
    if (!validate_dynamical(m).ok())
      throw Error(ErrorCode::Internal, "generated suite model is invalid");
    out.push_back(std::move(m));
  }
  return out;
}

SoundnessReport soundness_harness(Dialect system,
                                  const std::vector<DynamicalModel>& models,
                                  int samples, int max_depth,
                                  std::uint64_t seed, bool include_derived) {
  SoundnessReport rep;
  if (models.empty()) return rep;
  const Vocabulary& voc = models[0].voc;
  const bool timed = system == Dialect::Timed || system == Dialect::TimedFuncId;
  std::vector<const AxiomSchema*> schemas = axioms_of(system);
  if (include_derived && !timed)
    for (auto* s : derived_principles())
      if (s->in(system)) schemas.push_back(s);
  if (voc.functions.empty())
    std::erase_if(schemas, [](const AxiomSchema* s) {
      return s->name == "Function-Dependence" || s->name == "Term-Reduction";
    });

  std::vector<Evaluator> evals;
  std::vector<TimingMap> taus;
  for (const auto& m : models) {
    if (timed) {
      auto r = timing_map(m);
      if (!r.timed())
        throw Error(ErrorCode::NotTimed,
                    "soundness suite model is not timed");
      taus.push_back(r.map);
      evals.push_back(Evaluator::timed(m, taus.back()));
    } else {
      evals.push_back(Evaluator::dynamical(m));
    }
  }

  Rng rng(seed);
  GenOptions o = options_for(system, max_depth, 2);
  for (int k = 0; k < samples; ++k) {
    const AxiomSchema& schema = *schemas[k % schemas.size()];
    Formula inst;
    for (int attempt = 0; attempt < 50 && !inst.valid(); ++attempt) {
      try {
        inst = instantiate(schema, random_bindings(rng, schema, voc, o), voc,
                           system);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DialectViolation) throw;
      }
    }
    if (!inst.valid())
      throw Error(ErrorCode::Internal,
                  "no admissible instance of " + schema.name);
    ++rep.instances;
    ++rep.per_schema[schema.name];
    const int depth = temporal_depth(inst);
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      const auto& truth = evals[mi].truth(inst);
      std::vector<bool> ok_states(models[mi].size(), true);
      if (timed) ok_states = reliable_states(models[mi], taus[mi], depth);
      for (int s = 0; s < models[mi].size(); ++s) {
        if (!ok_states[s]) continue;
        ++rep.checks;
        if (!truth[s]) {
          rep.failures.push_back({schema.name, render(inst),
                                  static_cast<int>(mi),
                                  models[mi].states[s]});
          break;
        }
      }
    }
  }
  return rep;
}

}  // namespace dfd
