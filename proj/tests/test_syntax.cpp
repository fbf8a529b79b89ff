#include <doctest.h>

#include "dfd/gen.hpp"
#include "dfd/syntax.hpp"

using namespace dfd;

namespace {

Vocabulary voc_xyz() {
  return make_vocabulary(3, {{"P", 1}, {"Q", 1}, {"R", 2}}, {{"f", 1}, {"S", 2}});
}

Vocabulary voc_v() {
  Vocabulary voc;
  voc.variables = {"v"};
  voc.predicates = {{"P", 1}, {"Q", 1}};
  return voc;
}

Formula p(const std::string& s, Dialect d = Dialect::TimedFuncId) {
  return parse_formula(s, voc_xyz(), d);
}

ErrorCode parse_error(const std::string& s, Dialect d) {
  try {
    parse_formula(s, voc_xyz(), d);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error for " << s);
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("grammar productions") {
  Formula f = p("dep[x] y");
  CHECK(f.kind() == Formula::Kind::DepAtom);
  CHECK(f.termset() == TermSet{Term::var("x")});
  CHECK(f.dep_target() == Term::var("y"));

  Formula g = p("D[x,Ox] O O P(x)");
  REQUIRE(g.kind() == Formula::Kind::DepMod);
  CHECK(g.termset() == TermSet{Term::var("x"), Term::next(Term::var("x"))});
  CHECK(g.child() ==
        Formula::next(Formula::next(Formula::pred("P", {Term::var("x")}))));
}

TEST_CASE("dialect gates") {
  CHECK(parse_error("Ox == y", Dialect::Core) ==
        ErrorCode::IdentityNotInDialect);
  CHECK(parse_error("P(f(x))", Dialect::Timed) ==
        ErrorCode::FunctionNotInDialect);
  CHECK(parse_error("D[] P(x)", Dialect::NonEmpty) ==
        ErrorCode::EmptyDependenceSet);
  CHECK(parse_error("dep[] x", Dialect::NonEmpty) ==
        ErrorCode::EmptyDependenceSet);
  CHECK_NOTHROW(p("D[] P(x)", Dialect::Core));
  CHECK(parse_error("P(x,y)", Dialect::Core) == ErrorCode::ArityMismatch);
  CHECK(parse_error("P(q)", Dialect::Core) == ErrorCode::UnknownSymbol);
  CHECK(parse_error("P(x) # P(x)", Dialect::Core) == ErrorCode::Lexical);
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_formula("D[x] (P(x)", voc_xyz(), Dialect::Core);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Syntax);
    REQUIRE(e.position().has_value());
    CHECK(*e.position() == 10);
  }
}

TEST_CASE("rendering") {
  CHECK(render(p("dep[x] y")) == "dep[x] y");
  Vocabulary v = voc_v();
  Formula f = Formula::next(
      Formula::pred("P", {Term::next(Term::var("v"))}));
  CHECK(render(f) == "O P(Ov)");
  CHECK(parse_formula("O P(Ov)", v, Dialect::Core) == f);
  Formula nested = Formula::conj(
      Formula::negate(Formula::conj(p("P(x)"), p("Q(y)"))), p("P(z)"));
  CHECK(render(nested) == "!(P(x) & Q(y)) & P(z)");
}

TEST_CASE("render and parse round trip on random formulas") {
  Vocabulary voc = voc_xyz();
  Rng rng(7);
  for (Dialect d : {Dialect::Core, Dialect::NonEmpty, Dialect::Timed,
                    Dialect::TimedFuncId}) {
    GenOptions o = options_for(d, 2, 4);
    for (int i = 0; i < 300; ++i) {
      Formula f = random_formula(rng, voc, o);
      CHECK(valid_in(f, d));
      CHECK(parse_formula(render(f), voc, d) == f);
    }
  }
}

TEST_CASE("temporal depth") {
  Term v = Term::var("v");
  CHECK(temporal_depth(Term::next(v, 2)) == 2);
  CHECK(temporal_depth(v) == 0);
  CHECK(temporal_depth(Formula::dep_atom(TermSet{Term::next(v)}, v)) == 1);
  CHECK(temporal_depth(p("O dep[x] Oy")) == 2);
  CHECK(temporal_depth(p("D[x] O O P(x)")) == 2);
}

TEST_CASE("depth identities for next macros") {
  Vocabulary voc = voc_xyz();
  Rng rng(11);
  GenOptions o = options_for(Dialect::Timed, 2, 3);
  for (int i = 0; i < 200; ++i) {
    TermSet xs = random_termset(rng, voc, o);
    Term y = random_term(rng, voc, o);
    Formula phi = random_formula(rng, voc, o);
    CHECK(temporal_depth(Formula::dep_atom(next_shift(xs, 1), Term::next(y))) ==
          temporal_depth(Formula::next(Formula::dep_atom(xs, y))));
    CHECK(temporal_depth(Formula::dep_mod(next_shift(xs, 1), Formula::next(phi))) ==
          temporal_depth(Formula::next(Formula::dep_mod(xs, phi))));
    if (!variables_of(phi).empty()) {
      CHECK(temporal_depth(next_shift(phi, 1)) == temporal_depth(phi) + 1);
    }
    CHECK(temporal_depth(strip_next(phi)) == 0);
  }
  Formula atom = p("R(x,Oy)");
  std::vector<Term> shifted;
  for (Term t : atom.terms()) shifted.push_back(Term::next(t));
  CHECK(temporal_depth(Formula::pred("R", shifted)) ==
        temporal_depth(Formula::next(atom)));
}

TEST_CASE("next shift") {
  Vocabulary v = voc_v();
  auto pv = [&](const std::string& s) {
    return parse_formula(s, v, Dialect::Core);
  };
  CHECK(next_shift(pv("P(v)"), 1) == pv("P(Ov)"));
  Formula f = pv("dep[v] Ov & D[v] P(v)");
  CHECK(next_shift(f, 0) == f);
  CHECK(next_shift(pv("dep[v] Ov"), 2) == pv("dep[OOv] OOOv"));
  CHECK(next_shift(p("P(S(x,Oy))"), 1) == p("P(S(Ox,OOy))"));
}

TEST_CASE("strip next and generalized subformulas") {
  Vocabulary v = voc_v();
  auto pv = [&](const std::string& s) {
    return parse_formula(s, v, Dialect::Core);
  };
  CHECK(strip_next(pv("P(Ov)")) == pv("P(v)"));
  CHECK(strip_next(pv("P(v)")) == pv("P(v)"));
  CHECK(strip_next(pv("D[Ov] O P(v)")) == pv("D[v] P(v)"));
  CHECK(is_generalized_subformula(pv("P(v)"), pv("O P(Ov)")));
  CHECK(is_generalized_subformula(pv("D[v] P(v)"), pv("D[v] P(v)")));
  CHECK_FALSE(is_generalized_subformula(pv("Q(v)"), pv("P(v)")));
}

TEST_CASE("term universe") {
  Vocabulary v = voc_v();
  auto u1 = term_universe(FormulaSet{parse_formula("P(Ov)", v, Dialect::Core)});
  CHECK(u1.variables == std::vector<std::string>{"v"});
  CHECK(u1.terms ==
        std::vector<Term>{Term::var("v"), Term::next(Term::var("v"))});
  auto u0 = term_universe(FormulaSet{parse_formula("P(v)", v, Dialect::Core)});
  CHECK(u0.terms == std::vector<Term>{Term::var("v")});
  auto u = term_universe(FormulaSet{p("R(x,OOy) & P(z)")});
  CHECK(u.terms.size() == u.variables.size() * (u.depth + 1));
  CHECK(u.terms.size() == 9);
}

TEST_CASE("closure of P(v)") {
  Vocabulary v = voc_v();
  auto pv = [&](const std::string& s) {
    return parse_formula(s, v, Dialect::NonEmpty);
  };
  FormulaSet c = closure(FormulaSet{pv("P(v)")});
  for (const char* s : {"P(v)", "!P(v)", "D[v] P(v)", "!D[v] P(v)",
                        "dep[v] v", "D[v] dep[v] v"})
    CHECK_MESSAGE(c.count(pv(s)) == 1, s);
  CHECK(closure(c) == c);
  CHECK(temporal_depth(c) == 0);
}

TEST_CASE("closure of O P(v)") {
  Vocabulary v = voc_v();
  auto pv = [&](const std::string& s) {
    return parse_formula(s, v, Dialect::NonEmpty);
  };
  FormulaSet c = closure(FormulaSet{pv("O P(v)")});
  for (const char* s : {"D[v] O P(v)", "D[Ov] O P(v)", "D[v,Ov] O P(v)"})
    CHECK_MESSAGE(c.count(pv(s)) == 1, s);
  CHECK(temporal_depth(c) == 1);
  CHECK(closure(c) == c);
  for (Formula f : c) CHECK(valid_in(f, Dialect::NonEmpty));
}

TEST_CASE("closure never doubles negations") {
  Vocabulary v = voc_v();
  FormulaSet c = closure(FormulaSet{parse_formula("!P(v)", v, Dialect::NonEmpty)});
  for (Formula f : c)
    if (f.kind() == Formula::Kind::Not)
      CHECK(f.child().kind() != Formula::Kind::Not);
}

TEST_CASE("vocabulary validation") {
  Vocabulary bad;
  bad.variables = {"x", "x"};
  CHECK_THROWS_AS(bad.validate(), Error);
  Vocabulary none;
  CHECK_THROWS_AS(none.validate(), Error);
  CHECK_NOTHROW(voc_xyz().validate());
}

TEST_CASE("formula files") {
  auto fs = parse_formula_lines("# comment\nP(x)\n\ndep[x] y  # trailing\n",
                                voc_xyz(), Dialect::Core);
  REQUIRE(fs.size() == 2);
  CHECK(fs[1] == p("dep[x] y"));
}

TEST_CASE("substitution reaches inside next and functions") {
  std::map<std::string, Term> sigma{{"x", Term::var("y")}};
  CHECK(substitute(p("P(OS(x,z))"), sigma) == p("P(OS(y,z))"));
}
