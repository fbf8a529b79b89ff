#include <doctest.h>

#include "dfd/analysis.hpp"
#include "dfd/examples.hpp"
#include "dfd/gen.hpp"
#include "dfd/semantics.hpp"
#include "dfd/transform.hpp"
#include "dfd/translate.hpp"

using namespace dfd;

namespace {

Vocabulary voc_xy() { return make_vocabulary(2, {{"P", 1}, {"R", 2}}); }

Formula F(const std::string& s, const Vocabulary& voc,
          Dialect d = Dialect::TimedFuncId) {
  return parse_formula(s, voc, d);
}

}  // namespace

TEST_CASE("eliminate_next pushes next onto variables") {
  Vocabulary voc = voc_xy();
  CHECK(eliminate_next(F("O dep[x] y", voc)) == F("dep[Ox] Oy", voc));
  CHECK(eliminate_next(F("O D[x] P(y)", voc)) == F("D[Ox] P(Oy)", voc));
  CHECK(eliminate_next(F("O !P(x)", voc)) == F("!P(Ox)", voc));
  CHECK(eliminate_next(F("OO R(x,Oy)", voc)) == F("R(OOx,OOOy)", voc));
  CHECK(eliminate_next(F("O (P(x) & O P(y))", voc)) ==
        F("P(Ox) & P(OOy)", voc));
  Formula plain = F("D[x] (P(y) & dep[y] Ox)", voc);
  CHECK(eliminate_next(plain) == plain);

  Trace trace;
  eliminate_next(F("O O P(x)", voc), &trace);
  CHECK(trace.size() == 2);
  CHECK(trace.back().rfind("next-elim: ", 0) == 0);
}

TEST_CASE("Tr into functional LFD") {
  Vocabulary voc = voc_xy();
  LfdfSignature sig = lfdf_signature(voc);
  CHECK(sig.time_var == "time");
  CHECK(sig.step_fn.at("x") == "f_x");
  CHECK(sig.lfd.is_variable("time"));
  CHECK(sig.lfd.is_function("f_y"));

  auto L = [&](const std::string& s) { return F(s, sig.lfd); };
  CHECK(tr_term(parse_term("Ox", voc, Dialect::Timed), sig) ==
        parse_term("f_x(x,y)", sig.lfd, Dialect::TimedFuncId));
  CHECK(tr_term(parse_term("OOy", voc, Dialect::Timed), sig) ==
        parse_term("f_y(f_x(x,y),f_y(x,y))", sig.lfd, Dialect::TimedFuncId));
  CHECK(tr_to_lfdf(F("dep[x] Oy", voc), sig) ==
        L("dep[time,x] f_y(x,y)"));
  CHECK(tr_to_lfdf(F("D[] P(Ox)", voc), sig) == L("D[time] P(f_x(x,y))"));
  CHECK(tr_to_lfdf(F("!P(x) & R(x,y)", voc), sig) == L("!P(x) & R(x,y)"));
  CHECK_THROWS_AS(tr_to_lfdf(F("O P(x)", voc), sig), Error);
  try {
    tr_to_lfdf(F("O P(x)", voc), sig);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InputHasFormulaNext);
  }
}

TEST_CASE("rho and its inverse") {
  Vocabulary voc = voc_xy();
  Vocabulary lv = lfdf_signature(voc).lfd;
  Formula f = F("D[x] (dep[y] x & P(x))", lv);
  Formula r = rho(f, "time");
  CHECK(r == F("D[time,x] (dep[time,y] x & P(x))", lv));
  CHECK(rho_inverse(r, "time") == f);
  CHECK_THROWS_AS(rho_inverse(f, "time"), Error);
  CHECK_THROWS_AS(rho(r, "time"), Error);
}

TEST_CASE("equivalence relations and chi") {
  CHECK(equivalence_relations(0).size() == 1);
  CHECK(equivalence_relations(1).size() == 1);
  CHECK(equivalence_relations(2).size() == 2);
  CHECK(equivalence_relations(3).size() == 5);
  CHECK(equivalence_relations(4).size() == 15);
  auto e3 = equivalence_relations(3);
  CHECK(e3.front() == std::vector<int>{0, 0, 0});
  CHECK(e3.back() == std::vector<int>{0, 1, 2});

  Vocabulary voc = make_vocabulary(2);
  CHECK(chi({"x", "y"}, {0, 0}) ==
        F("x == x & x == y & y == x & y == y", voc));
  CHECK(chi({"x", "y"}, {0, 1}) ==
        F("x == x & y == y & !(x == y) & !(y == x)", voc));
  CHECK_THROWS_AS(chi({"x"}, {0, 1}), Error);
}

TEST_CASE("T_E decides identities between variables") {
  Vocabulary voc = make_vocabulary(3, {{"P", 1}});
  std::vector<std::string> vars{"x", "y", "z"};
  Formula id = F("x == y", voc);
  CHECK(eliminate_identity(id, vars, {0, 0, 1}) == Formula::constant(true));
  CHECK(eliminate_identity(id, vars, {0, 1, 1}) == Formula::constant(false));
  CHECK(eliminate_identity(F("P(z) & y == z", voc), vars, {0, 1, 1}) ==
        F("P(y) & true", voc));
  // Non-variable identities stay unless they become syntactic equalities.
  CHECK(eliminate_identity(F("Ox == Oy", voc), vars, {0, 0, 0}) ==
        Formula::constant(true));
  CHECK(eliminate_identity(F("Ox == y", voc), vars, {0, 0, 0}) ==
        F("Ox == x", voc));
  CHECK(eliminate_identity(id, vars) ==
        Formula::disj_all({Formula::constant(true), Formula::constant(true),
                           Formula::constant(false), Formula::constant(false),
                           Formula::constant(false)}));
}

TEST_CASE("identity case split is equivalent to the input") {
  Vocabulary voc = make_vocabulary(3, {{"P", 1}, {"R", 2}});
  std::vector<std::string> vars{"x", "y", "z"};
  GenOptions o = options_for(Dialect::TimedFuncId, 1, 3);
  o.functions = false;
  o.identity = true;
  Rng rng(77);
  for (int i = 0; i < 30; ++i) {
    DynamicalModel m = random_dynamical(rng, voc, uniform(rng, 1, 6), 2);
    Evaluator ev = Evaluator::dynamical(m);
    for (int k = 0; k < 10; ++k) {
      Formula f = random_formula(rng, voc, o);
      CHECK(ev.valid(Formula::iff(f, identity_case_split(f, vars))));
    }
  }
}

TEST_CASE("flattening functional terms") {
  Vocabulary voc = make_vocabulary(2, {{"P", 1}}, {{"S", 2}, {"f", 1}});
  Flattened fl = flatten_functions(F("P(f(S(x,y))) & S(x,y) == x", voc), voc);
  REQUIRE(fl.definitions.size() == 2);
  CHECK(fl.definitions[0].first == "w1");
  CHECK(render(fl.definitions[0].second) == "S(x,y)");
  CHECK(render(fl.definitions[1].second) == "f(w1)");
  CHECK(fl.body == F("P(w2) & w1 == x", fl.voc));
  CHECK(fl.constraints == F("D[] dep[x,y] w1 & D[] dep[w1] w2", fl.voc));
  CHECK(fl.voc.functions.empty());
}

TEST_CASE("next elimination preserves timed truth at reliable states") {
  Vocabulary voc = make_vocabulary(2, {{"P", 1}, {"R", 2}});
  GenOptions o = options_for(Dialect::Timed, 1, 3);
  Rng rng(91);
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    DynamicalModel m = random_timed(rng, voc, uniform(rng, 1, 2), 3,
                                    uniform(rng, 0, 3), 4);
    TimingResult tr = timing_map(m);
    REQUIRE(tr.timed());
    Evaluator ev = Evaluator::timed(m, tr.map);
    for (int k = 0; k < 20; ++k) {
      Formula f = random_formula(rng, voc, o);
      if (temporal_depth(f) > 2) continue;
      Formula g = eliminate_next(f);
      const auto& rel = reliable_states(m, tr.map, temporal_depth(f));
      for (int s = 0; s < m.size(); ++s)
        if (rel[s]) {
          CHECK(ev.eval(f, s) == ev.eval(g, s));
          ++checked;
        }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("Tr transfers timed truth to M+") {
  Vocabulary voc = make_vocabulary(2, {{"P", 1}, {"R", 2}});
  LfdfSignature sig = lfdf_signature(voc);
  GenOptions o = options_for(Dialect::Timed, 1, 3);
  Rng rng(92);
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    DynamicalModel m = random_timed(rng, voc, uniform(rng, 1, 2), 3,
                                    uniform(rng, 0, 3), 4);
    TimingResult tr = timing_map(m);
    REQUIRE(tr.timed());
    LfdFModel plus = to_lfdf(m, tr.map);
    Evaluator et = Evaluator::timed(m, tr.map);
    Evaluator el = Evaluator::lfdf(plus);
    for (int k = 0; k < 20; ++k) {
      Formula f = random_formula(rng, voc, o);
      if (temporal_depth(f) > 2) continue;
      Formula t = tr_to_lfdf(eliminate_next(f), sig);
      const auto& rel = reliable_states(m, tr.map, temporal_depth(f));
      for (int s = 0; s < m.size(); ++s)
        if (rel[s]) {
          CHECK(et.eval(f, s) == el.eval(t, s));
          ++checked;
        }
    }
  }
  CHECK(checked > 100);
}
