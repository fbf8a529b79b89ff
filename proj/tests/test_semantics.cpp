#include <doctest.h>

#include "dfd/analysis.hpp"
#include "dfd/examples.hpp"
#include "dfd/gen.hpp"
#include "dfd/semantics.hpp"
#include "dfd/transform.hpp"
#include "oracle.hpp"

using namespace dfd;

namespace {

Formula fp(const DynamicalModel& m, const std::string& s) {
  return parse_formula(s, m.voc, Dialect::TimedFuncId);
}

// Two chains a0 -> a1 -> a2 and b0 -> b1 -> b2 with the last states cut off.
// x agrees across the chains at time 0 only.
DynamicalModel two_chains() {
  DynamicalModel m;
  m.voc = make_vocabulary(2, {{"P", 1}});
  m.pred["P"] = {{std::int64_t{0}}};
  m.states = {"a0", "a1", "a2", "b0", "b1", "b2"};
  m.g = {1, 2, 2, 4, 5, 5};
  auto v = [](int x, int y) {
    return std::vector<Value>{std::int64_t{x}, std::int64_t{y}};
  };
  m.values = {v(0, 0), v(1, 1), v(2, 2), v(0, 3), v(5, 4), v(6, 5)};
  m.truncated = {false, false, true, false, false, true};
  return m;
}

}  // namespace

TEST_CASE("fib-mod-5 dependence facts") {
  DynamicalModel m = fibonacci_mod(5);
  CHECK(valid_on_model(m, fp(m, "dep[x,y] Ox")));
  CHECK(valid_on_model(m, fp(m, "dep[x,Ox] OOx")));
  CHECK_FALSE(valid_on_model(m, fp(m, "dep[x] y")));
  int a = m.state_index("1,1"), b = m.state_index("1,2");
  CHECK(eval_dynamical(m, a, fp(m, "!dep[x] y")));
  CHECK(agree(m, a, b, TermSet{Term::var("x")}));
  CHECK_FALSE(agree(m, a, b, TermSet{Term::var("y")}));
  auto pair = dependence_counterexample(m, TermSet{Term::var("x")},
                                        Term::var("y"));
  REQUIRE(pair.has_value());
  CHECK(m.values[pair->first][0] == m.values[pair->second][0]);
  CHECK(m.values[pair->first][1] != m.values[pair->second][1]);
}

TEST_CASE("fib-mod-5 identities with addition") {
  DynamicalModel m = fibonacci_mod(5);
  for (const char* s : {"Ox == y", "Oy == S(x,y)", "OOx == S(x, Ox)"})
    CHECK_MESSAGE(valid_on_model(m, fp(m, s)), s);
  CHECK_FALSE(valid_on_model(m, fp(m, "Ox == x")));
}

TEST_CASE("evaluator agrees with the direct semantics") {
  Vocabulary voc = make_vocabulary(3, {{"P", 1}, {"R", 2}}, {{"f", 1}});
  Rng rng(21);
  GenOptions o = options_for(Dialect::TimedFuncId, 2, 3);
  for (int i = 0; i < 40; ++i) {
    DynamicalModel m = random_dynamical(rng, voc, uniform(rng, 1, 7), 3);
    Evaluator ev = Evaluator::dynamical(m);
    for (int k = 0; k < 25; ++k) {
      Formula f = random_formula(rng, voc, o);
      const auto& t = ev.truth(f);
      for (int s = 0; s < m.size(); ++s)
        CHECK((t[s] != 0) == oracle::eval(m, s, f));
    }
  }
}

TEST_CASE("timed evaluator agrees with the direct semantics") {
  Vocabulary voc = make_vocabulary(2, {{"P", 1}}, {{"f", 1}});
  Rng rng(22);
  GenOptions o = options_for(Dialect::TimedFuncId, 2, 3);
  for (int i = 0; i < 30; ++i) {
    DynamicalModel m = random_timed(rng, voc, uniform(rng, 0, 2),
                                    uniform(rng, 1, 3), uniform(rng, 0, 4), 6);
    auto tau = oracle::timing(m);
    REQUIRE(tau.has_value());
    Evaluator ev = Evaluator::timed(m, TimingMap{*tau});
    for (int k = 0; k < 25; ++k) {
      Formula f = random_formula(rng, voc, o);
      const auto& t = ev.truth(f);
      for (int s = 0; s < m.size(); ++s)
        CHECK((t[s] != 0) == oracle::eval(m, s, f, &*tau));
    }
  }
}

TEST_CASE("synchronized semantics on two chains") {
  DynamicalModel m = two_chains();
  REQUIRE(validate_dynamical(m).ok());
  auto tau = timing_map(m);
  REQUIRE(tau.timed());
  Formula f = fp(m, "dep[] x");
  for (const char* s : {"a0", "b0"})
    CHECK(eval_timed(m, tau.map, m.state_index(s), f));
  for (const char* s : {"a1", "b1"})
    CHECK_FALSE(eval_timed(m, tau.map, m.state_index(s), f));
  // Without synchronicity the empty subscript ranges over all states.
  CHECK_FALSE(eval_dynamical(m, m.state_index("a0"), f));
  // D[] only ranges over the synchronous states under the timed reading.
  Formula g = fp(m, "D[] P(x)");
  CHECK(eval_timed(m, tau.map, m.state_index("a0"), g));
  CHECK_FALSE(eval_dynamical(m, m.state_index("a0"), g));
}

TEST_CASE("single state models") {
  DynamicalModel m;
  m.voc = make_vocabulary(2, {{"P", 1}});
  m.states = {"s"};
  m.g = {0};
  m.values = {{std::int64_t{1}, std::int64_t{2}}};
  m.pred["P"] = {{std::int64_t{1}}};
  TimingMap tau{{kInfinity}};
  Rng rng(4);
  GenOptions o = options_for(Dialect::Timed, 2, 4);
  for (int i = 0; i < 100; ++i) {
    Formula f = random_formula(rng, m.voc, o);
    CHECK(eval_timed(m, tau, 0, f) == eval_dynamical(m, 0, f));
  }
}

TEST_CASE("next laws") {
  Vocabulary voc = make_vocabulary(3, {{"P", 1}, {"R", 2}});
  Rng rng(8);
  GenOptions o = options_for(Dialect::Core, 1, 3);
  for (int i = 0; i < 20; ++i) {
    DynamicalModel m = random_dynamical(rng, voc, uniform(rng, 2, 8), 3);
    Evaluator ev = Evaluator::dynamical(m);
    for (int k = 0; k < 10; ++k) {
      Formula phi = random_formula(rng, voc, o);
      CHECK(ev.valid(Formula::iff(Formula::next(Formula::negate(phi)),
                                  Formula::negate(Formula::next(phi)))));
      Formula atom = random_atom(rng, voc, o);
      std::vector<Term> shifted;
      for (Term t : atom.terms()) shifted.push_back(Term::next(t));
      CHECK(ev.valid(Formula::iff(Formula::next(atom),
                                  Formula::pred(atom.symbol(), shifted))));
    }
  }
}

TEST_CASE("timed reduction laws") {
  Vocabulary voc = make_vocabulary(2, {{"P", 1}});
  Rng rng(12);
  GenOptions o = options_for(Dialect::Timed, 1, 2);
  for (int i = 0; i < 20; ++i) {
    DynamicalModel m = random_timed(rng, voc, 2, 3, uniform(rng, 0, 3), 5);
    TimingMap tau = timing_map(m).map;
    Evaluator ev = Evaluator::timed(m, tau);
    for (int k = 0; k < 10; ++k) {
      TermSet xs = random_termset(rng, voc, o);
      Formula phi = random_formula(rng, voc, o);
      Term y = random_term(rng, voc, o);
      Formula a = Formula::iff(
          Formula::next(Formula::dep_mod(xs, phi)),
          Formula::dep_mod(next_shift(xs, 1), Formula::next(phi)));
      Formula b = Formula::iff(
          Formula::next(Formula::dep_atom(xs, y)),
          Formula::dep_atom(next_shift(xs, 1), Term::next(y)));
      const auto& rel = reliable_states(m, tau, 3);
      const auto& ta = ev.truth(a);
      const auto& tb = ev.truth(b);
      for (int s = 0; s < m.size(); ++s)
        if (rel[s]) {
          CHECK(ta[s]);
          CHECK(tb[s]);
        }
    }
  }
}

TEST_CASE("memoized agreement matches naive recomputation") {
  Vocabulary voc = make_vocabulary(3);
  Rng rng(14);
  GenOptions o = options_for(Dialect::Core, 3, 1);
  o.max_set = 3;
  for (int i = 0; i < 30; ++i) {
    DynamicalModel m = random_dynamical(rng, voc, uniform(rng, 1, 8), 3);
    Evaluator ev = Evaluator::dynamical(m);
    for (int k = 0; k < 10; ++k) {
      TermSet xs = random_termset(rng, voc, o);
      CHECK(ev.relation(xs) == naive_agreement(m, xs));
      CHECK(ev.relation(xs) == naive_agreement(m, xs));
    }
  }
}

TEST_CASE("standard semantics") {
  DynamicalModel m = fibonacci_mod(3);
  m.pred["P"] = {{std::int64_t{1}}};
  m.voc.predicates["P"] = 1;
  StandardRelationalModel s = to_standard(m);
  Formula box = parse_formula("D[] P(x)", s.voc, Dialect::Core);
  for (int w = 0; w < s.size(); ++w)
    CHECK_FALSE(eval_standard(s, w, box));
  Formula intro = parse_formula("P(x) -> D[x] P(x)", s.voc, Dialect::Core);
  for (int w = 0; w < s.size(); ++w) CHECK(eval_standard(s, w, intro));
}

TEST_CASE("general semantics reads dependence atoms") {
  DynamicalModel m = make_example("fig1-s2");
  GeneralRelationalModel g = to_general(m, 1);
  Term x = Term::var("x"), y = Term::var("y");
  Formula d = Formula::dep_atom(TermSet{y}, x);
  std::uint32_t mask = g.mask_of(TermSet{y});
  for (int w = 0; w < g.size(); ++w)
    CHECK(eval_general(g, w, d) == g.dep[mask][g.term_index(x)][w]);
  // Flip one entry: evaluation follows the table, not the relations.
  g.dep[mask][g.term_index(x)][0] = !g.dep[mask][g.term_index(x)][0];
  CHECK(eval_general(g, 0, d) == g.dep[mask][g.term_index(x)][0]);
  CHECK_THROWS_AS(eval_general(g, 0, Formula::dep_atom(
                                         TermSet{x}, Term::next(y, 2))),
                  Error);
}

TEST_CASE("general models satisfy the C4 consequence") {
  Vocabulary voc = make_vocabulary(2, {{"P", 1}});
  Rng rng(31);
  GenOptions o = options_for(Dialect::NonEmpty, 1, 1);
  for (int i = 0; i < 20; ++i) {
    DynamicalModel d = random_dynamical(rng, voc, uniform(rng, 2, 6), 3);
    GeneralRelationalModel g = to_general(d, 1);
    for (int k = 0; k < 10; ++k) {
      TermSet xs = random_termset(rng, voc, o);
      TermSet ys = random_termset(rng, voc, o);
      Formula dxy = Formula::conj_all([&] {
        std::vector<Formula> v;
        for (Term y : ys) v.push_back(Formula::dep_atom(xs, y));
        return v;
      }());
      for (int s = 0; s < g.size(); ++s)
        for (int w = 0; w < g.size(); ++w)
          if (agree(g, s, w, xs) && eval_general(g, s, dxy)) {
            CHECK(agree(g, s, w, ys));
            CHECK(eval_general(g, w, dxy));
          }
    }
  }
}

TEST_CASE("lfd semantics") {
  DynamicalModel m = make_example("fig2-s3");
  LfdFModel l = to_lfdf(m);
  LfdfSignature sig = lfdf_signature(m.voc);
  Formula fd = Formula::dep_atom(
      TermSet{Term::var("x")},
      Term::app(sig.step_fn.at("x"), {Term::var("x")}));
  for (int a = 0; a < l.size(); ++a) CHECK(eval_lfdf(l, a, fd));

  LfdFModel single = l;
  single.team = {l.team[0]};
  single.names = {l.names[0]};
  Rng rng(2);
  GenOptions o = options_for(Dialect::Core, 0, 3);
  o.formula_next = false;
  for (int i = 0; i < 50; ++i) {
    Formula phi = random_formula(rng, m.voc, o);
    TermSet xs = random_termset(rng, m.voc, o);
    CHECK(eval_lfdf(single, 0, Formula::dep_mod(xs, phi)) ==
          eval_lfdf(single, 0, phi));
  }
}

TEST_CASE("counterexample states") {
  DynamicalModel m = fibonacci_mod(5);
  Formula f = fp(m, "dep[x] x & !dep[x] x");
  auto cx = find_countermodel_state(m, f);
  REQUIRE(cx.has_value());
  CHECK(*cx == 0);
  CHECK_FALSE(find_countermodel_state(m, fp(m, "dep[x] x")).has_value());
}
