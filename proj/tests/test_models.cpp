#include <doctest.h>

#include "dfd/examples.hpp"
#include "dfd/gen.hpp"
#include "dfd/io.hpp"
#include "dfd/semantics.hpp"
#include "dfd/transform.hpp"

using namespace dfd;

namespace {

DynamicalModel two_states() {
  DynamicalModel m;
  m.voc = make_vocabulary(2, {{"P", 1}});
  m.states = {"a", "b"};
  m.g = {1, 0};
  m.values = {{std::int64_t{0}, std::int64_t{0}},
              {std::int64_t{0}, std::int64_t{1}}};
  return m;
}

std::string first_kind(const ValidationReport& r) {
  return r.ok() ? "ok" : r.violations.front().kind;
}

}  // namespace

TEST_CASE("dynamical validation") {
  DynamicalModel m = two_states();
  CHECK(validate_dynamical(m).ok());

  DynamicalModel dup = m;
  dup.values[1] = dup.values[0];
  auto r = validate_dynamical(dup);
  CHECK(first_kind(r) == "StateDetermination");
  CHECK(r.violations.front().witnesses ==
        std::vector<std::string>{"a", "b"});

  DynamicalModel partial = m;
  partial.g[1] = -1;
  CHECK(first_kind(validate_dynamical(partial)) == "TotalFunction");

  DynamicalModel arity = m;
  arity.pred["P"] = {{std::int64_t{0}, std::int64_t{1}}};
  CHECK(first_kind(validate_dynamical(arity)) == "Arity");
}

TEST_CASE("fib-mod-5 is a valid 25-state model") {
  DynamicalModel m = fibonacci_mod(5);
  CHECK(m.size() == 25);
  CHECK(validate_dynamical(m).ok());
  // Oracle: every pair of distinct states differs on (x, y).
  int pairs = 0;
  for (int s = 0; s < m.size(); ++s)
    for (int t = s + 1; t < m.size(); ++t) {
      CHECK(m.values[s] != m.values[t]);
      ++pairs;
    }
  CHECK(pairs == 300);
}

TEST_CASE("term values") {
  DynamicalModel m = fibonacci_mod(5);
  int s = m.state_index("1,1");
  Term x = Term::var("x"), y = Term::var("y");
  CHECK(term_value(m, s, Term::next(x)) == Value{std::int64_t{1}});
  CHECK(term_value(m, s, Term::next(y)) == Value{std::int64_t{2}});
  CHECK(term_value(m, s, x) == m.values[s][0]);
  int t = m.state_index("2,3");
  CHECK(term_value(m, t, Term::app("S", {x, y})) == Value{std::int64_t{0}});
}

TEST_CASE("agreement on dynamical models") {
  DynamicalModel m = fibonacci_mod(5);
  Term x = Term::var("x"), y = Term::var("y");
  int a = m.state_index("1,2"), b = m.state_index("1,4");
  CHECK(agree(m, a, a, TermSet{x, y}));
  CHECK(agree(m, a, b, TermSet{}));
  CHECK(agree(m, a, b, TermSet{x}));
  CHECK_FALSE(agree(m, a, b, TermSet{x, y}));
}

TEST_CASE("agreement is an equivalence and intersects over unions") {
  Vocabulary voc = make_vocabulary(3, {{"P", 1}});
  Rng rng(5);
  GenOptions o = options_for(Dialect::Core, 2, 1);
  for (int i = 0; i < 40; ++i) {
    DynamicalModel m = random_dynamical(rng, voc, uniform(rng, 1, 8), 3);
    TermSet xs = random_termset(rng, voc, o), ys = random_termset(rng, voc, o);
    Partition px = naive_agreement(m, xs), py = naive_agreement(m, ys);
    Partition pxy = naive_agreement(m, xs.united(ys));
    CHECK(pxy == px.meet(py));
    for (int s = 0; s < m.size(); ++s)
      for (int t = 0; t < m.size(); ++t)
        CHECK(px.same(s, t) == agree(m, s, t, xs));
  }
}

TEST_CASE("standard validation") {
  DynamicalModel m = fibonacci_mod(5);
  StandardRelationalModel s = to_standard(m);
  CHECK(validate_standard(s).ok());

  // g must preserve the V-relation.
  StandardRelationalModel bad;
  bad.voc = make_vocabulary(1);
  bad.worlds = {"a", "b", "c"};
  bad.g = {0, 2, 2};
  bad.eqv = {Partition::from_labels(std::vector<int>{0, 0, 1})};
  CHECK(first_kind(validate_standard(bad)) == "Preservation");
  bad.g = {0, 0, 2};
  CHECK(validate_standard(bad).ok());
}

TEST_CASE("standard recursion law for next terms") {
  Vocabulary voc = make_vocabulary(2, {{"P", 1}});
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    StandardRelationalModel m = random_standard(rng, voc, 6, 3, 1);
    REQUIRE(validate_standard(m).ok());
    for (Term x : {Term::var("x"), Term::var("y")})
      for (int s = 0; s < m.size(); ++s)
        for (int t = 0; t < m.size(); ++t)
          CHECK(agree(m, s, t, TermSet{Term::next(x)}) ==
                agree(m, m.g[s], m.g[t], TermSet{x}));
  }
}

TEST_CASE("general validation") {
  DynamicalModel m = two_states();
  GeneralRelationalModel core = to_general(m, 1, false);
  CHECK(validate_general(core, Dialect::Core).ok());

  GeneralRelationalModel c1 = core;
  c1.eq[0] = Partition::identity(m.size());
  CHECK(first_kind(validate_general(c1, Dialect::Core)) == "C1");

  GeneralRelationalModel c3 = core;
  std::uint32_t mask = c3.mask_of(TermSet{Term::var("x")});
  c3.dep[mask][c3.term_index(Term::var("x"))][0] = false;
  CHECK(first_kind(validate_general(c3, Dialect::Core)) ==
        "C3/Dep-Reflexivity");

  CHECK_THROWS_AS(core.mask_of(TermSet{Term::next(Term::var("x"), 2)}),
                  Error);
}

TEST_CASE("model files round trip bit-exactly") {
  Rng rng(3);
  Vocabulary voc = make_vocabulary(2, {{"P", 1}, {"R", 2}}, {{"f", 1}});
  std::vector<AnyModel> models;
  models.push_back(fibonacci_mod(4));
  models.push_back(make_example("fig2-s3"));
  models.push_back(random_dynamical(rng, voc, 5, 3));
  models.push_back(to_standard(fibonacci_mod(3)));
  models.push_back(to_general(make_example("fig1-s2"), 1));
  models.push_back(to_lfdf(make_example("fig2-s3")));
  for (const auto& m : models) {
    std::string text = dump_model(m);
    CHECK(dump_model(parse_model(text)) == text);
  }
}

TEST_CASE("malformed model files") {
  CHECK_THROWS_AS(parse_model("{"), Error);
  CHECK_THROWS_AS(parse_model(R"({"kind":"dynamical","states":["a"]})"),
                  Error);
  try {
    parse_model(R"({"kind":"bogus"})");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidModel);
  }
}
