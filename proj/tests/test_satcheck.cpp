#include <doctest.h>

#include "dfd/gen.hpp"
#include "dfd/satcheck.hpp"
#include "dfd/semantics.hpp"
#include "dfd/transform.hpp"

using namespace dfd;

namespace {

Formula F(const std::string& s, const Vocabulary& voc) {
  return parse_formula(s, voc, Dialect::NonEmpty);
}

DynamicalModel from_rows(const std::vector<std::vector<int>>& rows,
                         const std::vector<int>& g) {
  DynamicalModel m;
  m.voc = make_vocabulary(static_cast<int>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.states.push_back("s" + std::to_string(i));
    std::vector<Value> row;
    for (int v : rows[i]) row.push_back(std::int64_t{v});
    m.values.push_back(row);
  }
  m.g = g;
  return m;
}

bool has_kind(const ValidationReport& r, const std::string& kind) {
  for (const auto& v : r.violations)
    if (v.kind == kind) return true;
  return false;
}

}  // namespace

TEST_CASE("closure of a formula") {
  Vocabulary voc = make_vocabulary(1, {{"P", 1}});
  ClosedSet c = ClosedSet::of(F("P(x)", voc), {"x"});
  CHECK(c.k == 0);
  CHECK(c.find(F("P(x)", voc)).has_value());
  CHECK(c.find(F("!P(x)", voc)).has_value());
  CHECK_FALSE(c.find(F("O P(x)", voc)).has_value());
  ClosedSet d = ClosedSet::of(F("O P(x)", voc), {"x"});
  CHECK(d.k == 1);
  CHECK(d.find(F("P(Ox)", voc)).has_value());
  for (std::size_t i = 0; i < d.formulas.size(); ++i)
    CHECK(d.depth[i] == temporal_depth(d.formulas[i]));
}

TEST_CASE("types of a one-state model") {
  Vocabulary voc = make_vocabulary(1, {{"P", 1}});
  DynamicalModel m = from_rows({{0}}, {0});
  m.voc = voc;
  m.pred["P"] = {{std::int64_t{0}}};
  GeneralRelationalModel gm = to_general(m, 1);
  ClosedSet c = ClosedSet::of(F("P(x)", voc), {"x"});
  auto types = extract_types(gm, c);
  // The empty 0-type and one 1-type.
  REQUIRE(types.size() == 2);
  CHECK(types[0].layer == 0);
  CHECK(types[0].td() == 0);
  CHECK(types[1].layer == 1);
  CHECK(types[1].td() == 0);
  CHECK(types[1].contains(*c.find(F("P(x)", voc))));
  CHECK_FALSE(types[1].contains(*c.find(F("!P(x)", voc))));
}

TEST_CASE("all states share the 0-type") {
  Vocabulary voc = make_vocabulary(2);
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    DynamicalModel m = random_dynamical(rng, voc, uniform(rng, 2, 6), 3);
    ClosedSet c = ClosedSet::of(F("dep[x] Oy", voc), voc.variables);
    auto types = extract_types(to_general(m, 1), c);
    int zero = 0;
    for (const auto& t : types) zero += t.layer == 0;
    CHECK(zero == 1);
  }
}

TEST_CASE("filtration size and truth lemma") {
  Vocabulary voc = make_vocabulary(2, {{"P", 1}});
  GenOptions o = options_for(Dialect::NonEmpty, 1, 2);
  Rng rng(8);
  for (int i = 0; i < 15; ++i) {
    DynamicalModel m = random_dynamical(rng, voc, uniform(rng, 1, 5), 3);
    Formula phi = random_formula(rng, voc, o);
    if (temporal_depth(phi) > 1) continue;
    GeneralRelationalModel gm = to_general(m, 1);
    Filtration f = filtrate(gm, phi);
    CAPTURE(render(phi));
    CHECK(f.model.size() <= m.size() * (f.closure.k + 2));
    CHECK(validate_general(f.model, Dialect::NonEmpty).ok());
    TruthLemmaReport r = check_truth_lemma(f);
    CHECK(r.checks > 0);
    CHECK(r.failures.empty());
    // Top types carry the truth value of phi.
    for (int s = 0; s < m.size(); ++s)
      CHECK(eval_general(f.model, f.top_type[s], phi) ==
            eval_general(gm, s, phi));
  }
}

TEST_CASE("filtration C4 gap reproducer") {
  // A case where the filtered model breaks the dependence condition C4 while
  // the truth lemma still holds.
  DynamicalModel m = from_rows({{2, 2}, {0, 0}, {0, 2}, {1, 2}}, {3, 0, 0, 0});
  REQUIRE(validate_dynamical(m).ok());
  Formula phi = F("dep[x] OOx", m.voc);
  Filtration f = filtrate(to_general(m, 2), phi);
  ValidationReport v = validate_general(f.model, Dialect::NonEmpty);
  CHECK(has_kind(v, "C4"));
  CHECK(check_truth_lemma(f).failures.empty());
}

TEST_CASE("bounded satisfiability") {
  Vocabulary voc = make_vocabulary(2, {{"P", 1}});
  SUBCASE("a failing dependence has a small model") {
    Formula phi = F("!dep[x] y", voc);
    SatResult r = bounded_sat(phi, {2, 5000});
    REQUIRE(r.sat);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->size() <= 2);
    CHECK(validate_general(*r.witness, Dialect::NonEmpty).ok());
    CHECK(eval_general(*r.witness, r.state, phi));
  }
  SUBCASE("satisfiable atoms") {
    Formula phi = F("P(x) & !P(y)", voc);
    SatResult r = bounded_sat(phi, voc, {1, 2000});
    REQUIRE(r.sat);
    CHECK(eval_general(*r.witness, r.state, phi));
  }
  SUBCASE("contradictions have no model") {
    for (const char* s : {"P(x) & !P(x)", "D[x] P(x) & !P(x)",
                          "!dep[x] x", "dep[x] y & D[y] P(y) & !D[x] P(y)"}) {
      CAPTURE(s);
      SatResult r = bounded_sat(F(s, voc), voc, {2, 3000});
      CHECK_FALSE(r.sat);
      CHECK_FALSE(r.witness.has_value());
    }
  }
}
