#include <doctest.h>

#include "dfd/analysis.hpp"
#include "dfd/gen.hpp"
#include "dfd/proofsys.hpp"
#include "dfd/semantics.hpp"
#include "fixture_util.hpp"

using namespace dfd;

namespace {

Formula F(const std::string& s, const Vocabulary& voc,
          Dialect d = Dialect::TimedFuncId) {
  return parse_formula(s, voc, d);
}

Term T(const std::string& s, const Vocabulary& voc) {
  return parse_term(s, voc, Dialect::TimedFuncId);
}

TermSet S(const std::string& s, const Vocabulary& voc) {
  return parse_termset(s, voc, Dialect::TimedFuncId);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("schema instantiation") {
  Vocabulary voc = make_vocabulary(3, {{"P", 1}, {"R", 2}});
  SUBCASE("Determinism ranges over the whole vocabulary") {
    Vocabulary v2 = make_vocabulary(2);
    Bindings b;
    b.terms["v"] = T("x", v2);
    CHECK(instantiate(find_schema("Determinism"), b, v2, Dialect::Core) ==
          F("dep[x,y] Ox", v2));
    b.terms["v"] = T("Ox", v2);
    CHECK(code_of([&] {
            instantiate(find_schema("Determinism"), b, v2, Dialect::Core);
          }) == ErrorCode::InvalidArgument);
  }
  SUBCASE("D-T with an empty set") {
    Bindings b;
    b.sets["X"] = TermSet{};
    b.formulas["phi"] = F("P(x)", voc);
    CHECK(instantiate(find_schema("D-T"), b, voc, Dialect::Core) ==
          F("D[] P(x) -> P(x)", voc));
    CHECK(code_of([&] {
            instantiate(find_schema("D-T"), b, voc, Dialect::NonEmpty);
          }) == ErrorCode::DialectViolation);
  }
  SUBCASE("Transfer expands dep[X] Y into a conjunction") {
    Bindings b;
    b.sets["X"] = S("[x]", voc);
    b.sets["Y"] = S("[y,z]", voc);
    b.formulas["phi"] = F("R(y,z)", voc);
    Formula expected = Formula::implies(
        Formula::conj(Formula::conj(F("dep[x] y", voc), F("dep[x] z", voc)),
                      F("D[y,z] R(y,z)", voc)),
        F("D[x] R(y,z)", voc));
    CHECK(instantiate(find_schema("Transfer"), b, voc, Dialect::Core) ==
          expected);
    CHECK(dep_all(S("[x]", voc), TermSet{}) == Formula::constant(true));
  }
  SUBCASE("side conditions and missing slots") {
    Bindings b;
    b.sets["X"] = S("[x]", voc);
    b.terms["x"] = T("y", voc);
    CHECK(code_of([&] {
            instantiate(find_schema("Dep-Ref"), b, voc, Dialect::Core);
          }) == ErrorCode::InvalidArgument);
    Bindings empty;
    CHECK(code_of([&] {
            instantiate(find_schema("D-T"), empty, voc, Dialect::Core);
          }) == ErrorCode::UnboundSlot);
    CHECK(code_of([] { find_schema("No-Such-Axiom"); }) != ErrorCode::Internal);
  }
  SUBCASE("schemas belong to their systems") {
    CHECK(find_schema("D-Next").in(Dialect::Core));
    CHECK_FALSE(find_schema("D-Next").in(Dialect::Timed));
    CHECK(find_schema("t-Next-Time1").in(Dialect::Timed));
    CHECK_FALSE(find_schema("t-Next-Time1").in(Dialect::Core));
    CHECK(find_schema("Term-Reduction").in(Dialect::TimedFuncId));
    CHECK(find_schema("Transfer").in(Dialect::NonEmpty));
    for (const auto* s : derived_principles()) CHECK(s->derived);
    for (auto d : {Dialect::Core, Dialect::NonEmpty, Dialect::Timed,
                   Dialect::TimedFuncId})
      for (const auto* s : axioms_of(d)) {
        CHECK_FALSE(s->derived);
        CHECK(s->in(d));
      }
  }
}

TEST_CASE("term occurrences") {
  Vocabulary voc = make_vocabulary(2, {{"P", 1}}, {{"S", 2}});
  Formula f = F("P(S(x,x)) & dep[x] y", voc);
  Term x = T("x", voc), y = T("y", voc);
  CHECK(count_occurrences(f, x) == 3);
  CHECK(count_occurrences(f, y) == 1);
  CHECK(replace_occurrence(f, x, y, 0) == F("P(S(y,x)) & dep[x] y", voc));
  CHECK(replace_occurrence(f, x, y, 1) == F("P(S(x,y)) & dep[x] y", voc));
  CHECK(replace_occurrence(f, x, y, 2) == F("P(S(x,x)) & dep[y] y", voc));
}

TEST_CASE("tautology check") {
  Vocabulary voc = make_vocabulary(2, {{"P", 1}});
  CHECK(is_tautology(F("P(x) | !P(x)", voc)));
  CHECK(is_tautology(F("(D[x] P(x) -> P(y)) -> (D[x] P(x) -> P(y))", voc)));
  CHECK(is_tautology(F("P(x) -> (P(y) -> P(x))", voc)));
  CHECK_FALSE(is_tautology(F("D[x] P(x) -> P(x)", voc)));
  CHECK_FALSE(is_tautology(F("P(x) -> P(y)", voc)));
  // Next is not looked through.
  CHECK_FALSE(is_tautology(F("O !P(x) <-> !O P(x)", voc)));
}

TEST_CASE("derivation fixtures are accepted") {
  std::set<std::string> schemas;
  for (const auto& name : fixtures::derivation_names()) {
    CAPTURE(name);
    Derivation d = derivation_from_json_text(
        fixtures::read_file(fixtures::derivation_dir() + name));
    CheckResult r = check_derivation(d);
    CHECK(r.ok);
    CHECK(r.reason == "");
    for (const auto& line : d.lines)
      if (line.by.rule == Justification::Rule::Axiom)
        schemas.insert(line.by.schema);

    // Every prefix of a correct derivation is correct.
    Derivation prefix = d;
    while (!prefix.lines.empty()) {
      prefix.lines.pop_back();
      CHECK(check_derivation(prefix).ok);
    }

    // The JSON form round-trips.
    Derivation again = derivation_from_json_text(derivation_to_json_text(d));
    REQUIRE(again.lines.size() == d.lines.size());
    for (std::size_t i = 0; i < d.lines.size(); ++i)
      CHECK(again.lines[i].formula == d.lines[i].formula);
    CHECK(check_derivation(again).ok);
  }
  CHECK(schemas.count("Transfer"));
  CHECK(schemas.count("t-Next-Time1"));
  CHECK(schemas.count("Identity-Substitution"));
}

TEST_CASE("fixtures are rejected in systems lacking their rules") {
  Derivation timed = derivation_from_json_text(fixtures::read_file(
      fixtures::derivation_dir() + "timed-next-introduction.json"));
  CheckResult r = check_derivation(timed, Dialect::Core);
  CHECK_FALSE(r.ok);
  CHECK(r.line == 1);
  CHECK(r.reason == "schema-not-in-system");

  Derivation tfi = derivation_from_json_text(fixtures::read_file(
      fixtures::derivation_dir() + "identity-substitution.json"));
  r = check_derivation(tfi, Dialect::Timed);
  CHECK_FALSE(r.ok);
  CHECK(r.line == 1);
  CHECK(r.reason == "dialect-violation");
}

TEST_CASE("each corruption is rejected at the corrupted line") {
  auto cs = fixtures::corruptions();
  CHECK(cs.size() == 20);
  for (const auto& c : cs) {
    CAPTURE(c.fixture);
    CAPTURE(c.line);
    CAPTURE(c.formula);
    std::string reason;
    CHECK(fixtures::rejected_line(c, &reason) == c.line);
  }
}

TEST_CASE("rule checks") {
  Vocabulary voc = make_vocabulary(2, {{"P", 1}});
  Derivation d;
  d.voc = voc;
  d.system = Dialect::NonEmpty;
  auto tauto = [&](const std::string& s) {
    DerivationLine l;
    l.formula = F(s, voc);
    l.by.rule = Justification::Rule::Tautology;
    return l;
  };
  d.lines.push_back(tauto("P(x) -> P(x)"));
  DerivationLine nec;
  nec.formula = F("D[] (P(x) -> P(x))", voc, Dialect::Core);
  nec.by.rule = Justification::Rule::DNecessitation;
  nec.by.premise1 = 0;
  d.lines.push_back(nec);
  CheckResult r = check_derivation(d);
  CHECK_FALSE(r.ok);
  CHECK(r.line == 2);
  CHECK(check_derivation(d, Dialect::Core).ok);

  d.lines[1].formula = F("D[y] (P(x) -> P(x))", voc);
  d.lines[1].by.xs = S("[y]", voc);
  CHECK(check_derivation(d).ok);
  d.lines[1].by.xs = S("[x]", voc);
  r = check_derivation(d);
  CHECK(r.line == 2);
  CHECK(r.reason == "dnec-mismatch");

  d.lines.resize(1);
  DerivationLine mp;
  mp.formula = F("P(y)", voc);
  mp.by.rule = Justification::Rule::ModusPonens;
  mp.by.premise1 = 0;
  mp.by.premise2 = 1;
  d.lines.push_back(mp);
  r = check_derivation(d);
  CHECK(r.line == 2);
  CHECK(r.reason == "premise-out-of-range");

  DerivationLine onec;
  onec.formula = F("O (P(x) -> P(x))", voc);
  onec.by.rule = Justification::Rule::ONecessitation;
  onec.by.premise1 = 0;
  d.lines[1] = onec;
  CHECK(check_derivation(d).ok);
  r = check_derivation(d, Dialect::Core);
  CHECK(r.reason == "rule-not-in-system");
}

TEST_CASE("soundness harness finds no counterexamples to the axioms") {
  for (auto d : {Dialect::Core, Dialect::NonEmpty, Dialect::Timed,
                 Dialect::TimedFuncId}) {
    CAPTURE(to_string(d));
    auto suite = soundness_suite(d, 6, 5);
    CHECK(suite.size() == 6);
    for (const auto& m : suite) {
      CHECK(m.size() <= 8);
      CHECK(validate_dynamical(m).ok());
    }
    SoundnessReport r = soundness_harness(d, suite, 40, 3, 6, true);
    CHECK(r.instances == 40);
    CHECK(r.failures.empty());
  }
}

TEST_CASE("the harness detects an unsound schema") {
  // D-Next is an axiom of the untimed system only; under synchronized
  // semantics it fails.
  auto suite = soundness_suite(Dialect::Timed, 30, 42);
  const AxiomSchema& s = find_schema("D-Next");
  Rng rng(3);
  GenOptions o = options_for(Dialect::Timed, 2, 2);
  int failing = 0;
  for (int i = 0; i < 100; ++i) {
    Formula f = s.build(s, random_bindings(rng, s, suite[0].voc, o),
                        suite[0].voc);
    for (const auto& m : suite) {
      TimingMap tau = timing_map(m).map;
      Evaluator ev = Evaluator::timed(m, tau);
      const auto& rel = reliable_states(m, tau, temporal_depth(f));
      const auto& tr = ev.truth(f);
      bool bad = false;
      for (int st = 0; st < m.size(); ++st)
        if (rel[st] && !tr[st]) bad = true;
      if (bad) {
        ++failing;
        break;
      }
    }
  }
  CHECK(failing > 0);
}
