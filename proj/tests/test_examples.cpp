#include <doctest.h>

#include "dfd/analysis.hpp"
#include "dfd/examples.hpp"
#include "dfd/semantics.hpp"

using namespace dfd;

TEST_CASE("every gallery model validates") {
  for (const auto& info : example_gallery()) {
    std::string name = info.name;
    if (name == "fib-mod-m") name = "fib-mod-5";
    if (name == "galilean-mod-m") name = "galilean-mod-4";
    CAPTURE(name);
    DynamicalModel m = make_example(name);
    CHECK(m.size() > 0);
    CHECK(validate_dynamical(m).ok());
  }
}

TEST_CASE("parameterised examples") {
  CHECK(make_example("fib-mod-5").size() == 25);
  CHECK(make_example("fib-mod-3").size() == 9);
  CHECK(make_example("galilean-mod-4").size() == 16);
  DynamicalModel lg = logistic_grid(8, 5);
  CHECK(lg.size() == 40);
  CHECK(make_example("logistic-grid").size() == lg.size());
  CHECK_THROWS_AS(make_example("fib-mod-0"), Error);
  CHECK_THROWS_AS(make_example("no-such-model"), Error);
}

TEST_CASE("galilean motion keeps the velocity") {
  DynamicalModel m = galilean_mod(4);
  Formula f = parse_formula("dep[v] Ov & dep[x,v] Ox & !dep[x] Ox", m.voc,
                            Dialect::Core);
  CHECK(valid_on_model(m, f));
}

TEST_CASE("timing of the figure models") {
  CHECK(classify(make_example("fig2-s3")).timed);
  CHECK(classify(make_example("fig2-s4")).timed);
  CHECK_FALSE(classify(make_example("fig3-s3p")).timed);
  CHECK_FALSE(classify(make_example("fig3-s4p")).timed);
  CHECK(classify(make_example("fig1-s2")).temporal);
}
