#include "dfd/examples.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

namespace dfd {

namespace {

struct Node {
  std::string id;
  std::string next;
  std::vector<std::int64_t> values;
  bool truncated = false;
  bool infinite_past = false;
};

DynamicalModel build(std::vector<std::string> vars,
                     const std::vector<Node>& nodes) {
  DynamicalModel m;
  m.voc.variables = std::move(vars);
  for (const auto& n : nodes) m.states.push_back(n.id);
  bool marks = false;
  for (const auto& n : nodes) {
    m.g.push_back(m.state_index(n.next));
    m.values.emplace_back(n.values.begin(), n.values.end());
    marks = marks || n.truncated || n.infinite_past;
  }
  if (marks) {
    for (const auto& n : nodes) {
      m.truncated.push_back(n.truncated);
      m.infinite_past.push_back(n.infinite_past);
    }
  }
  return m;
}

std::string pair_id(int a, int b) {
  return std::to_string(a) + "," + std::to_string(b);
}

}  // namespace

const std::vector<ExampleInfo>& example_gallery() {
  static const std::vector<ExampleInfo> gallery = {
      {"fib-mod-m", "Fibonacci map g(x,y) = (y, x+y) mod m with S = addition"},
      {"galilean-mod-m", "uniform motion g(x,v) = (x+v, v) mod m"},
      {"logistic-grid",
       "toy quantization of the logistic map on 8 cells and 5 rates"},
      {"fig1-s1", "tail into a 3-cycle plus a line cut after 3 states"},
      {"fig1-s2", "4-cycle"},
      {"fig2-s3", "two chains merging, future cut at the merge point"},
      {"fig2-s4", "infinite past line into a fixed point"},
      {"fig2-s5", "4-cycle fed by three lines with infinite past"},
      {"fig2-s6", "fig2-s4 next to a line infinite in both directions"},
      {"fig3-s3p", "chains of lengths 2 and 1 merging: not timed"},
      {"fig3-s4p", "one step into a fixed point: not timed"},
  };
  return gallery;
}

DynamicalModel fibonacci_mod(int m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "modulus must be positive");
  std::vector<Node> nodes;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      nodes.push_back({pair_id(a, b), pair_id(b, (a + b) % m), {a, b}});
  DynamicalModel out = build({"x", "y"}, nodes);
  out.voc.functions["S"] = 2;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      out.func["S"][{std::int64_t{a}, std::int64_t{b}}] =
          std::int64_t{(a + b) % m};
  return out;
}

DynamicalModel galilean_mod(int m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "modulus must be positive");
  std::vector<Node> nodes;
  for (int x = 0; x < m; ++x)
    for (int v = 0; v < m; ++v)
      nodes.push_back({pair_id(x, v), pair_id((x + v) % m, v), {x, v}});
  return build({"x", "v"}, nodes);
}

DynamicalModel logistic_grid(int cells, int rates) {
  if (cells < 1 || rates < 2)
    throw Error(ErrorCode::InvalidArgument, "need cells >= 1 and rates >= 2");
  auto cell_of = [&](double u) {
    int c = static_cast<int>(std::floor(u * cells));
    return std::clamp(c, 0, cells - 1);
  };
  std::vector<Node> nodes;
  for (int c = 0; c < cells; ++c)
    for (int r = 0; r < rates; ++r) {
      double u = (c + 0.5) / cells;
      double alpha = 4.0 * r / (rates - 1);
      int next = cell_of(alpha * u * (1 - u));
      nodes.push_back({pair_id(c, r), pair_id(next, r), {c, r}});
    }
  return build({"x", "a"}, nodes);
}

DynamicalModel make_example(const std::string& name) {
  std::smatch match;
  static const std::regex param(R"(^(fib|galilean)-mod-([0-9]{1,3})$)");
  if (std::regex_match(name, match, param)) {
    int m = std::stoi(match[2]);
    return match[1] == "fib" ? fibonacci_mod(m) : galilean_mod(m);
  }
  if (name == "logistic-grid") return logistic_grid();
  if (name == "fig1-s1")
    return build({"x", "c"}, {{"s1", "s2", {1, 0}},
                              {"s2", "s3", {2, 0}},
                              {"s3", "s4", {3, 1}},
                              {"s4", "s5", {4, 1}},
                              {"s5", "s3", {5, 1}},
                              {"s6", "s7", {6, 0}},
                              {"s7", "s8", {7, 0}},
                              {"s8", "s8", {8, 0}, true}});
  if (name == "fig1-s2")
    return build({"x", "y", "z"}, {{"t1", "t2", {1, 0, 0}},
                                   {"t2", "t4", {2, 1, 0}},
                                   {"t3", "t1", {4, 1, 0}},
                                   {"t4", "t3", {3, 0, 0}}});
  if (name == "fig2-s3")
    return build({"x"}, {{"w0", "w1", {0}},
                         {"w1", "w2", {1}},
                         {"w2", "w2", {2}, true},
                         {"k0", "k1", {3}},
                         {"k1", "w2", {4}}});
  if (name == "fig2-s4")
    return build({"x"}, {{"u0", "u1", {0}, false, true},
                         {"u1", "u2", {1}},
                         {"u2", "u2", {2}}});
  if (name == "fig2-s5")
    return build({"x"}, {{"s1", "s4", {1}, false, true},
                         {"s2", "s6", {2}, false, true},
                         {"s3", "s4", {3}},
                         {"s4", "s5", {4}},
                         {"s5", "s6", {5}},
                         {"s6", "s3", {6}},
                         {"s7", "s3", {7}, false, true}});
  if (name == "fig2-s6")
    return build({"x"}, {{"t0", "t1", {0}, false, true},
                         {"t1", "t2", {1}},
                         {"t2", "t2", {2}},
                         {"v0", "v1", {10}, false, true},
                         {"v1", "v2", {11}},
                         {"v2", "v3", {12}},
                         {"v3", "v3", {13}, true}});
  if (name == "fig3-s3p")
    return build({"x"}, {{"i0", "i1", {0}},
                         {"i1", "i3", {1}},
                         {"i2", "i3", {2}},
                         {"i3", "i4", {3}},
                         {"i4", "i4", {4}, true}});
  if (name == "fig3-s4p")
    return build({"x"}, {{"j0", "j1", {0}}, {"j1", "j1", {1}}});
  throw Error(ErrorCode::InvalidArgument, "unknown example '" + name + "'");
}

}  // namespace dfd
