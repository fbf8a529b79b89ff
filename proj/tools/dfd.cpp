#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dfd/analysis.hpp"
#include "dfd/examples.hpp"
#include "dfd/gen.hpp"
#include "dfd/io.hpp"
#include "dfd/proofsys.hpp"
#include "dfd/satcheck.hpp"
#include "dfd/semantics.hpp"
#include "dfd/transform.hpp"
#include "dfd/translate.hpp"

using namespace dfd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitInternal = 4;
constexpr int kSchemaVersion = 1;

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::Lexical:
    case ErrorCode::Syntax:
    case ErrorCode::UnknownSymbol:
    case ErrorCode::ArityMismatch:
    case ErrorCode::EmptyDependenceSet:
    case ErrorCode::IdentityNotInDialect:
    case ErrorCode::FunctionNotInDialect:
    case ErrorCode::InvalidArgument:
    case ErrorCode::UnboundSlot:
      return kExitUsage;
    case ErrorCode::NotTimed:
      return kExitFalse;
    case ErrorCode::Internal:
      return kExitInternal;
    default:
      return kExitInput;
  }
}

struct Common {
  bool json_out = false;
  std::string model_path;
  std::string dialect = "timed-func-id";
  std::string vars;
  std::string preds;
  std::string funcs;
  std::string out_path;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

// "P/1,R/2" -> {P:1, R:2}
std::map<std::string, int> parse_arities(const std::string& s) {
  std::map<std::string, int> out;
  for (const auto& item : split(s, ',')) {
    auto slash = item.find('/');
    if (slash == std::string::npos)
      throw Error(ErrorCode::InvalidArgument,
                  "symbol '" + item + "' needs an arity, as in P/1");
    try {
      out[item.substr(0, slash)] = std::stoi(item.substr(slash + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad arity in '" + item + "'");
    }
  }
  return out;
}

Vocabulary default_vocabulary() {
  Vocabulary voc;
  voc.variables = {"x", "y", "z", "u", "v", "w"};
  voc.predicates = {{"P", 1}, {"Q", 1}, {"R", 2}};
  voc.functions = {{"S", 2}, {"f", 1}};
  return voc;
}

const Vocabulary& model_vocabulary(const AnyModel& m) {
  return std::visit([](const auto& x) -> const Vocabulary& { return x.voc; },
                    m);
}

// Unreadable input files count as input failures, not usage errors.
struct InputFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputFileError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Session {
  Common c;
  std::optional<AnyModel> model;

  void load() {
    if (!c.model_path.empty() && !model) model = parse_model(read_input(c.model_path));
  }

  Vocabulary vocabulary() {
    load();
    if (model) return model_vocabulary(*model);
    if (c.vars.empty() && c.preds.empty() && c.funcs.empty())
      return default_vocabulary();
    Vocabulary voc;
    voc.variables = split(c.vars.empty() ? "x,y,z" : c.vars, ',');
    voc.predicates = parse_arities(c.preds);
    voc.functions = parse_arities(c.funcs);
    voc.validate();
    return voc;
  }

  Dialect dialect() const { return dialect_from_string(c.dialect); }

  Formula formula(const std::string& text) {
    Vocabulary voc = vocabulary();
    return parse_formula(text, voc, dialect());
  }

  DynamicalModel& dynamical() {
    load();
    if (!model)
      throw Error(ErrorCode::InvalidArgument, "--model is required");
    auto* d = std::get_if<DynamicalModel>(&*model);
    if (!d)
      throw Error(ErrorCode::InvalidModel,
                  "this command needs a dynamical model");
    return *d;
  }
};

void require_valid(const ValidationReport& r, const std::string& what) {
  if (!r.ok())
    throw Error(ErrorCode::InvalidModel,
                what + " failed validation: " + r.summary());
}

void validate_any(const AnyModel& m) {
  std::visit(
      [](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, DynamicalModel>)
          require_valid(validate_dynamical(x), "model");
        else if constexpr (std::is_same_v<T, StandardRelationalModel>)
          require_valid(validate_standard(x), "model");
        else if constexpr (std::is_same_v<T, GeneralRelationalModel>)
          require_valid(validate_general(
                            x, x.nonempty ? Dialect::NonEmpty : Dialect::Core),
                        "model");
        else
          require_valid(validate_lfdf(x), "model");
      },
      m);
}

std::string world_name(const AnyModel& m, int w) {
  return std::visit(
      [w](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, DynamicalModel>) return x.states[w];
        else if constexpr (std::is_same_v<T, LfdFModel>) return x.names[w];
        else return x.worlds[w];
      },
      m);
}

int world_index(const AnyModel& m, const std::string& id) {
  return std::visit(
      [&id](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, DynamicalModel>)
          return x.state_index(id);
        else if constexpr (std::is_same_v<T, LfdFModel>)
          return x.member_index(id);
        else
          return x.world_index(id);
      },
      m);
}

// Evaluator for the model's own semantics; dynamical models use the timed
// semantics when asked to.
Evaluator evaluator_for(const AnyModel& m, const std::string& semantics) {
  if (semantics != "auto" && semantics != "dynamical" && semantics != "timed")
    throw Error(ErrorCode::InvalidArgument,
                "unknown semantics '" + semantics + "'");
  if (const auto* d = std::get_if<DynamicalModel>(&m)) {
    if (semantics == "timed") {
      auto r = timing_map(*d);
      if (!r.timed())
        throw Error(ErrorCode::NotTimed, "model has no timing map (witness " +
                                             d->states[*r.witness] + ")");
      return Evaluator::timed(*d, r.map);
    }
    return Evaluator::dynamical(*d);
  }
  if (semantics == "timed")
    throw Error(ErrorCode::InvalidArgument,
                "timed semantics needs a dynamical model");
  if (const auto* s = std::get_if<StandardRelationalModel>(&m))
    return Evaluator::standard(*s);
  if (const auto* g = std::get_if<GeneralRelationalModel>(&m))
    return Evaluator::general(*g);
  return Evaluator::lfdf(std::get<LfdFModel>(m));
}

void emit(const Common& c, const json& j, const std::string& text) {
  if (c.json_out) {
    json out = j;
    out["schema_version"] = kSchemaVersion;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  f << text;
}

void add_common(CLI::App* app, Common& c, bool with_model, bool with_out) {
  app->add_flag("--json", c.json_out, "Machine-readable output");
  app->add_option("--dialect", c.dialect,
                  "core|nonempty|timed|timed-func-id (or dfd, dfd-ne, "
                  "dfd-t, dfd-tfi)");
  app->add_option("--vars", c.vars, "Variables, e.g. x,y,z");
  app->add_option("--pred", c.preds, "Predicates, e.g. P/1,R/2");
  app->add_option("--func", c.funcs, "Functions, e.g. f/1,S/2");
  if (with_model)
    app->add_option("--model", c.model_path, "Model file (JSON)");
  if (with_out) app->add_option("-o,--out", c.out_path, "Output file");
}

// ------------------------------------------------------------- subcommands

int cmd_parse(Session& s, const std::string& text) {
  Formula f = s.formula(text);
  json j{{"command", "parse"},
         {"formula", render(f)},
         {"temporal_depth", temporal_depth(f)},
         {"size", f.size()}};
  std::string dialects;
  json valid = json::array();
  for (Dialect d : {Dialect::Core, Dialect::NonEmpty, Dialect::Timed,
                    Dialect::TimedFuncId})
    if (valid_in(f, d)) {
      valid.push_back(to_string(d));
      dialects += (dialects.empty() ? "" : ", ") + to_string(d);
    }
  j["dialects"] = valid;
  emit(s.c, j,
       render(f) + "\ntemporal depth: " + std::to_string(temporal_depth(f)) +
           "\ndialects: " + dialects + "\n");
  return kExitOk;
}

int cmd_eval(Session& s, const std::string& text, const std::string& state,
             const std::string& semantics) {
  s.load();
  if (!s.model) throw Error(ErrorCode::InvalidArgument, "--model is required");
  validate_any(*s.model);
  Formula f = s.formula(text);
  Evaluator ev = evaluator_for(*s.model, semantics);
  if (!state.empty()) {
    bool v = ev.eval(f, world_index(*s.model, state));
    emit(s.c,
         {{"command", "eval"}, {"state", state}, {"formula", render(f)},
          {"value", v}},
         std::string(v ? "true" : "false") + "\n");
    return v ? kExitOk : kExitFalse;
  }
  const auto& t = ev.truth(f);
  json per = json::object();
  std::string text_out;
  bool all = true;
  for (int w = 0; w < ev.size(); ++w) {
    per[world_name(*s.model, w)] = t[w] != 0;
    text_out += world_name(*s.model, w) + ": " + (t[w] ? "true" : "false") +
                "\n";
    all = all && t[w];
  }
  emit(s.c, {{"command", "eval"}, {"formula", render(f)}, {"values", per}},
       text_out);
  return all ? kExitOk : kExitFalse;
}

int cmd_valid(Session& s, const std::string& text,
              const std::string& semantics) {
  s.load();
  if (!s.model) throw Error(ErrorCode::InvalidArgument, "--model is required");
  validate_any(*s.model);
  Formula f = s.formula(text);
  Evaluator ev = evaluator_for(*s.model, semantics);
  auto cx = ev.counterexample(f);
  json j{{"command", "valid"}, {"formula", render(f)}, {"valid", !cx}};
  std::string out = cx ? "invalid\n" : "valid\n";
  if (cx) {
    j["counterexample"] = world_name(*s.model, *cx);
    out += "counterexample state: " + world_name(*s.model, *cx) + "\n";
    const auto* d = std::get_if<DynamicalModel>(&*s.model);
    if (d && f.kind() == Formula::Kind::DepAtom && semantics != "timed") {
      if (auto pair = dependence_counterexample(*d, f.termset(),
                                                f.dep_target())) {
        j["witness_pair"] = {d->states[pair->first], d->states[pair->second]};
        out += "witness pair: " + d->states[pair->first] + " and " +
               d->states[pair->second] + "\n";
      }
    }
  }
  emit(s.c, j, out);
  return cx ? kExitFalse : kExitOk;
}

int cmd_transform(Session& s, const std::string& to, int depth, int horizon,
                  const std::string& member) {
  s.load();
  if (!s.model) throw Error(ErrorCode::InvalidArgument, "--model is required");
  validate_any(*s.model);
  AnyModel out;
  if (to == "standard") {
    out = to_standard(s.dynamical(), depth);
  } else if (to == "general") {
    out = to_general(s.dynamical(), depth);
  } else if (to == "lfdf") {
    out = to_lfdf(s.dynamical());
  } else if (to == "dynamical") {
    const auto* m = std::get_if<StandardRelationalModel>(&*s.model);
    if (!m)
      throw Error(ErrorCode::InvalidModel,
                  "--to dynamical needs a standard relational model");
    out = to_dynamical(*m);
  } else if (to == "unroll") {
    const auto* m = std::get_if<LfdFModel>(&*s.model);
    if (!m)
      throw Error(ErrorCode::InvalidModel, "--to unroll needs an LFD model");
    if (member.empty())
      throw Error(ErrorCode::InvalidArgument, "--member is required");
    // The DFD vocabulary is the LFD one without the time variable and the
    // step functions.
    Vocabulary dfd = m->voc;
    auto& vars = dfd.variables;
    vars.erase(std::remove(vars.begin(), vars.end(), "time"), vars.end());
    for (auto it = dfd.functions.begin(); it != dfd.functions.end();) {
      bool step = it->first.rfind("f_", 0) == 0 &&
                  dfd.is_variable(it->first.substr(2));
      it = step ? dfd.functions.erase(it) : std::next(it);
    }
    Unrolled u = unroll_lfdf(*m, dfd, m->member_index(member), horizon);
    out = u.model;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown target '" + to + "'");
  }
  write_output(s.c.out_path, dump_model(out));
  return kExitOk;
}

int cmd_classify(Session& s) {
  DynamicalModel& m = s.dynamical();
  require_valid(validate_dynamical(m), "model");
  Classification c = classify(m);
  TimingResult r = timing_map(m);
  json j{{"command", "classify"},
         {"timed", c.timed},
         {"temporal", c.temporal},
         {"linear_time", c.linear_time},
         {"finite_past", c.finite_past},
         {"timing", to_json(m, r)}};
  std::string out = std::string("timed=") + (c.timed ? "true" : "false") +
                    " temporal=" + (c.temporal ? "true" : "false") +
                    " linear_time=" + (c.linear_time ? "true" : "false") +
                    " finite_past=" + (c.finite_past ? "true" : "false") + "\n";
  if (r.timed()) {
    for (int i = 0; i < m.size(); ++i)
      out += "  tau(" + m.states[i] + ") = " + time_str(r.map.tau[i]) + "\n";
  } else {
    out += "  not timed: witness " + m.states[*r.witness] + "\n";
  }
  emit(s.c, j, out);
  return kExitOk;
}

int cmd_rank(Session& s, const std::vector<std::string>& terms) {
  DynamicalModel& m = s.dynamical();
  require_valid(validate_dynamical(m), "model");
  std::vector<std::string> list = terms;
  if (list.empty()) list = m.voc.variables;
  json rows = json::array();
  std::string out;
  for (const auto& text : list) {
    Term t = parse_term(text, m.voc, s.dialect());
    Rank r = rank(m, t);
    Stability st = stability(m, t);
    auto ev = eventual_value(m, t);
    json row{{"term", render(t)},
             {"rank", r.finite() ? json(*r.n) : json("inf")},
             {"absolutely_stable", st.absolute}};
    if (ev) row["eventual_value"] = value_to_json(*ev);
    rows.push_back(row);
    out += render(t) + ": rank " + r.str() + ", absolutely stable " +
           (st.absolute ? "true" : "false");
    if (ev) out += ", eventual value " + value_str(*ev);
    out += "\n";
  }
  emit(s.c, {{"command", "rank"}, {"terms", rows}}, out);
  return kExitOk;
}

int cmd_profile(Session& s, const std::vector<std::string>& terms,
                int max_steps) {
  DynamicalModel& m = s.dynamical();
  require_valid(validate_dynamical(m), "model");
  std::vector<std::string> list = terms;
  if (list.empty()) list = m.voc.variables;
  json rows = json::array();
  std::string out;
  for (const auto& text : list) {
    Term t = parse_term(text, m.voc, s.dialect());
    VariableProfile p = variable_profile(m, t, max_steps);
    json row{{"term", render(t)}, {"fixed", p.fixed}};
    row["eventually_fixed_at"] =
        p.eventually_fixed_at ? json(*p.eventually_fixed_at) : json(nullptr);
    row["period"] = p.period ? json(*p.period) : json(nullptr);
    row["eventual_period"] =
        p.eventual_period
            ? json({p.eventual_period->first, p.eventual_period->second})
            : json(nullptr);
    rows.push_back(row);
    auto opt = [](const std::optional<int>& v) {
      return v ? std::to_string(*v) : std::string("none");
    };
    out += render(t) + ": fixed " + (p.fixed ? "true" : "false") +
           ", eventually fixed at " + opt(p.eventually_fixed_at) +
           ", period " + opt(p.period) + ", eventual period " +
           (p.eventual_period
                ? "(" + std::to_string(p.eventual_period->first) + "," +
                      std::to_string(p.eventual_period->second) + ")"
                : std::string("none")) +
           "\n";
  }
  emit(s.c, {{"command", "profile"}, {"terms", rows}}, out);
  return kExitOk;
}

int cmd_translate(Session& s, const std::string& text,
                  const std::string& pipeline, bool show_trace) {
  Vocabulary voc = s.vocabulary();
  Formula f = parse_formula(text, voc, s.dialect());
  Trace trace;
  json steps = json::array();
  auto step = [&](const std::string& name, Formula g) {
    steps.push_back({{"step", name}, {"formula", render(g)}});
    return g;
  };
  auto identity_elim = [&](Formula g, const Vocabulary& v) {
    if (mentions_functions(g)) {
      Flattened fl = flatten_functions(g, v);
      Formula whole = Formula::conj(fl.constraints, fl.body);
      step("flatten", whole);
      return step("identity-elim",
                  eliminate_identity(whole, fl.voc.variables, &trace));
    }
    return step("identity-elim", eliminate_identity(g, v.variables, &trace));
  };
  Formula result;
  if (pipeline == "next-elim") {
    result = step("next-elim", eliminate_next(f, &trace));
  } else if (pipeline == "tr") {
    result = step("tr", tr_to_lfdf(f, lfdf_signature(voc), &trace));
  } else if (pipeline == "identity-elim") {
    result = identity_elim(f, voc);
  } else if (pipeline == "full") {
    LfdfSignature sig = lfdf_signature(voc);
    Formula g = step("next-elim", eliminate_next(f, &trace));
    g = step("tr", tr_to_lfdf(g, sig, &trace));
    result = identity_elim(g, sig.lfd);
  } else {
    throw Error(ErrorCode::InvalidArgument,
                "unknown pipeline '" + pipeline + "'");
  }
  std::string out = render(result) + "\n";
  if (show_trace)
    for (const auto& line : trace) out += "  " + line + "\n";
  emit(s.c,
       {{"command", "translate"},
        {"pipeline", pipeline},
        {"input", render(f)},
        {"output", render(result)},
        {"steps", steps},
        {"trace", trace}},
       out);
  return kExitOk;
}

int cmd_filtrate(Session& s, const std::string& text, int depth_bound) {
  s.load();
  if (!s.model) throw Error(ErrorCode::InvalidArgument, "--model is required");
  validate_any(*s.model);
  Formula f = parse_formula(text, model_vocabulary(*s.model), Dialect::NonEmpty);
  GeneralRelationalModel source;
  if (const auto* d = std::get_if<DynamicalModel>(&*s.model)) {
    source = to_general(*d, depth_bound >= 0 ? depth_bound : temporal_depth(f));
  } else if (const auto* g = std::get_if<GeneralRelationalModel>(&*s.model)) {
    source = *g;
  } else {
    throw Error(ErrorCode::InvalidModel,
                "filtrate needs a dynamical or general model");
  }
  Filtration fl = filtrate(source, f);
  ValidationReport vr = validate_general(fl.model, Dialect::NonEmpty);
  TruthLemmaReport tl = check_truth_lemma(fl);
  json j{{"command", "filtrate"},
         {"formula", render(f)},
         {"closure_size", fl.closure.formulas.size()},
         {"worlds", fl.model.size()},
         {"valid_general_model", vr.ok()},
         {"truth_lemma_checks", tl.checks},
         {"truth_lemma_failures", tl.failures}};
  if (!vr.ok()) j["violations"] = vr.summary();
  std::string out = "closure size " +
                    std::to_string(fl.closure.formulas.size()) + ", " +
                    std::to_string(fl.model.size()) + " worlds\n" +
                    "general model: " + (vr.ok() ? "valid" : vr.summary()) +
                    "\n" + "truth lemma: " + std::to_string(tl.checks) +
                    " checks, " + std::to_string(tl.failures.size()) +
                    " failures\n";
  if (!s.c.out_path.empty()) write_output(s.c.out_path, dump_model(fl.model));
  emit(s.c, j, out);
  return vr.ok() && tl.failures.empty() ? kExitOk : kExitFalse;
}

int cmd_sat(Session& s, const std::string& text, int max_states,
            int budget_ms) {
  if (max_states < 1)
    throw Error(ErrorCode::InvalidArgument, "--max-states must be positive");
  Vocabulary voc = s.vocabulary();
  Formula f = parse_formula(text, voc, Dialect::NonEmpty);
  SatOptions o;
  o.max_states = max_states;
  o.budget_ms = budget_ms;
  // Only the symbols the formula uses enter the search.
  SatResult r = bounded_sat(f, o);
  json j{{"command", "sat"},
         {"formula", render(f)},
         {"result", r.sat ? "sat" : "no-model-within-bound"},
         {"budget_exhausted", r.budget_exhausted},
         {"candidates", r.candidates}};
  std::string out;
  if (r.sat) {
    j["state"] = r.witness->worlds[r.state];
    j["witness"] = to_json(*r.witness);
    out = "sat at " + r.witness->worlds[r.state] + "\n";
    if (s.c.out_path.empty()) {
      if (!s.c.json_out) out += dump_model(*r.witness);
    } else {
      write_output(s.c.out_path, dump_model(*r.witness));
    }
  } else {
    out = std::string("no model within bound") +
          (r.budget_exhausted ? " (budget exhausted)" : "") + "\n";
  }
  emit(s.c, j, out);
  return r.sat ? kExitOk : kExitFalse;
}

int cmd_prove_check(Session& s, const std::string& path,
                    const std::string& system) {
  Derivation d = derivation_from_json_text(read_input(path));
  CheckResult r = system.empty()
                      ? check_derivation(d)
                      : check_derivation(d, dialect_from_string(system));
  json j{{"command", "prove check"},
         {"accepted", r.ok},
         {"lines", d.lines.size()}};
  std::string out;
  if (r.ok) {
    out = "accepted (" + std::to_string(d.lines.size()) + " lines)\n";
  } else {
    j["line"] = r.line;
    j["reason"] = r.reason;
    j["detail"] = r.detail;
    out = "rejected at line " + std::to_string(r.line) + ": " + r.reason +
          (r.detail.empty() ? "" : " (" + r.detail + ")") + "\n";
  }
  emit(s.c, j, out);
  return r.ok ? kExitOk : kExitFalse;
}

int cmd_prove_soundness(Session& s, const std::string& system, int models,
                        int samples, int depth, std::uint64_t seed) {
  Dialect d = dialect_from_string(system);
  auto suite = soundness_suite(d, models, seed);
  SoundnessReport r = soundness_harness(d, suite, samples, depth, seed, true);
  json fails = json::array();
  std::string out = to_string(d) + ": " + std::to_string(r.instances) +
                    " instances, " + std::to_string(r.checks) + " checks, " +
                    std::to_string(r.failures.size()) + " counterexamples\n";
  for (const auto& c : r.failures) {
    fails.push_back({{"schema", c.schema},
                     {"instance", c.instance},
                     {"model", c.model},
                     {"state", c.state}});
    out += "  " + c.schema + ": " + c.instance + " fails at model " +
           std::to_string(c.model) + " state " + c.state + "\n";
  }
  emit(s.c,
       {{"command", "prove soundness"},
        {"system", to_string(d)},
        {"instances", r.instances},
        {"checks", r.checks},
        {"per_schema", r.per_schema},
        {"counterexamples", fails}},
       out);
  return r.failures.empty() ? kExitOk : kExitFalse;
}

int cmd_examples(Session& s, const std::string& name) {
  if (name.empty()) {
    json list = json::array();
    std::string out;
    for (const auto& e : example_gallery()) {
      list.push_back({{"name", e.name}, {"description", e.description}});
      out += e.name + "  " + e.description + "\n";
    }
    emit(s.c, {{"command", "examples"}, {"examples", list}}, out);
    return kExitOk;
  }
  DynamicalModel m = make_example(name);
  require_valid(validate_dynamical(m), "example " + name);
  write_output(s.c.out_path, dump_model(m));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic functional dependence toolkit"};
  app.require_subcommand(1);
  Session s;

  std::string formula, state, semantics = "auto", to = "standard", member;
  std::string pipeline = "full", system, path;
  std::vector<std::string> terms;
  int depth = 1, horizon = 3, max_steps = 64, depth_bound = -1;
  int max_states = 2, budget_ms = 2000;
  int models = 30, samples = 200, max_depth = 3;
  std::uint64_t seed = 1;
  bool trace = false;

  auto* parse = app.add_subcommand("parse", "Parse and pretty-print a formula");
  add_common(parse, s.c, false, false);
  parse->add_option("formula", formula)->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a formula on a model");
  add_common(eval, s.c, true, false);
  eval->add_option("--state", state, "State id (all states when omitted)");
  eval->add_option("--semantics", semantics, "auto|dynamical|timed");
  eval->add_option("formula", formula)->required();

  auto* valid = app.add_subcommand("valid", "Check validity on a model");
  add_common(valid, s.c, true, false);
  valid->add_option("--semantics", semantics, "auto|dynamical|timed");
  valid->add_option("formula", formula)->required();

  auto* transform = app.add_subcommand("transform", "Model constructions");
  add_common(transform, s.c, true, true);
  transform->add_option("--to", to,
                        "standard|general|lfdf|dynamical|unroll");
  transform->add_option("--depth", depth, "Atom depth or depth bound");
  transform->add_option("--horizon", horizon, "Unrolling horizon");
  transform->add_option("--member", member, "Team member to unroll from");

  auto* classify_cmd =
      app.add_subcommand("classify", "Timed/temporal classification");
  add_common(classify_cmd, s.c, true, false);

  auto* rank_cmd = app.add_subcommand("rank", "Rank, stability and eventual value");
  add_common(rank_cmd, s.c, true, false);
  rank_cmd->add_option("terms", terms, "Terms (default: all variables)");

  auto* profile = app.add_subcommand("profile", "Fixed points and periods");
  add_common(profile, s.c, true, false);
  profile->add_option("terms", terms, "Terms (default: all variables)");
  profile->add_option("--max-steps", max_steps, "Iteration bound");

  auto* translate = app.add_subcommand("translate", "Formula translations");
  add_common(translate, s.c, true, false);
  translate->add_option("--pipeline", pipeline,
                        "next-elim|tr|identity-elim|full");
  translate->add_flag("--trace", trace, "Print the rewrite trace");
  translate->add_option("formula", formula)->required();

  auto* filt = app.add_subcommand("filtrate", "Filtration through a closure");
  add_common(filt, s.c, true, true);
  filt->add_option("--depth-bound", depth_bound,
                   "Depth bound for dynamical input (default td of formula)");
  filt->add_option("formula", formula)->required();

  auto* sat = app.add_subcommand("sat", "Bounded model search");
  add_common(sat, s.c, false, true);
  sat->add_option("--max-states", max_states, "State bound");
  sat->add_option("--budget-ms", budget_ms, "Time budget in milliseconds");
  sat->add_option("formula", formula)->required();

  auto* prove = app.add_subcommand("prove", "Derivations and soundness");
  prove->require_subcommand(1);
  auto* check = prove->add_subcommand("check", "Check a derivation file");
  add_common(check, s.c, false, false);
  check->add_option("--system", system, "Override the file's system");
  check->add_option("file", path)->required();
  auto* sound = prove->add_subcommand("soundness", "Randomized soundness run");
  add_common(sound, s.c, false, false);
  sound->add_option("--system", system, "dfd|dfd-ne|dfd-t|dfd-tfi")
      ->required();
  sound->add_option("--models", models, "Number of suite models");
  sound->add_option("--samples", samples, "Instances per schema");
  sound->add_option("--depth", max_depth, "Maximal formula depth");
  sound->add_option("--seed", seed, "Random seed");

  auto* examples = app.add_subcommand("examples", "List or emit gallery models");
  add_common(examples, s.c, false, true);
  examples->add_option("name", formula, "Example name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (parse->parsed()) return cmd_parse(s, formula);
    if (eval->parsed()) return cmd_eval(s, formula, state, semantics);
    if (valid->parsed()) return cmd_valid(s, formula, semantics);
    if (transform->parsed()) return cmd_transform(s, to, depth, horizon, member);
    if (classify_cmd->parsed()) return cmd_classify(s);
    if (rank_cmd->parsed()) return cmd_rank(s, terms);
    if (profile->parsed()) return cmd_profile(s, terms, max_steps);
    if (translate->parsed()) return cmd_translate(s, formula, pipeline, trace);
    if (filt->parsed()) return cmd_filtrate(s, formula, depth_bound);
    if (sat->parsed()) return cmd_sat(s, formula, max_states, budget_ms);
    if (check->parsed()) return cmd_prove_check(s, path, system);
    if (sound->parsed())
      return cmd_prove_soundness(s, system, models, samples, max_depth, seed);
    if (examples->parsed()) return cmd_examples(s, formula);
  } catch (const Error& e) {
    std::string msg = std::string("error: ") + e.what();
    if (s.c.json_out) {
      json j{{"schema_version", kSchemaVersion},
             {"error", to_string(e.code())},
             {"message", e.what()}};
      if (e.position()) j["position"] = *e.position();
      std::cout << j.dump(2) << "\n";
    }
    std::cerr << msg << "\n";
    return exit_code_for(e.code());
  } catch (const InputFileError& e) {
    if (s.c.json_out) {
      json j{{"schema_version", kSchemaVersion},
             {"error", "InputFile"},
             {"message", e.what()}};
      std::cout << j.dump(2) << "\n";
    }
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
