#include "dfd/io.hpp"

#include <fstream>
#include <sstream>

namespace dfd {

namespace {

[[noreturn]] void bad(const std::string& msg) {
  throw Error(ErrorCode::InvalidModel, msg);
}

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string as_string(const json& j, const std::string& what) {
  if (!j.is_string()) bad(what + " must be a string");
  return j.get<std::string>();
}

int index_in(const std::vector<std::string>& ids, const std::string& id) {
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return static_cast<int>(i);
  bad("unknown state '" + id + "'");
}

std::vector<std::string> read_ids(const json& j) {
  if (!j.is_array()) bad("'states' must be a list");
  std::vector<std::string> ids;
  for (const auto& e : j) ids.push_back(as_string(e, "state id"));
  return ids;
}

std::vector<int> read_g(const json& j, const std::vector<std::string>& ids) {
  if (!j.is_object()) bad("'g' must be an object");
  std::vector<int> g(ids.size(), -1);
  for (auto it = j.begin(); it != j.end(); ++it)
    g[index_in(ids, it.key())] = index_in(ids, as_string(it.value(), "g"));
  return g;
}

json write_g(const std::vector<std::string>& ids, const std::vector<int>& g) {
  json j = json::object();
  for (std::size_t s = 0; s < ids.size(); ++s)
    if (g[s] >= 0) j[ids[s]] = ids[g[s]];
  return j;
}

std::vector<bool> read_flags(const json& j, const char* key,
                             const std::vector<std::string>& ids) {
  if (!j.contains(key)) return {};
  std::vector<bool> out(ids.size(), false);
  for (const auto& e : j.at(key)) out[index_in(ids, as_string(e, key))] = true;
  return out;
}

void write_flags(json& j, const char* key, const std::vector<bool>& flags,
                 const std::vector<std::string>& ids) {
  json arr = json::array();
  for (std::size_t s = 0; s < flags.size(); ++s)
    if (flags[s]) arr.push_back(ids[s]);
  if (!arr.empty()) j[key] = arr;
}

ValueTuple read_tuple(const json& j) {
  if (!j.is_array()) bad("tuple must be a list");
  ValueTuple t;
  for (const auto& e : j) t.push_back(value_from_json(e));
  return t;
}

json write_tuple(const ValueTuple& t) {
  json j = json::array();
  for (const auto& v : t) j.push_back(value_to_json(v));
  return j;
}

std::map<std::string, std::set<ValueTuple>> read_pred(const json& j) {
  std::map<std::string, std::set<ValueTuple>> out;
  if (!j.contains("pred")) return out;
  for (auto it = j.at("pred").begin(); it != j.at("pred").end(); ++it) {
    auto& ext = out[it.key()];
    for (const auto& row : it.value()) ext.insert(read_tuple(row));
  }
  return out;
}

json write_pred(const std::map<std::string, std::set<ValueTuple>>& pred) {
  json j = json::object();
  for (const auto& [p, ext] : pred) {
    json rows = json::array();
    for (const auto& t : ext) rows.push_back(write_tuple(t));
    j[p] = rows;
  }
  return j;
}

std::map<std::string, std::map<ValueTuple, Value>> read_func(const json& j) {
  std::map<std::string, std::map<ValueTuple, Value>> out;
  if (!j.contains("func")) return out;
  for (auto it = j.at("func").begin(); it != j.at("func").end(); ++it) {
    auto& table = out[it.key()];
    for (const auto& row : it.value()) {
      ValueTuple t = read_tuple(row);
      if (t.empty()) bad("function row for " + it.key() + " is empty");
      Value result = t.back();
      t.pop_back();
      if (!table.emplace(t, result).second)
        bad("duplicate row for function " + it.key());
    }
  }
  return out;
}

json write_func(const std::map<std::string, std::map<ValueTuple, Value>>& f) {
  json j = json::object();
  for (const auto& [name, table] : f) {
    json rows = json::array();
    for (const auto& [args, result] : table) {
      json row = write_tuple(args);
      row.push_back(value_to_json(result));
      rows.push_back(row);
    }
    j[name] = rows;
  }
  return j;
}

json write_worlds(const WorldSet& ws, const std::vector<std::string>& ids) {
  json arr = json::array();
  for (std::size_t w = 0; w < ws.size(); ++w)
    if (ws[w]) arr.push_back(ids[w]);
  return arr;
}

WorldSet read_worlds(const json& j, const std::vector<std::string>& ids) {
  if (!j.is_array()) bad("world set must be a list");
  WorldSet ws(ids.size(), false);
  for (const auto& e : j) ws[index_in(ids, as_string(e, "world"))] = true;
  return ws;
}

json write_partition(const Partition& p, const std::vector<std::string>& ids) {
  json arr = json::array();
  for (const auto& cls : p.classes()) {
    json c = json::array();
    for (int w : cls) c.push_back(ids[w]);
    arr.push_back(c);
  }
  return arr;
}

Partition read_partition(const json& j, const std::vector<std::string>& ids) {
  if (!j.is_array()) bad("partition must be a list of classes");
  std::vector<std::vector<int>> classes;
  for (const auto& c : j) {
    classes.emplace_back();
    for (const auto& e : c)
      classes.back().push_back(index_in(ids, as_string(e, "world")));
  }
  return Partition::from_classes(classes, static_cast<int>(ids.size()));
}

std::map<Formula, WorldSet, FormulaLess> read_atoms(
    const json& j, const Vocabulary& voc, const std::vector<std::string>& ids) {
  std::map<Formula, WorldSet, FormulaLess> out;
  if (!j.contains("atoms")) return out;
  for (auto it = j.at("atoms").begin(); it != j.at("atoms").end(); ++it) {
    Formula f = parse_formula(it.key(), voc, Dialect::Core);
    if (f.kind() != Formula::Kind::Pred) bad("'" + it.key() + "' is no atom");
    out[f] = read_worlds(it.value(), ids);
  }
  return out;
}

json write_atoms(const std::map<Formula, WorldSet, FormulaLess>& atoms,
                 const std::vector<std::string>& ids) {
  json j = json::object();
  for (const auto& [f, ws] : atoms) j[render(f)] = write_worlds(ws, ids);
  return j;
}

const std::string& kind_of(const json& j) {
  static const std::string dyn = "dynamical";
  if (!j.contains("kind")) return dyn;
  if (!j.at("kind").is_string()) bad("'kind' must be a string");
  return j.at("kind").get_ref<const std::string&>();
}

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    bad(std::string("malformed model document: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidModel) throw;
    bad(e.what());
  }
}

}  // namespace

json value_to_json(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  return std::get<std::string>(v);
}

Value value_from_json(const json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) return j.get<std::string>();
  bad("values must be integers or strings, got " + j.dump());
}

json to_json(const Vocabulary& voc) {
  json j;
  j["variables"] = voc.variables;
  j["predicates"] = voc.predicates;
  j["functions"] = voc.functions;
  return j;
}

Vocabulary vocabulary_from_json(const json& j) {
  return guarded([&] {
    Vocabulary voc;
    voc.variables = need(j, "variables").get<std::vector<std::string>>();
    if (j.contains("predicates"))
      voc.predicates = j.at("predicates").get<std::map<std::string, int>>();
    if (j.contains("functions"))
      voc.functions = j.at("functions").get<std::map<std::string, int>>();
    voc.validate();
    return voc;
  });
}

json to_json(const DynamicalModel& m) {
  json j;
  j["kind"] = "dynamical";
  j["vocabulary"] = to_json(m.voc);
  j["states"] = m.states;
  j["g"] = write_g(m.states, m.g);
  json vals = json::object();
  for (int s = 0; s < m.size(); ++s) {
    json row = json::object();
    for (std::size_t v = 0; v < m.voc.variables.size(); ++v)
      if (v < m.values[s].size())
        row[m.voc.variables[v]] = value_to_json(m.values[s][v]);
    vals[m.states[s]] = row;
  }
  j["values"] = vals;
  j["pred"] = write_pred(m.pred);
  j["func"] = write_func(m.func);
  write_flags(j, "truncated", m.truncated, m.states);
  write_flags(j, "infinite_past", m.infinite_past, m.states);
  return j;
}

DynamicalModel dynamical_from_json(const json& j) {
  return guarded([&] {
    DynamicalModel m;
    m.voc = vocabulary_from_json(need(j, "vocabulary"));
    m.states = read_ids(need(j, "states"));
    m.g = read_g(need(j, "g"), m.states);
    const json& vals = need(j, "values");
    m.values.assign(m.size(), {});
    for (int s = 0; s < m.size(); ++s) {
      const json& row = need(vals, m.states[s].c_str());
      for (const auto& v : m.voc.variables)
        m.values[s].push_back(value_from_json(need(row, v.c_str())));
    }
    m.pred = read_pred(j);
    m.func = read_func(j);
    m.truncated = read_flags(j, "truncated", m.states);
    m.infinite_past = read_flags(j, "infinite_past", m.states);
    return m;
  });
}

json to_json(const StandardRelationalModel& m) {
  json j;
  j["kind"] = "standard";
  j["vocabulary"] = to_json(m.voc);
  j["states"] = m.worlds;
  j["g"] = write_g(m.worlds, m.g);
  json eqv = json::object();
  for (std::size_t v = 0; v < m.eqv.size(); ++v)
    eqv[m.voc.variables[v]] = write_partition(m.eqv[v], m.worlds);
  j["eqv"] = eqv;
  j["atom_depth"] = m.atom_depth;
  j["atoms"] = write_atoms(m.atoms, m.worlds);
  return j;
}

StandardRelationalModel standard_from_json(const json& j) {
  return guarded([&] {
    StandardRelationalModel m;
    m.voc = vocabulary_from_json(need(j, "vocabulary"));
    m.worlds = read_ids(need(j, "states"));
    m.g = read_g(need(j, "g"), m.worlds);
    const json& eqv = need(j, "eqv");
    for (const auto& v : m.voc.variables)
      m.eqv.push_back(read_partition(need(eqv, v.c_str()), m.worlds));
    m.atom_depth = j.value("atom_depth", 0);
    m.atoms = read_atoms(j, m.voc, m.worlds);
    return m;
  });
}

json to_json(const GeneralRelationalModel& m) {
  json j;
  j["kind"] = "general";
  j["vocabulary"] = to_json(m.voc);
  j["states"] = m.worlds;
  j["g"] = write_g(m.worlds, m.g);
  j["depth_bound"] = m.depth_bound;
  j["nonempty"] = m.nonempty;
  json eq = json::object();
  json dep = json::object();
  for (std::uint32_t mask = m.nonempty ? 1 : 0; mask < m.eq.size(); ++mask) {
    TermSet xs = m.termset_of(mask);
    eq[xs.str()] = write_partition(m.eq[mask], m.worlds);
    for (std::size_t i = 0; i < m.universe.size(); ++i) {
      const WorldSet& ws = m.dep[mask][i];
      if (std::find(ws.begin(), ws.end(), true) == ws.end()) continue;
      dep[render(Formula::dep_atom(xs, m.universe[i]))] =
          write_worlds(ws, m.worlds);
    }
  }
  j["eq"] = eq;
  j["dep_atoms"] = dep;
  j["atoms"] = write_atoms(m.atoms, m.worlds);
  return j;
}

GeneralRelationalModel general_from_json(const json& j) {
  return guarded([&] {
    GeneralRelationalModel m;
    m.voc = vocabulary_from_json(need(j, "vocabulary"));
    m.worlds = read_ids(need(j, "states"));
    m.g = read_g(need(j, "g"), m.worlds);
    m.depth_bound = need(j, "depth_bound").get<int>();
    if (m.depth_bound < 0) bad("depth_bound must be non-negative");
    m.nonempty = j.value("nonempty", true);
    m.init_universe();
    const json& eq = need(j, "eq");
    std::vector<bool> seen(m.eq.size(), false);
    for (auto it = eq.begin(); it != eq.end(); ++it) {
      TermSet xs = parse_termset(it.key(), m.voc, Dialect::Core);
      std::uint32_t mask = m.mask_of(xs);
      m.eq[mask] = read_partition(it.value(), m.worlds);
      seen[mask] = true;
    }
    for (std::uint32_t mask = m.nonempty ? 1 : 0; mask < m.eq.size(); ++mask)
      if (!seen[mask])
        bad("'eq' has no entry for " + m.termset_of(mask).str());
    if (j.contains("dep_atoms")) {
      const json& dep = j.at("dep_atoms");
      for (auto it = dep.begin(); it != dep.end(); ++it) {
        Formula f = parse_formula(it.key(), m.voc, Dialect::Core);
        if (f.kind() != Formula::Kind::DepAtom)
          bad("'" + it.key() + "' is no dependence atom");
        m.dep[m.mask_of(f.termset())][m.term_index(f.dep_target())] =
            read_worlds(it.value(), m.worlds);
      }
    }
    m.atoms = read_atoms(j, m.voc, m.worlds);
    return m;
  });
}

json to_json(const LfdFModel& m) {
  json j;
  j["kind"] = "lfdf";
  j["vocabulary"] = to_json(m.voc);
  json objs = json::array();
  for (const auto& o : m.objects) objs.push_back(value_to_json(o));
  j["objects"] = objs;
  j["func"] = write_func(m.func);
  json defaults = json::object();
  for (const auto& [f, v] : m.func_default) defaults[f] = value_to_json(v);
  j["func_default"] = defaults;
  j["pred"] = write_pred(m.pred);
  j["members"] = m.names;
  json team = json::object();
  for (int a = 0; a < m.size(); ++a) {
    json row = json::object();
    for (std::size_t v = 0; v < m.voc.variables.size(); ++v)
      row[m.voc.variables[v]] = value_to_json(m.team[a][v]);
    team[m.names[a]] = row;
  }
  j["team"] = team;
  return j;
}

LfdFModel lfdf_from_json(const json& j) {
  return guarded([&] {
    LfdFModel m;
    m.voc = vocabulary_from_json(need(j, "vocabulary"));
    for (const auto& o : need(j, "objects"))
      m.objects.push_back(value_from_json(o));
    m.func = read_func(j);
    if (j.contains("func_default"))
      for (auto it = j.at("func_default").begin();
           it != j.at("func_default").end(); ++it)
        m.func_default[it.key()] = value_from_json(it.value());
    m.pred = read_pred(j);
    m.names = read_ids(need(j, "members"));
    const json& team = need(j, "team");
    for (const auto& name : m.names) {
      const json& row = need(team, name.c_str());
      std::vector<Value> a;
      for (const auto& v : m.voc.variables)
        a.push_back(value_from_json(need(row, v.c_str())));
      m.team.push_back(std::move(a));
    }
    return m;
  });
}

json to_json(const AnyModel& m) {
  return std::visit([](const auto& x) { return to_json(x); }, m);
}

AnyModel model_from_json(const json& j) {
  const std::string& kind = kind_of(j);
  if (kind == "dynamical") return dynamical_from_json(j);
  if (kind == "standard") return standard_from_json(j);
  if (kind == "general") return general_from_json(j);
  if (kind == "lfdf") return lfdf_from_json(j);
  bad("unknown model kind '" + kind + "'");
}

std::string dump_model(const AnyModel& m) { return to_json(m).dump(2) + "\n"; }

AnyModel parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("model file is not valid JSON: ") + e.what());
  }
  return model_from_json(j);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AnyModel load_model_file(const std::string& path) {
  return parse_model(read_file(path));
}

json to_json(const DynamicalModel& m, const TimingResult& r) {
  json j;
  j["timed"] = r.timed();
  if (!r.timed()) {
    j["witness"] = m.states[*r.witness];
    return j;
  }
  json tau = json::object();
  for (int s = 0; s < m.size(); ++s) {
    if (r.map.tau[s] == kInfinity)
      tau[m.states[s]] = "inf";
    else
      tau[m.states[s]] = r.map.tau[s];
  }
  j["tau"] = tau;
  return j;
}

}  // namespace dfd
