#pragma once

// Loading of the derivation fixtures and their single-line corruptions.

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "dfd/proofsys.hpp"

namespace fixtures {

inline std::string derivation_dir() {
  return std::string(DFD_SOURCE_DIR) + "/fixtures/derivations/";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const std::vector<std::string>& derivation_names() {
  static const std::vector<std::string> names{
      "transfer-monotonicity.json", "timed-next-introduction.json",
      "determinism-necessitation.json", "identity-substitution.json"};
  return names;
}

struct Corruption {
  std::string fixture;
  int line = 0;  // 1-based
  std::string formula;
};

inline std::vector<Corruption> corruptions() {
  auto j = nlohmann::json::parse(read_file(derivation_dir() +
                                           "corruptions.json"));
  std::vector<Corruption> out;
  for (const auto& c : j)
    out.push_back({c.at("fixture").get<std::string>(), c.at("line").get<int>(),
                   c.at("formula").get<std::string>()});
  return out;
}

// Result of checking a corrupted fixture: the 1-based line the checker
// (or the loader) rejected, 0 when it was accepted.
inline int rejected_line(const Corruption& c, std::string* reason = nullptr) {
  auto j = nlohmann::json::parse(read_file(derivation_dir() + c.fixture));
  j.at("lines").at(c.line - 1)["formula"] = c.formula;
  dfd::Derivation d;
  try {
    d = dfd::derivation_from_json_text(j.dump());
  } catch (const dfd::Error& e) {
    // Loader messages carry "line N: ".
    std::string msg = e.what();
    if (reason) *reason = msg;
    auto pos = msg.find("line ");
    return pos == std::string::npos ? -1 : std::stoi(msg.substr(pos + 5));
  }
  dfd::CheckResult r = dfd::check_derivation(d);
  if (reason) *reason = r.reason;
  return r.ok ? 0 : r.line;
}

}  // namespace fixtures
