#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "dfd/analysis.hpp"
#include "dfd/models.hpp"

namespace dfd {

using json = nlohmann::json;

using AnyModel = std::variant<DynamicalModel, StandardRelationalModel,
                              GeneralRelationalModel, LfdFModel>;

json value_to_json(const Value& v);
Value value_from_json(const json& j);

json to_json(const Vocabulary& voc);
Vocabulary vocabulary_from_json(const json& j);

json to_json(const DynamicalModel& m);
json to_json(const StandardRelationalModel& m);
json to_json(const GeneralRelationalModel& m);
json to_json(const LfdFModel& m);
json to_json(const AnyModel& m);

// All loaders throw InvalidModel on malformed documents. They do not run the
// semantic validators.
DynamicalModel dynamical_from_json(const json& j);
StandardRelationalModel standard_from_json(const json& j);
GeneralRelationalModel general_from_json(const json& j);
LfdFModel lfdf_from_json(const json& j);
// Dispatches on the optional "kind" field (default "dynamical").
AnyModel model_from_json(const json& j);

// Canonical text form: two-space indentation, sorted object keys.
std::string dump_model(const AnyModel& m);
AnyModel parse_model(const std::string& text);
AnyModel load_model_file(const std::string& path);
std::string read_file(const std::string& path);

json to_json(const DynamicalModel& m, const TimingResult& r);

}  // namespace dfd
