#include "bellsim/model_io.hpp"

#include <cerrno>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "bellsim/types.hpp"

namespace bellsim {

namespace {

using nlohmann::json;

constexpr const char* kModelSchema = "bellsim/model/1";
constexpr double kDegToRad = kTwoPi / 360.0;

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
  throw std::invalid_argument(origin + ": " + message);
}

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const std::string& origin, const std::string& where) {
  const std::set<std::string> allowed_set(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!allowed_set.count(item.key())) {
      fail(origin, "unknown key \"" + item.key() + "\" in " + where);
    }
  }
}

const json& require_field(const json& obj, const char* key, const std::string& origin,
                          const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(origin, "missing key \"" + std::string(key) + "\" in " + where);
  return *it;
}

double number_field(const json& value, const std::string& origin, const std::string& where) {
  if (!value.is_number()) fail(origin, where + " must be a number");
  return value.get<double>();
}

std::vector<double> number_array(const json& value, const std::string& origin,
                                 const std::string& where) {
  if (!value.is_array()) fail(origin, where + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(value.size());
  for (const json& v : value) out.push_back(number_field(v, origin, where));
  return out;
}

std::vector<std::string> string_array(const json& value, const std::string& origin,
                                      const std::string& where) {
  if (!value.is_array()) fail(origin, where + " must be an array of strings");
  std::vector<std::string> out;
  for (const json& v : value) {
    if (!v.is_string()) fail(origin, where + " must contain only strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

double angle_scale(const json& root, const std::string& origin) {
  const json& unit = require_field(root, "angle_unit", origin, "the model");
  if (!unit.is_string()) fail(origin, "angle_unit must be \"degrees\" or \"radians\"");
  const std::string s = unit.get<std::string>();
  if (s == "degrees") return kDegToRad;
  if (s == "radians") return 1.0;
  fail(origin, "angle_unit must be \"degrees\" or \"radians\"");
}

ProbabilityVector16 parse_p16(const json& root, const std::string& origin) {
  require_keys(root, {"schema", "kind", "p"}, origin, "a p16 model");
  const auto values = number_array(require_field(root, "p", origin, "the model"), origin, "p");
  if (values.size() != 16) fail(origin, "p must list exactly 16 probabilities");
  ProbabilityVector16 p{};
  std::copy(values.begin(), values.end(), p.p.begin());
  try {
    p.validate();
  } catch (const std::exception& e) {
    fail(origin, e.what());
  }
  return p;
}

WingResponseTable parse_wing(const json& entries, double scale, std::size_t n_lambda,
                             const std::string& origin, const std::string& where) {
  if (!entries.is_array() || entries.empty()) {
    fail(origin, where + " must be a non-empty array of angle entries");
  }
  WingResponseTable wing;
  for (const json& entry : entries) {
    if (!entry.is_object()) fail(origin, where + " entries must be objects");
    require_keys(entry, {"angle", "value", "prob"}, origin, where);
    const double angle =
        scale * number_field(require_field(entry, "angle", origin, where), origin, "angle");
    auto value = number_array(require_field(entry, "value", origin, where), origin, "value");
    auto prob = number_array(require_field(entry, "prob", origin, where), origin, "prob");
    if (value.size() != n_lambda || prob.size() != n_lambda) {
      fail(origin, where + " entries must list one value and one prob per lambda");
    }
    wing.add(angle, std::move(value), std::move(prob));
  }
  return wing;
}

HiddenVariableModel parse_factorizable(const json& root, const std::string& origin) {
  require_keys(root, {"schema", "kind", "angle_unit", "lambdas", "weights", "wing_a", "wing_b"},
               origin, "a factorizable model");
  const double scale = angle_scale(root, origin);

  HiddenVariableModel model;
  model.weights =
      number_array(require_field(root, "weights", origin, "the model"), origin, "weights");
  if (root.contains("lambdas")) {
    model.lambda_labels = string_array(root["lambdas"], origin, "lambdas");
  }
  model.wing_a = parse_wing(require_field(root, "wing_a", origin, "the model"), scale,
                            model.weights.size(), origin, "wing_a");
  model.wing_b = parse_wing(require_field(root, "wing_b", origin, "the model"), scale,
                            model.weights.size(), origin, "wing_b");
  try {
    model.validate();
  } catch (const std::exception& e) {
    fail(origin, e.what());
  }
  return model;
}

JointDistributionModel parse_joint(const json& root, const std::string& origin) {
  require_keys(root, {"schema", "kind", "lambdas", "weights", "a_values", "b_values", "tables"},
               origin, "a joint model");

  JointDistributionModel model;
  model.weights =
      number_array(require_field(root, "weights", origin, "the model"), origin, "weights");
  if (root.contains("lambdas")) {
    model.lambda_labels = string_array(root["lambdas"], origin, "lambdas");
  }
  const auto a_values =
      number_array(require_field(root, "a_values", origin, "the model"), origin, "a_values");
  const auto b_values =
      number_array(require_field(root, "b_values", origin, "the model"), origin, "b_values");

  const json& tables = require_field(root, "tables", origin, "the model");
  if (!tables.is_array() || tables.size() != model.weights.size()) {
    fail(origin, "tables must list one probability table per lambda");
  }
  for (const json& table : tables) {
    if (!table.is_array() || table.size() != a_values.size()) {
      fail(origin, "each table must have one row per a_value");
    }
    JointValueTable t;
    t.a_values = a_values;
    t.b_values = b_values;
    for (const json& row : table) {
      const auto row_values = number_array(row, origin, "table row");
      if (row_values.size() != b_values.size()) {
        fail(origin, "each table row must have one entry per b_value");
      }
      t.probs.insert(t.probs.end(), row_values.begin(), row_values.end());
    }
    model.tables.push_back(std::move(t));
  }
  try {
    model.validate();
  } catch (const std::exception& e) {
    fail(origin, e.what());
  }
  return model;
}

}  // namespace

const char* model_kind(const ModelVariant& model) {
  struct Visitor {
    const char* operator()(const ProbabilityVector16&) const { return "p16"; }
    const char* operator()(const HiddenVariableModel&) const { return "factorizable"; }
    const char* operator()(const JointDistributionModel&) const { return "joint"; }
  };
  return std::visit(Visitor{}, model);
}

ModelVariant parse_model(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, std::string("not valid JSON: ") + e.what());
  }
  if (!root.is_object()) fail(origin, "the model must be a JSON object");

  const json& schema = require_field(root, "schema", origin, "the model");
  if (!schema.is_string() || schema.get<std::string>() != kModelSchema) {
    fail(origin, std::string("schema must be \"") + kModelSchema + "\"");
  }
  const json& kind = require_field(root, "kind", origin, "the model");
  if (!kind.is_string()) fail(origin, "kind must be a string");
  const std::string kind_name = kind.get<std::string>();

  if (kind_name == "p16") return parse_p16(root, origin);
  if (kind_name == "factorizable") return parse_factorizable(root, origin);
  if (kind_name == "joint") return parse_joint(root, origin);
  fail(origin, "kind must be one of \"p16\", \"factorizable\", \"joint\"");
}

ModelVariant load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::system_error(errno, std::generic_category(),
                            "cannot read model file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw std::system_error(EIO, std::generic_category(),
                            "cannot read model file " + path.string());
  }
  return parse_model(buffer.str(), path.string());
}

}  // namespace bellsim
