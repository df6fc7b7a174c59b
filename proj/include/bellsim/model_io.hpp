#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "bellsim/assignments.hpp"
#include "bellsim/hidden_variable.hpp"

namespace bellsim {

using ModelVariant = std::variant<ProbabilityVector16, HiddenVariableModel, JointDistributionModel>;

const char* model_kind(const ModelVariant& model);  // "p16" | "factorizable" | "joint"

/// Parses a .model definition (JSON, schema "bellsim/model/1"; see
/// docs/model-format.md). Unknown keys anywhere are hard errors.
ModelVariant parse_model(const std::string& text, const std::string& origin);

/// Reads and parses a .model file. Unreadable files raise std::system_error;
/// malformed content raises std::invalid_argument.
ModelVariant load_model_file(const std::filesystem::path& path);

}  // namespace bellsim
