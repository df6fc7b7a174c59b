#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "bellsim/chsh.hpp"
#include "bellsim/hidden_variable.hpp"
#include "bellsim/model_io.hpp"
#include "bellsim/report_io.hpp"

using namespace bellsim;

namespace {

std::string vertex1_text() {
  return R"({
    "schema": "bellsim/model/1",
    "kind": "p16",
    "p": [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]
  })";
}

}  // namespace

TEST_CASE("parse_model reads a p16 vertex") {
  const ModelVariant model = parse_model(vertex1_text(), "vertex1.model");
  CHECK(std::string(model_kind(model)) == "p16");
  const auto& p = std::get<ProbabilityVector16>(model);
  CHECK(p.p[0] == 1.0);
  CHECK(chsh_of_p16(p) == 2.0);
}

TEST_CASE("parse_model rejects unknown keys, naming them") {
  const std::string text = R"({
    "schema": "bellsim/model/1",
    "kind": "p16",
    "p": [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    "extra": 1
  })";
  try {
    parse_model(text, "bad.model");
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("extra") != std::string::npos);
  }
}

TEST_CASE("parse_model rejects malformed content") {
  CHECK_THROWS_AS(parse_model("not json", "x.model"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model(R"({"schema":"other","kind":"p16"})", "x.model"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_model(R"({"schema":"bellsim/model/1","kind":"nope"})", "x.model"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      parse_model(R"({"schema":"bellsim/model/1","kind":"p16","p":[1,0]})", "x.model"),
      std::invalid_argument);
  // Probabilities that do not sum to 1.
  CHECK_THROWS_AS(
      parse_model(
          R"({"schema":"bellsim/model/1","kind":"p16","p":[0.5,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]})",
          "x.model"),
      std::invalid_argument);
}

TEST_CASE("parse_model reads a factorizable model with degree angles") {
  const std::string text = R"({
    "schema": "bellsim/model/1",
    "kind": "factorizable",
    "angle_unit": "degrees",
    "lambdas": ["up", "down"],
    "weights": [0.5, 0.5],
    "wing_a": [
      {"angle": 0,  "value": [1.0, -1.0], "prob": [1.0, 1.0]},
      {"angle": 90, "value": [0.5, -0.5], "prob": [1.0, 0.5]}
    ],
    "wing_b": [
      {"angle": 45,  "value": [1.0, -1.0], "prob": [1.0, 1.0]},
      {"angle": 135, "value": [0.25, 0.25], "prob": [0.8, 0.8]}
    ]
  })";
  const ModelVariant model = parse_model(text, "fact.model");
  CHECK(std::string(model_kind(model)) == "factorizable");
  const auto& m = std::get<HiddenVariableModel>(model);
  CHECK(m.n_lambda() == 2);
  CHECK(m.lambda_labels[0] == "up");

  const double quarter = kTwoPi / 8.0;  // 45 degrees in radians
  // xi(0deg, 45deg) = 0.5*(1*1)*(1*1) + 0.5*(-1*1)*(-1*1) = 1.
  CHECK(correlator_factorizable(m, 0.0, quarter).value == doctest::Approx(1.0).epsilon(1e-12));
  // Effective values at 90deg: 0.5 and -0.25; at 135deg: 0.2 and 0.2.
  CHECK(correlator_factorizable(m, 2.0 * quarter, 3.0 * quarter).value ==
        doctest::Approx(0.5 * 0.5 * 0.2 + 0.5 * (-0.25) * 0.2).epsilon(1e-12));
  CHECK_THROWS_AS(correlator_factorizable(m, 0.1, quarter), std::invalid_argument);

  const AngleSettings settings{0.0, 2.0 * quarter, quarter, 3.0 * quarter};
  CHECK(chsh_factorizable(m, settings) <= 2.0 + kIneqTol);
}

TEST_CASE("parse_model validates factorizable entries") {
  const std::string bad_unit = R"({
    "schema": "bellsim/model/1", "kind": "factorizable", "angle_unit": "turns",
    "weights": [1.0],
    "wing_a": [{"angle": 0, "value": [1.0], "prob": [1.0]}],
    "wing_b": [{"angle": 0, "value": [1.0], "prob": [1.0]}]
  })";
  CHECK_THROWS_AS(parse_model(bad_unit, "x.model"), std::invalid_argument);

  const std::string short_entry = R"({
    "schema": "bellsim/model/1", "kind": "factorizable", "angle_unit": "radians",
    "weights": [0.5, 0.5],
    "wing_a": [{"angle": 0, "value": [1.0], "prob": [1.0, 1.0]}],
    "wing_b": [{"angle": 0, "value": [1.0, 1.0], "prob": [1.0, 1.0]}]
  })";
  CHECK_THROWS_AS(parse_model(short_entry, "x.model"), std::invalid_argument);

  const std::string unknown_entry_key = R"({
    "schema": "bellsim/model/1", "kind": "factorizable", "angle_unit": "radians",
    "weights": [1.0],
    "wing_a": [{"angle": 0, "value": [1.0], "prob": [1.0], "label": "x"}],
    "wing_b": [{"angle": 0, "value": [1.0], "prob": [1.0]}]
  })";
  CHECK_THROWS_AS(parse_model(unknown_entry_key, "x.model"), std::invalid_argument);
}

TEST_CASE("parse_model reads a joint model") {
  const std::string text = R"({
    "schema": "bellsim/model/1",
    "kind": "joint",
    "weights": [0.25, 0.75],
    "a_values": [1, -1],
    "b_values": [1, -1],
    "tables": [
      [[0.5, 0.0], [0.0, 0.5]],
      [[0.0, 0.5], [0.5, 0.0]]
    ]
  })";
  const ModelVariant model = parse_model(text, "joint.model");
  const auto& m = std::get<JointDistributionModel>(model);
  // xi = 0.25 * (+1) + 0.75 * (-1) = -0.5 for every pair label.
  for (SettingPair pair : kSettingPairs) {
    CHECK(correlator_joint_model(m, pair).value == doctest::Approx(-0.5).epsilon(1e-12));
  }
  CHECK(chsh_joint_model(m) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(check_joint_chain(m).ok);
}

TEST_CASE("parse_model rejects ragged joint tables") {
  const std::string text = R"({
    "schema": "bellsim/model/1", "kind": "joint",
    "weights": [1.0],
    "a_values": [1, -1], "b_values": [1, -1],
    "tables": [[[0.5, 0.0], [0.5]]]
  })";
  CHECK_THROWS_AS(parse_model(text, "x.model"), std::invalid_argument);
}

TEST_CASE("load_model_file reads from disk and reports missing files") {
  const auto dir = std::filesystem::temp_directory_path() / "bellsim_model_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "vertex1.model";
  write_text_file(path, vertex1_text());
  const ModelVariant model = load_model_file(path);
  CHECK(std::string(model_kind(model)) == "p16");

  CHECK_THROWS_AS(load_model_file(dir / "missing.model"), std::system_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("write_text_file fails loudly on unwritable paths") {
  CHECK_THROWS_AS(write_text_file("/nonexistent-dir/file.csv", "x"), std::system_error);
}

TEST_CASE("the shipped example models load and stay at or under the ceiling") {
  const std::filesystem::path dir{BELLSIM_MODELS_DIR};

  const auto vertex = load_model_file(dir / "vertex1.model");
  CHECK(chsh_of_p16(std::get<ProbabilityVector16>(vertex)) == 2.0);

  const auto uniform = load_model_file(dir / "uniform.model");
  CHECK(chsh_of_p16(std::get<ProbabilityVector16>(uniform)) == 0.0);

  const auto anti = load_model_file(dir / "anticorrelated.model");
  const auto& fact = std::get<HiddenVariableModel>(anti);
  const double quarter = kTwoPi / 8.0;
  const AngleSettings settings{0.0, 2.0 * quarter, quarter, 3.0 * quarter};
  CHECK(chsh_factorizable(fact, settings) == 2.0);

  const auto joint = load_model_file(dir / "joint_mixture.model");
  const auto& jm = std::get<JointDistributionModel>(joint);
  CHECK(correlator_joint_model(jm, SettingPair::ab).value ==
        doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(chsh_joint_model(jm) <= 2.0 + kIneqTol);
}
