#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "bellsim/report_io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(BELLSIM_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    result.output.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("bellsim_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("qm at the default settings reports the maximal violation") {
  const CliResult r = run_cli("qm");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("2.828427") != std::string::npos);
  CHECK(r.output.find("VIOLATES") != std::string::npos);
}

TEST_CASE("qm with equal angles satisfies the bound") {
  const CliResult r = run_cli("qm --alpha 10 --alpha-prime 10 --beta 10 --beta-prime 10");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("SATISFIES") != std::string::npos);
  CHECK(r.output.find("2.000000") != std::string::npos);
}

TEST_CASE("qm honors radians and visibility flags") {
  const CliResult r = run_cli(
      "qm --radians --alpha 0 --alpha-prime 1.5707963267948966 --beta 0.7853981633974483 "
      "--beta-prime 2.356194490192345 --visibility 0.954594 --format json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j.at("B").get<double>() == doctest::Approx(2.700).epsilon(1e-5));
  CHECK(j.at("violates_bell_bound").get<bool>());
}

TEST_CASE("qm rejects malformed angles with exit 2") {
  const CliResult r = run_cli("qm --alpha not-a-number");
  CHECK(r.exit_code == 2);
}

TEST_CASE("unknown subcommands are usage errors") {
  const CliResult r = run_cli("frobnicate");
  CHECK(r.exit_code == 2);
}

TEST_CASE("verify passes quickly at reduced sweep sizes") {
  const CliResult r = run_cli("verify --samples 20000 --p16-samples 2000 --models 300");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("wigner-table") != std::string::npos);
  CHECK(r.output.find("all checks passed") != std::string::npos);
  CHECK(r.output.find("FAIL") == std::string::npos);
}

TEST_CASE("verify catches an injected table fault") {
  const CliResult r = run_cli(
      "verify --samples 1000 --p16-samples 100 --models 10 --inject-table-fault");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("FAILED: wigner-table") != std::string::npos);
}

TEST_CASE("mc runs are reproducible and thread-count independent") {
  TempDir dir;
  const std::string csv1 = (dir.path / "a.csv").string();
  const std::string json1 = (dir.path / "a.json").string();
  const std::string csv2 = (dir.path / "b.csv").string();
  const std::string json2 = (dir.path / "b.json").string();

  const CliResult r1 = run_cli("mc --n 200000 --seed 7 --threads 1 --out-csv " + csv1 +
                               " --out-json " + json1);
  const CliResult r2 = run_cli("mc --n 200000 --seed 7 --threads 4 --out-csv " + csv2 +
                               " --out-json " + json2);
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(r1.output.find("seed: 7") != std::string::npos);
  CHECK(read_file(csv1) == read_file(csv2));
  CHECK(read_file(json1) == read_file(json2));

  // Re-running with the printed seed reproduces the files byte for byte.
  const std::string csv3 = (dir.path / "c.csv").string();
  const std::string json3 = (dir.path / "c.json").string();
  const CliResult r3 = run_cli("mc --n 200000 --seed 7 --threads 2 --out-csv " + csv3 +
                               " --out-json " + json3);
  CHECK(r3.exit_code == 0);
  CHECK(read_file(csv1) == read_file(csv3));
}

TEST_CASE("mc with a vertex model estimates B = 2 exactly") {
  TempDir dir;
  const fs::path model = dir.path / "vertex1.model";
  bellsim::write_text_file(model, R"({
    "schema": "bellsim/model/1",
    "kind": "p16",
    "p": [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]
  })");
  const std::string json_out = (dir.path / "report.json").string();
  const CliResult r = run_cli("mc --source p16 --model " + model.string() +
                              " --n 5000 --seed 3 --out-csv " + (dir.path / "e.csv").string() +
                              " --out-json " + json_out);
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(read_file(json_out));
  CHECK(j.at("B").get<double>() == 2.0);
  CHECK(j.at("B_se").get<double>() == 0.0);
}

TEST_CASE("mc flags source/model mismatches and missing models") {
  TempDir dir;
  const fs::path model = dir.path / "vertex1.model";
  bellsim::write_text_file(model, R"({
    "schema": "bellsim/model/1",
    "kind": "p16",
    "p": [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]
  })");
  CHECK(run_cli("mc --source joint --model " + model.string()).exit_code == 2);
  CHECK(run_cli("mc --source p16").exit_code == 2);
  CHECK(run_cli("mc --n 0").exit_code == 2);
}

TEST_CASE("mc reports unwritable output paths as I/O failures") {
  const CliResult r = run_cli("mc --n 1000 --seed 1 --out-csv /nonexistent-dir/x.csv");
  CHECK(r.exit_code == 3);
}

TEST_CASE("the BELLSIM_SEED environment variable seeds runs") {
  TempDir dir;
  const std::string csv = (dir.path / "env.csv").string();
  const std::string json_out = (dir.path / "env.json").string();
  const std::string cmd = "env BELLSIM_SEED=777 " + std::string(BELLSIM_CLI_PATH) +
                          " mc --n 1000 --out-csv " + csv + " --out-json " + json_out + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), n);
  const int status = pclose(pipe);
  CHECK(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(output.find("seed: 777") != std::string::npos);
  const auto j = nlohmann::json::parse(read_file(json_out));
  CHECK(j.at("seed").get<std::uint64_t>() == 777);
}

TEST_CASE("config files feed subcommand options and flags override them") {
  TempDir dir;
  const fs::path cfg = dir.path / "run.ini";
  bellsim::write_text_file(cfg, "[mc]\nn=5000\nseed=9\n");
  const std::string csv = (dir.path / "cfg.csv").string();
  const std::string json_out = (dir.path / "cfg.json").string();

  const CliResult r = run_cli("--config " + cfg.string() + " mc --n 100 --out-csv " + csv +
                              " --out-json " + json_out);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("seed: 9") != std::string::npos);  // from the config
  const auto j = nlohmann::json::parse(read_file(json_out));
  CHECK(j.at("n_per_pair").get<std::uint64_t>() == 100);  // flag wins over config

  // Unknown config keys are hard errors.
  const fs::path bad = dir.path / "bad.ini";
  bellsim::write_text_file(bad, "[mc]\nn=5000\nbogus_key=1\n");
  CHECK(run_cli("--config " + bad.string() + " mc").exit_code == 2);
}

TEST_CASE("table dumps all 16 rows") {
  const CliResult r = run_cli("table --format json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j.at("rows").size() == 16);
  const auto& row7 = j.at("rows")[6];
  CHECK(row7.at("a").get<int>() == 1);
  CHECK(row7.at("b").get<int>() == -1);
  CHECK(row7.at("a_prime").get<int>() == -1);
  CHECK(row7.at("b_prime").get<int>() == 1);
  CHECK(row7.at("ab").get<int>() == -1);

  const CliResult human = run_cli("table");
  CHECK(human.exit_code == 0);
  CHECK(human.output.find("16") != std::string::npos);
}

TEST_CASE("optimize recovers the quantum maximum") {
  const CliResult r = run_cli("optimize --source quantum --grid 12 --tol 1e-6 --format json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j.at("B").get<double>() == doctest::Approx(2.8284271).epsilon(1e-5));
  CHECK(j.at("converged").get<bool>());
}

TEST_CASE("optimize over random mixtures reports the ceiling") {
  const CliResult r = run_cli("optimize --source lhv-random --models 2000 --seed 5");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("2.000000") != std::string::npos);
}

TEST_CASE("optimize emits a plot-ready slice with the maximum on it") {
  TempDir dir;
  const std::string slice = (dir.path / "slice.csv").string();
  const CliResult r = run_cli(
      "optimize --source quantum --grid 12 --slice alpha-beta --slice-grid 24 --slice-out " +
      slice);
  CHECK(r.exit_code == 0);
  const std::string csv = read_file(slice);
  CHECK(csv.rfind("alpha_deg,beta_deg,B\n", 0) == 0);
  // 24 x 24 rows plus the header.
  std::size_t lines = 0;
  for (char c : csv) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == 24 * 24 + 1);
  // The anchored grid passes through the configured settings, so the
  // maximum 2*sqrt(2) appears on the slice.
  CHECK(csv.find("2.828427") != std::string::npos);
}
