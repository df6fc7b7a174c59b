#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <optional>
#include <random>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellsim/assignments.hpp"
#include "bellsim/chsh.hpp"
#include "bellsim/hidden_variable.hpp"
#include "bellsim/model_io.hpp"
#include "bellsim/montecarlo.hpp"
#include "bellsim/optimize.hpp"
#include "bellsim/quantum.hpp"
#include "bellsim/report_io.hpp"
#include "bellsim/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

constexpr double kDegToRad = bellsim::kTwoPi / 360.0;

struct AngleFlags {
  // CLI angles default to degrees; --radians switches the whole command.
  double alpha = 0.0;
  double alpha_prime = 90.0;
  double beta = 45.0;
  double beta_prime = 135.0;
  bool radians = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--alpha", alpha, "First-wing angle alpha")->capture_default_str();
    cmd->add_option("--alpha-prime", alpha_prime, "First-wing angle alpha'")
        ->capture_default_str();
    cmd->add_option("--beta", beta, "Second-wing angle beta")->capture_default_str();
    cmd->add_option("--beta-prime", beta_prime, "Second-wing angle beta'")
        ->capture_default_str();
    cmd->add_flag("--radians", radians, "Interpret angles as radians instead of degrees");
  }

  bellsim::AngleSettings settings() const {
    const double scale = radians ? 1.0 : kDegToRad;
    return bellsim::AngleSettings{scale * alpha, scale * alpha_prime, scale * beta,
                                  scale * beta_prime};
  }
};

std::uint64_t resolve_seed(const CLI::App* cmd, std::uint64_t flag_value) {
  if (cmd->count("--seed") > 0) return flag_value;
  if (const char* env = std::getenv("BELLSIM_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("BELLSIM_SEED", "must be an unsigned integer");
    }
  }
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// ----- verify ---------------------------------------------------------------

int run_verify(const bellsim::VerifyOptions& options) {
  const auto results = bellsim::run_verification(options);
  std::printf("seed: %" PRIu64 "\n", options.seed);
  std::printf("%-20s %-6s %-12s %s\n", "check", "result", "worst margin", "detail");
  bool all_pass = true;
  for (const auto& r : results) {
    std::printf("%-20s %-6s %-12.3e %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                r.worst_margin, r.detail.c_str());
    all_pass = all_pass && r.pass;
  }
  if (!all_pass) {
    std::string failing;
    for (const auto& r : results) {
      if (!r.pass) failing += (failing.empty() ? "" : ", ") + r.name;
    }
    std::printf("FAILED: %s\n", failing.c_str());
    return kExitVerificationFailed;
  }
  std::printf("all checks passed\n");
  return kExitOk;
}

// ----- qm -------------------------------------------------------------------

int run_qm(const AngleFlags& angles, std::optional<double> visibility,
           const std::string& format) {
  const bellsim::AngleSettings settings = angles.settings();

  std::array<bellsim::Correlator, 4> xi{};
  if (visibility) {
    const bellsim::VisibilityModel v{*visibility};
    for (std::size_t k = 0; k < 4; ++k) {
      const auto [a, b] = bellsim::pair_angles(settings, bellsim::kSettingPairs[k]);
      xi[k] = bellsim::visibility_correlator(v, a, b);
    }
  } else {
    const bellsim::QuantumState state = bellsim::singlet_state();
    for (std::size_t k = 0; k < 4; ++k) {
      const auto [a, b] = bellsim::pair_angles(settings, bellsim::kSettingPairs[k]);
      xi[k] = bellsim::correlator_qm(state, a, b);
    }
  }
  const double b = bellsim::chsh_combination(xi[0], xi[1], xi[2], xi[3]);
  const bool violates = b > 2.0;

  if (format == "json") {
    nlohmann::json j;
    j["schema"] = "bellsim/qm-report/1";
    for (std::size_t k = 0; k < 4; ++k) {
      j["correlators"][bellsim::to_label(bellsim::kSettingPairs[k])] = xi[k].value;
    }
    j["B"] = b;
    j["violates_bell_bound"] = violates;
    if (visibility) j["visibility"] = *visibility;
    std::printf("%s\n", j.dump(2).c_str());
  } else if (format == "csv") {
    std::printf("pair,xi\n");
    for (std::size_t k = 0; k < 4; ++k) {
      std::printf("%s,%s\n", bellsim::to_label(bellsim::kSettingPairs[k]),
                  fixed6(xi[k].value).c_str());
    }
    std::printf("B,%s\n", fixed6(b).c_str());
  } else {
    std::printf("%-6s %s\n", "pair", "correlator");
    for (std::size_t k = 0; k < 4; ++k) {
      std::printf("%-6s %9s\n", bellsim::to_label(bellsim::kSettingPairs[k]),
                  fixed6(xi[k].value).c_str());
    }
    std::printf("B = %s  (%s the Bell bound B <= 2)\n", fixed6(b).c_str(),
                violates ? "VIOLATES" : "SATISFIES");
  }
  return kExitOk;
}

// ----- mc -------------------------------------------------------------------

bellsim::Source make_source(const std::string& kind, const std::string& model_path,
                            std::optional<double> visibility) {
  if (kind == "quantum") return bellsim::QuantumSource{};
  if (kind == "visibility") {
    return bellsim::VisibilitySource{bellsim::VisibilityModel{visibility.value_or(1.0)}};
  }
  if (model_path.empty()) {
    throw CLI::ValidationError("--model", "a .model file is required for source '" + kind + "'");
  }
  bellsim::ModelVariant loaded = bellsim::load_model_file(model_path);
  if (kind != bellsim::model_kind(loaded)) {
    throw CLI::ValidationError("--model", "file declares kind '" +
                                              std::string(bellsim::model_kind(loaded)) +
                                              "' but --source is '" + kind + "'");
  }
  if (auto* p = std::get_if<bellsim::ProbabilityVector16>(&loaded)) {
    return bellsim::P16Source{*p};
  }
  if (auto* m = std::get_if<bellsim::HiddenVariableModel>(&loaded)) {
    return bellsim::FactorizableSource{std::move(*m)};
  }
  return bellsim::JointSource{std::move(std::get<bellsim::JointDistributionModel>(loaded))};
}

int run_mc(const AngleFlags& angles, const std::string& source_kind_name,
           const std::string& model_path, std::optional<double> visibility, std::uint64_t n,
           std::uint64_t seed, unsigned threads, const std::string& csv_path,
           const std::string& json_path) {
  const bellsim::TrialPlan plan{n, angles.settings(),
                                make_source(source_kind_name, model_path, visibility), seed};
  plan.validate();

  std::printf("seed: %" PRIu64 "\n", seed);
  const bellsim::EventCounts counts = bellsim::sample_events(plan, threads);
  const bellsim::ChshReport report = bellsim::estimate_chsh(counts);

  const bellsim::RunMetadata meta{source_kind_name, plan.settings, n, seed};
  bellsim::write_text_file(csv_path, bellsim::counts_to_csv(counts, report));
  bellsim::write_text_file(json_path, bellsim::report_to_json(meta, counts, report));

  std::printf("B = %s +- %s\n", fixed6(report.b()).c_str(), fixed6(report.b_se()).c_str());
  std::printf("wrote: %s %s\n", csv_path.c_str(), json_path.c_str());
  return kExitOk;
}

// ----- optimize -------------------------------------------------------------

int run_optimize(const std::string& source_kind_name, std::optional<double> visibility,
                 std::uint64_t n_models, std::uint64_t seed, int grid_n, double tol,
                 bool no_gauge_fix, const std::string& slice, int slice_grid,
                 const std::string& slice_out, const AngleFlags& angles,
                 const std::string& format) {
  if (source_kind_name == "lhv-random") {
    std::printf("seed: %" PRIu64 "\n", seed);
    const double ceiling = bellsim::lhv_ceiling_search(n_models, seed);
    std::printf("max B over 16 deterministic assignments and %" PRIu64
                " random mixtures = %s\n",
                n_models, fixed6(ceiling).c_str());
    return kExitOk;
  }

  bellsim::CorrelatorSource source;
  if (source_kind_name == "quantum") {
    source = [state = bellsim::singlet_state()](double a, double b) {
      return bellsim::correlator_qm(state, a, b).value;
    };
  } else if (source_kind_name == "visibility") {
    const bellsim::VisibilityModel v{visibility.value_or(1.0)};
    v.validate();
    source = [v](double a, double b) { return bellsim::visibility_correlator(v, a, b).value; };
  } else {
    throw CLI::ValidationError("--source",
                               "must be one of 'quantum', 'visibility', 'lhv-random'");
  }

  if (!slice.empty()) {
    if (slice != "alpha-beta") {
      throw CLI::ValidationError("--slice", "only the 'alpha-beta' slice is supported");
    }
    // B over (alpha, beta) offsets through full circles anchored at the
    // configured settings; alpha' and beta' stay fixed.
    const bellsim::AngleSettings base = angles.settings();
    std::string csv = "alpha_deg,beta_deg,B\n";
    const double step = 360.0 / slice_grid;
    for (int i = 0; i < slice_grid; ++i) {
      for (int j = 0; j < slice_grid; ++j) {
        const double alpha_deg = angles.radians ? base.alpha / kDegToRad + i * step
                                                : angles.alpha + i * step;
        const double beta_deg =
            angles.radians ? base.beta / kDegToRad + j * step : angles.beta + j * step;
        const bellsim::AngleSettings s{alpha_deg * kDegToRad, base.alpha_prime,
                                       beta_deg * kDegToRad, base.beta_prime};
        auto xi = [&](bellsim::SettingPair pair) {
          const auto [wa, wb] = bellsim::pair_angles(s, pair);
          return bellsim::Correlator{source(wa, wb)};
        };
        const double b = bellsim::chsh_combination(
            xi(bellsim::SettingPair::ab), xi(bellsim::SettingPair::ab_prime),
            xi(bellsim::SettingPair::a_prime_b), xi(bellsim::SettingPair::a_prime_b_prime));
        csv += fixed6(alpha_deg) + ',' + fixed6(beta_deg) + ',' + fixed6(b) + '\n';
      }
    }
    bellsim::write_text_file(slice_out, csv);
    std::printf("wrote: %s\n", slice_out.c_str());
  }

  bellsim::OptimizeOptions options;
  options.grid_n = grid_n;
  options.refine_tol = tol;
  options.gauge_fix_alpha = !no_gauge_fix;
  const bellsim::OptimizationResult result = bellsim::maximize_chsh(source, options);

  if (format == "json") {
    nlohmann::json j;
    j["schema"] = "bellsim/optimize-report/1";
    j["B"] = result.b;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    j["settings_deg"] = {{"alpha", result.settings.alpha / kDegToRad},
                         {"alpha_prime", result.settings.alpha_prime / kDegToRad},
                         {"beta", result.settings.beta / kDegToRad},
                         {"beta_prime", result.settings.beta_prime / kDegToRad}};
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("B = %s after %d refinement sweeps (%s)\n", fixed6(result.b).c_str(),
                result.iterations, result.converged ? "converged" : "not converged");
    std::printf("alpha = %s deg, alpha' = %s deg, beta = %s deg, beta' = %s deg\n",
                fixed6(result.settings.alpha / kDegToRad).c_str(),
                fixed6(result.settings.alpha_prime / kDegToRad).c_str(),
                fixed6(result.settings.beta / kDegToRad).c_str(),
                fixed6(result.settings.beta_prime / kDegToRad).c_str());
  }
  return kExitOk;
}

// ----- table ----------------------------------------------------------------

int run_table(const std::string& format) {
  const auto& rows = bellsim::enumerate_assignments();
  auto sign = [](int v) { return v > 0 ? '+' : '-'; };

  if (format == "json") {
    nlohmann::json j;
    j["schema"] = "bellsim/assignment-table/1";
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) {
      const auto products = r.products();
      out.push_back({{"row", r.row_index},
                     {"a", r.a},
                     {"b", r.b},
                     {"a_prime", r.a_prime},
                     {"b_prime", r.b_prime},
                     {"ab", products[0]},
                     {"ab_prime", products[1]},
                     {"a_prime_b", products[2]},
                     {"a_prime_b_prime", products[3]}});
    }
    j["rows"] = std::move(out);
    std::printf("%s\n", j.dump(2).c_str());
  } else if (format == "csv") {
    std::printf("row,a,b,a',b',ab,ab',a'b,a'b'\n");
    for (const auto& r : rows) {
      const auto products = r.products();
      std::printf("%d,%d,%d,%d,%d,%d,%d,%d,%d\n", r.row_index, r.a, r.b, r.a_prime, r.b_prime,
                  products[0], products[1], products[2], products[3]);
    }
  } else {
    std::printf("%-4s %2s %2s %3s %3s   %3s %4s %4s %5s\n", "row", "a", "b", "a'", "b'", "ab",
                "ab'", "a'b", "a'b'");
    for (const auto& r : rows) {
      const auto products = r.products();
      std::printf("%-4d %2c %2c %3c %3c   %3c %4c %4c %5c\n", r.row_index, sign(r.a), sign(r.b),
                  sign(r.a_prime), sign(r.b_prime), sign(products[0]), sign(products[1]),
                  sign(products[2]), sign(products[3]));
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CHSH/Bell inequality simulator: hidden-variable ceilings, the exact two-qubit "
               "prediction, finite-statistics runs, and angle optimization"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI/TOML config file");
  app.allow_config_extras(false);

  const std::vector<std::string> formats{"table", "json", "csv"};

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Run the derivation checks");
  bellsim::VerifyOptions verify_options;
  std::uint64_t verify_seed = 1;
  verify_cmd->add_option("--samples", verify_options.lemma_samples,
                         "Samples per scalar-inequality sweep")
      ->capture_default_str();
  verify_cmd->add_option("--p16-samples", verify_options.p16_samples,
                         "Random 16-row distributions to sweep")
      ->capture_default_str();
  std::uint64_t verify_models = 10'000;
  verify_cmd->add_option("--models", verify_models,
                         "Random factorizable/joint models to sweep")
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify_seed, "Sweep seed (default: BELLSIM_SEED or 1)");
  verify_cmd
      ->add_flag("--inject-table-fault", verify_options.inject_table_fault,
                 "Corrupt one assignment-table row (forces a failure)")
      ->group("");  // test hook, hidden from --help

  // qm
  auto* qm_cmd = app.add_subcommand("qm", "Evaluate the exact two-qubit prediction");
  AngleFlags qm_angles;
  qm_angles.add_to(qm_cmd);
  double qm_visibility = 1.0;
  auto* qm_visibility_opt =
      qm_cmd->add_option("--visibility", qm_visibility, "Scale correlators by a visibility V");
  std::string qm_format = "table";
  qm_cmd->add_option("--format", qm_format, "Output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();

  // mc
  auto* mc_cmd = app.add_subcommand("mc", "Run a finite-statistics coincidence experiment");
  AngleFlags mc_angles;
  mc_angles.add_to(mc_cmd);
  std::string mc_source = "quantum";
  mc_cmd->add_option("--source", mc_source, "Outcome source")
      ->check(CLI::IsMember({"quantum", "p16", "factorizable", "joint", "visibility"}))
      ->capture_default_str();
  std::string mc_model;
  mc_cmd->add_option("--model", mc_model, "Model definition file (.model)");
  double mc_visibility = 1.0;
  auto* mc_visibility_opt =
      mc_cmd->add_option("--visibility", mc_visibility, "Visibility for --source visibility");
  std::uint64_t mc_n = 1'000'000;
  mc_cmd->add_option("--n", mc_n, "Trials per setting pair")->capture_default_str();
  std::uint64_t mc_seed = 0;
  mc_cmd->add_option("--seed", mc_seed, "Master seed (default: BELLSIM_SEED or random)");
  unsigned mc_threads = 1;
  mc_cmd->add_option("--threads", mc_threads, "Worker cap; never changes the results")
      ->capture_default_str();
  std::string mc_csv = "events.csv";
  mc_cmd->add_option("--out-csv", mc_csv, "Counts CSV path")->capture_default_str();
  std::string mc_json = "chsh_report.json";
  mc_cmd->add_option("--out-json", mc_json, "Report JSON path")->capture_default_str();

  // optimize
  auto* opt_cmd = app.add_subcommand("optimize", "Search settings maximizing B");
  AngleFlags opt_angles;
  opt_angles.add_to(opt_cmd);
  std::string opt_source = "quantum";
  opt_cmd->add_option("--source", opt_source, "Correlator source")
      ->check(CLI::IsMember({"quantum", "visibility", "lhv-random"}))
      ->capture_default_str();
  double opt_visibility = 1.0;
  auto* opt_visibility_opt =
      opt_cmd->add_option("--visibility", opt_visibility, "Visibility for --source visibility");
  std::uint64_t opt_models = 100'000;
  opt_cmd->add_option("--models", opt_models, "Random mixtures for --source lhv-random")
      ->capture_default_str();
  std::uint64_t opt_seed = 0;
  opt_cmd->add_option("--seed", opt_seed, "Seed for --source lhv-random");
  int opt_grid = 24;
  opt_cmd->add_option("--grid", opt_grid, "Coarse-grid points per dimension")
      ->capture_default_str();
  double opt_tol = 1e-7;
  opt_cmd->add_option("--tol", opt_tol, "Refinement step tolerance")->capture_default_str();
  bool opt_no_gauge_fix = false;
  opt_cmd->add_flag("--no-gauge-fix", opt_no_gauge_fix,
                    "Search alpha too instead of freezing it at 0");
  std::string opt_slice;
  opt_cmd->add_option("--slice", opt_slice, "Emit a 2D B sweep ('alpha-beta')");
  int opt_slice_grid = 180;
  opt_cmd->add_option("--slice-grid", opt_slice_grid, "Slice grid points per axis")
      ->capture_default_str();
  std::string opt_slice_out = "slice.csv";
  opt_cmd->add_option("--slice-out", opt_slice_out, "Slice CSV path")->capture_default_str();
  std::string opt_format = "table";
  opt_cmd->add_option("--format", opt_format, "Output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();

  // table
  auto* table_cmd = app.add_subcommand("table", "Dump the 16-row assignment table");
  std::string table_format = "table";
  table_cmd->add_option("--format", table_format, "Output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (verify_cmd->parsed()) {
      verify_options.seed = resolve_seed(verify_cmd, verify_seed);
      if (verify_cmd->count("--seed") == 0 && std::getenv("BELLSIM_SEED") == nullptr) {
        verify_options.seed = 1;  // deterministic default for the check suite
      }
      verify_options.factorizable_models = verify_models;
      verify_options.joint_models = verify_models;
      return run_verify(verify_options);
    }
    if (qm_cmd->parsed()) {
      std::optional<double> v;
      if (qm_visibility_opt->count() > 0) v = qm_visibility;
      return run_qm(qm_angles, v, qm_format);
    }
    if (mc_cmd->parsed()) {
      std::optional<double> v;
      if (mc_visibility_opt->count() > 0) v = mc_visibility;
      const std::uint64_t seed = resolve_seed(mc_cmd, mc_seed);
      return run_mc(mc_angles, mc_source, mc_model, v, mc_n, seed, mc_threads, mc_csv, mc_json);
    }
    if (opt_cmd->parsed()) {
      std::optional<double> v;
      if (opt_visibility_opt->count() > 0) v = opt_visibility;
      const std::uint64_t seed = resolve_seed(opt_cmd, opt_seed);
      return run_optimize(opt_source, v, opt_models, seed, opt_grid, opt_tol, opt_no_gauge_fix,
                          opt_slice, opt_slice_grid, opt_slice_out, opt_angles, opt_format);
    }
    if (table_cmd->parsed()) {
      return run_table(table_format);
    }
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::system_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
