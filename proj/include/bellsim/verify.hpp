#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bellsim {

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::size_t lemma_samples = 1'000'000;     // per scalar-inequality sweep
  std::size_t p16_samples = 100'000;
  std::size_t factorizable_models = 10'000;
  std::size_t joint_models = 10'000;
  bool inject_table_fault = false;  // corrupt one table row; the check must catch it
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst_margin = 0.0;  // smallest slack observed; negative means violated
  std::string detail;
};

/// Runs the derivation checks: the frozen 16-row assignment table, the two
/// scalar inequality sweeps, and the CHSH ceiling for each model family.
std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

}  // namespace bellsim
