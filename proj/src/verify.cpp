#include "bellsim/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "bellsim/assignments.hpp"
#include "bellsim/chsh.hpp"
#include "bellsim/hidden_variable.hpp"
#include "bellsim/rng.hpp"
#include "bellsim/types.hpp"

namespace bellsim {

namespace {

// Frozen sign table: columns (a, b, a', b', ab, ab', a'b, a'b'), rows 1..16.
// This copy is kept independent of enumerate_assignments() on purpose.
constexpr std::array<std::array<int, 8>, 16> kFrozenTable{{
    {+1, +1, +1, +1, +1, +1, +1, +1},
    {+1, +1, +1, -1, +1, -1, +1, -1},
    {+1, +1, -1, +1, +1, +1, -1, -1},
    {+1, +1, -1, -1, +1, -1, -1, +1},
    {+1, -1, +1, +1, -1, +1, -1, +1},
    {+1, -1, +1, -1, -1, -1, -1, -1},
    {+1, -1, -1, +1, -1, +1, +1, -1},
    {+1, -1, -1, -1, -1, -1, +1, +1},
    {-1, +1, +1, +1, -1, -1, +1, +1},
    {-1, +1, +1, -1, -1, +1, +1, -1},
    {-1, +1, -1, +1, -1, -1, -1, -1},
    {-1, +1, -1, -1, -1, +1, -1, +1},
    {-1, -1, +1, +1, +1, -1, -1, +1},
    {-1, -1, +1, -1, +1, +1, -1, -1},
    {-1, -1, -1, +1, +1, -1, +1, -1},
    {-1, -1, -1, -1, +1, +1, +1, +1},
}};

std::string format_margin(double m) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << m;
  return out.str();
}

CheckResult check_assignment_table(bool inject_fault) {
  CheckResult result{"wigner-table", false, 0.0, ""};
  auto rows = enumerate_assignments();
  if (inject_fault) rows[6].b_prime = -rows[6].b_prime;

  int mismatches = 0;
  for (std::size_t i = 0; i < 16; ++i) {
    const auto& row = rows[i];
    const auto products = row.products();
    const std::array<int, 8> got{row.a,        row.b,        row.a_prime, row.b_prime,
                                 products[0], products[1],  products[2], products[3]};
    for (std::size_t c = 0; c < 8; ++c) {
      if (got[c] != kFrozenTable[i][c]) ++mismatches;
    }
    if (row.row_index != static_cast<int>(i) + 1) ++mismatches;
  }
  result.pass = mismatches == 0;
  result.worst_margin = mismatches == 0 ? 0.0 : -static_cast<double>(mismatches);
  result.detail = result.pass ? "all 16 rows match the frozen table"
                              : std::to_string(mismatches) + " cell(s) differ from the frozen table";
  return result;
}

CheckResult check_abs_sum_lemma(RngStream rng, std::size_t samples) {
  CheckResult result{"lemma-abs-sum", false, 1.0, ""};
  double worst = 2.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double y = rng.next_symmetric();
    const double yp = rng.next_symmetric();
    const double margin_plus = 1.0 + y * yp - std::abs(y + yp);
    const double margin_minus = 1.0 - y * yp - std::abs(y - yp);
    worst = std::min({worst, margin_plus, margin_minus});
    const auto bound = lemma_abs_sum_bound(y, yp);
    if (!bound.holds_plus || !bound.holds_minus) worst = std::min(worst, -1.0);
  }
  result.worst_margin = worst;
  result.pass = worst >= -kIneqTol;
  result.detail = std::to_string(samples) + " samples, worst slack " + format_margin(worst);
  return result;
}

CheckResult check_q_quantity(RngStream rng, std::size_t samples) {
  CheckResult result{"q-quantity", false, 1.0, ""};
  double worst = 2.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = rng.next_symmetric();
    const double xp = rng.next_symmetric();
    const double y = rng.next_symmetric();
    const double yp = rng.next_symmetric();
    // Factor steps first, then the assembled bound.
    const double step1 = std::abs(x) * (1.0 - y * yp) - std::abs(x * y - x * yp);
    const double step2 = (1.0 - y * yp) - std::abs(x) * (1.0 - y * yp);
    const double step3 = std::abs(xp) * (1.0 + y * yp) - std::abs(xp * y + xp * yp);
    const double step4 = (1.0 + y * yp) - std::abs(xp) * (1.0 + y * yp);
    const double total = 2.0 - q_quantity(x, xp, y, yp);
    worst = std::min({worst, step1, step2, step3, step4, total});
  }
  result.worst_margin = worst;
  result.pass = worst >= -kIneqTol;
  result.detail = std::to_string(samples) + " samples, worst slack " + format_margin(worst);
  return result;
}

CheckResult check_p16_ceiling(RngStream rng, std::size_t samples) {
  CheckResult result{"p16-sweep", false, 1.0, ""};
  bool vertices_ok = true;
  double vertex_max = 0.0;
  for (int row = 1; row <= 16; ++row) {
    const double b = chsh_of_p16(point_mass16(row));
    vertex_max = std::max(vertex_max, b);
    if (b != 0.0 && b != 2.0) vertices_ok = false;
  }
  if (vertex_max != 2.0) vertices_ok = false;

  double worst = 2.0;
  for (std::size_t i = 0; i < samples; ++i) {
    worst = std::min(worst, 2.0 - chsh_of_p16(random_p16(rng)));
  }
  result.worst_margin = vertices_ok ? worst : -1.0;
  result.pass = vertices_ok && worst >= -kIneqTol;
  result.detail = "16 vertices max B = " + std::to_string(vertex_max) + "; " +
                  std::to_string(samples) + " random mixtures, worst slack " +
                  format_margin(worst);
  return result;
}

CheckResult check_factorizable_ceiling(RngStream rng, std::size_t n_models) {
  CheckResult result{"factorizable-sweep", false, 1.0, ""};
  double worst = 2.0;
  for (std::size_t i = 0; i < n_models; ++i) {
    const AngleSettings settings = random_settings(rng);
    const std::size_t n_lambda = 1 + (rng.next_u64() % 8);
    const HiddenVariableModel model = random_factorizable_model(rng, settings, n_lambda);

    // Per-lambda Q bound, the mixture bound, then the assembled B.
    double q_mix = 0.0;
    double q_max = 0.0;
    for (std::size_t l = 0; l < model.n_lambda(); ++l) {
      const double q = q_quantity(model.effective_a(settings.alpha, l),
                                  model.effective_a(settings.alpha_prime, l),
                                  model.effective_b(settings.beta, l),
                                  model.effective_b(settings.beta_prime, l));
      q_mix += model.weights[l] * q;
      q_max = std::max(q_max, q);
      worst = std::min(worst, 2.0 - q);
    }
    const double b = chsh_factorizable(model, settings);
    worst = std::min({worst, q_mix - b, q_max - q_mix, 2.0 - q_max, 2.0 - b});
  }
  result.worst_margin = worst;
  result.pass = worst >= -kIneqTol;
  result.detail = std::to_string(n_models) + " random models, worst slack " + format_margin(worst);
  return result;
}

CheckResult check_joint_models(RngStream rng, std::size_t n_models) {
  CheckResult result{"joint-chain", false, 1.0, ""};
  double worst = 2.0;
  double worst_linearity = 0.0;
  for (std::size_t i = 0; i < n_models; ++i) {
    const std::size_t n_lambda = 1 + (rng.next_u64() % 8);
    const std::size_t grid = 2 + (i % 3 == 0 ? rng.next_u64() % 3 : 0);
    const JointDistributionModel model = random_joint_model(rng, n_lambda, grid);
    const JointChainCheck chain = check_joint_chain(model);
    worst = std::min({worst, chain.worst_margin, 2.0 - chain.b});
    worst_linearity = std::max(worst_linearity, chain.linearity_residual);
    if (!chain.ok) worst = std::min(worst, -1.0);
  }
  result.worst_margin = worst;
  result.pass = worst >= -kIneqTol && worst_linearity <= kIneqTol;
  result.detail = std::to_string(n_models) + " random models, worst slack " +
                  format_margin(worst) + ", linearity residual " +
                  format_margin(worst_linearity);
  return result;
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  const RngStream root = RngStream::from_seed(options.seed);
  std::vector<CheckResult> results;
  results.push_back(check_assignment_table(options.inject_table_fault));
  results.push_back(check_abs_sum_lemma(root.substream(1), options.lemma_samples));
  results.push_back(check_q_quantity(root.substream(2), options.lemma_samples));
  results.push_back(check_p16_ceiling(root.substream(3), options.p16_samples));
  results.push_back(check_factorizable_ceiling(root.substream(4), options.factorizable_models));
  results.push_back(check_joint_models(root.substream(5), options.joint_models));
  return results;
}

}  // namespace bellsim
