#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bellsim/assignments.hpp"
#include "bellsim/rng.hpp"
#include "bellsim/types.hpp"

namespace bellsim {

/// Per-wing response table: for each tabulated analyzer angle, one possessed
/// value in [-1, 1] and one response weight in [0, 1] per lambda.
struct WingResponseTable {
  struct Entry {
    double angle = 0.0;          // radians, stored wrapped into [0, 2pi)
    std::vector<double> value;   // per lambda
    std::vector<double> prob;    // per lambda
  };

  std::vector<Entry> entries;

  void add(double angle, std::vector<double> value, std::vector<double> prob);
  /// Entry whose angle matches within 1e-9 after wrapping; throws
  /// std::invalid_argument when the angle is not tabulated.
  const Entry& at(double angle) const;
};

/// Finite-lambda stochastic response model obeying factorizability: each
/// wing's response depends on its own angle and lambda only.
struct HiddenVariableModel {
  std::vector<std::string> lambda_labels;  // optional; sized n_lambda when present
  std::vector<double> weights;             // p(lambda), non-negative, sums to 1
  WingResponseTable wing_a;
  WingResponseTable wing_b;

  std::size_t n_lambda() const { return weights.size(); }

  double value_a(double angle, std::size_t lambda) const;
  double value_b(double angle, std::size_t lambda) const;
  double prob_a(double angle, std::size_t lambda) const;
  double prob_b(double angle, std::size_t lambda) const;

  /// Effective one-wing response, value * weight; magnitude <= 1.
  double effective_a(double angle, std::size_t lambda) const;
  double effective_b(double angle, std::size_t lambda) const;

  void validate() const;
};

/// xi(alpha, beta) = sum_lambda p(lambda) * A~(alpha, lambda) * B~(beta, lambda),
/// the factorized one-term-per-lambda sum.
Correlator correlator_factorizable(const HiddenVariableModel& model, double alpha, double beta);

double chsh_factorizable(const HiddenVariableModel& model, const AngleSettings& settings);

/// Joint distribution of the two possessed values over a finite grid.
struct JointValueTable {
  std::vector<double> a_values;  // grid in [-1, 1]
  std::vector<double> b_values;
  std::vector<double> probs;     // row-major |a_values| x |b_values|, sums to 1

  double prob(std::size_t i, std::size_t j) const;
};

/// Setting-independent joint model: one value distribution per lambda, used
/// unchanged for all four setting pairs.
struct JointDistributionModel {
  std::vector<std::string> lambda_labels;
  std::vector<double> weights;
  std::vector<JointValueTable> tables;  // one per lambda

  std::size_t n_lambda() const { return weights.size(); }
  void validate() const;
};

/// xi = sum_lambda p(lambda) sum_{A,B} A * B * P(A, B | lambda). The pair
/// label only mirrors the experimental interface; the result is the same
/// for all four labels by construction.
Correlator correlator_joint_model(const JointDistributionModel& model, SettingPair pair);

/// CHSH combination over the four (identical) pair correlators.
double chsh_joint_model(const JointDistributionModel& model);

/// Stepwise audit of the expectation-value chain bounding B for a
/// setting-independent joint model, evaluated on the canonical coupling
/// where both primed variables coincide with the unprimed ones (the unique
/// coupling with all four pair marginals equal to the model's table).
struct JointChainCheck {
  double b = 0.0;             // |E(AB) - E(AB')| + |E(A'B) + E(A'B')|
  double expected_abs = 0.0;  // E(|AB - AB'| + |A'B + A'B'|)
  double y_max = 0.0;         // max of the same quantity over the support
  double linearity_residual = 0.0;  // worst |difference| across the equality steps
  double worst_margin = 0.0;        // min slack across the inequality steps
  bool ok = false;
};

JointChainCheck check_joint_chain(const JointDistributionModel& model);

/// P(a, b) = (1 - a*b*cos(delta)) / 4: uniform marginals, correlator
/// -cos(delta). Reproduces the singlet statistics for one setting pair with
/// no factorizable decomposition behind it.
OutcomePairDistribution quantum_mimic_joint(double pair_angle_difference);

/// CHSH value of the mimic law at the given settings.
double chsh_quantum_mimic(const AngleSettings& settings);

// Seeded random families for property sweeps. Simplex weights come from
// normalized exponential draws; response values are independent uniforms
// in [-1, 1]; response weights are uniforms in [0, 1].
ProbabilityVector16 random_p16(RngStream& rng);
AngleSettings random_settings(RngStream& rng);
/// Tabulated at the four setting angles.
HiddenVariableModel random_factorizable_model(RngStream& rng, const AngleSettings& settings,
                                              std::size_t n_lambda);
/// grid_size = 2 gives the dichotomic {+1, -1} grid; larger grids draw
/// their values uniformly from [-1, 1].
JointDistributionModel random_joint_model(RngStream& rng, std::size_t n_lambda,
                                          std::size_t grid_size = 2);

}  // namespace bellsim
