#pragma once

#include <cstdint>
#include <variant>

#include "bellsim/assignments.hpp"
#include "bellsim/hidden_variable.hpp"
#include "bellsim/quantum.hpp"
#include "bellsim/types.hpp"

namespace bellsim {

/// Apparatus-imperfection degradation of the ideal correlator:
/// xi = -V * cos(alpha - beta).
struct VisibilityModel {
  double v = 1.0;

  void validate() const;  // 0 <= v <= 1
};

Correlator visibility_correlator(const VisibilityModel& visibility, double alpha, double beta);

struct QuantumSource {
  QuantumState state = singlet_state();
};
struct P16Source {
  ProbabilityVector16 p;
};
struct FactorizableSource {
  HiddenVariableModel model;
};
struct JointSource {
  JointDistributionModel model;
};
struct VisibilitySource {
  VisibilityModel visibility;
};

using Source = std::variant<QuantumSource, P16Source, FactorizableSource, JointSource, VisibilitySource>;

const char* source_kind(const Source& source);

/// The exact joint outcome law a source induces at one setting pair.
/// For value sources (factorizable, joint) measured outcomes are the signs
/// of the possessed values.
OutcomePairDistribution exact_pair_distribution(const Source& source,
                                                const AngleSettings& settings, SettingPair pair);

struct TrialPlan {
  std::uint64_t n_per_pair = 0;
  AngleSettings settings;
  Source source;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Samples n_per_pair joint outcomes for each setting pair. Counts are
/// bit-identical for a given plan at any thread count: trials are split
/// into fixed-size chunks, chunk c of pair p draws from the
/// (seed, p, c) substream, and chunk counts merge by integer addition.
///
/// Per-trial rules: quantum, visibility and p16 sources draw directly from
/// their joint law; a factorizable source draws lambda from p(lambda) and
/// then each wing's outcome as +1 with probability (1 + effective)/2, which
/// reproduces the factorized correlator exactly; a joint source draws
/// lambda, then a value cell, and reports the signs of the values.
EventCounts sample_events(const TrialPlan& plan, unsigned n_threads = 1);

/// Correlators and CHSH value with finite-statistics errors:
/// SE(xi) = sqrt((1 - xi^2)/N) per pair, SE(B) the quadrature sum.
ChshReport estimate_chsh(const EventCounts& counts);

struct AspectComparison {
  double b_pred = 0.0;
  double b_est = 0.0;
  double b_est_se = 0.0;
  bool compatible = false;  // |b_est - b_pred| <= 3 * b_est_se
};

/// Closed-form visibility prediction against a simulated run at the
/// maximal-violation settings.
AspectComparison aspect_comparison(const VisibilityModel& visibility, std::uint64_t n_per_pair,
                                   std::uint64_t seed, unsigned n_threads = 1);

}  // namespace bellsim
