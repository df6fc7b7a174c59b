#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace bellsim {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Absolute tolerance for closed-form inequality and consistency checks.
/// Everything here is short finite arithmetic, so no looser budget is needed.
inline constexpr double kIneqTol = 1e-12;

/// Dichotomic outcomes are the integers +1 / -1, never booleans, so that
/// products of outcomes are literal arithmetic.
inline constexpr std::array<int, 2> kOutcomes{+1, -1};

/// Array index of an outcome: +1 -> 0, -1 -> 1. Throws on anything else.
int outcome_index(int outcome);

/// The four analyzer angles alpha, alpha', beta, beta', in radians.
struct AngleSettings {
  double alpha = 0.0;
  double alpha_prime = 0.0;
  double beta = 0.0;
  double beta_prime = 0.0;

  /// Same settings with every angle wrapped into [0, 2pi). Correlators
  /// depend on the angles only through cosines of differences, so wrapping
  /// changes nothing observable.
  AngleSettings canonical() const;

  void validate() const;  // throws std::domain_error on non-finite angles

  friend bool operator==(const AngleSettings&, const AngleSettings&) = default;
};

/// The settings realizing the maximal quantum violation: alpha = 0,
/// alpha' = pi/2, beta = pi/4, beta' = 3pi/4. The odd pair (alpha, beta')
/// differs by 3pi/4; the other three pairs differ by pi/4.
AngleSettings max_violation_settings();

/// The four (first wing, second wing) setting combinations of a CHSH run.
enum class SettingPair : int {
  ab = 0,
  ab_prime = 1,
  a_prime_b = 2,
  a_prime_b_prime = 3,
};

inline constexpr std::array<SettingPair, 4> kSettingPairs{
    SettingPair::ab, SettingPair::ab_prime, SettingPair::a_prime_b,
    SettingPair::a_prime_b_prime};

const char* to_label(SettingPair pair);  // "ab", "ab'", "a'b", "a'b'"

/// The analyzer angles selected by a setting pair.
std::pair<double, double> pair_angles(const AngleSettings& settings, SettingPair pair);

/// Expectation of the product of the two wings' +-1 outcomes for one pair
/// of settings; always in [-1, 1].
struct Correlator {
  double value = 0.0;

  friend bool operator==(const Correlator&, const Correlator&) = default;
};

/// Joint outcome counts N(a, b) for one setting pair.
struct PairCounts {
  std::array<std::array<std::uint64_t, 2>, 2> n{};  // [outcome_index(a)][outcome_index(b)]

  std::uint64_t& at(int a, int b);
  const std::uint64_t& at(int a, int b) const;
  std::uint64_t total() const;

  friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

/// Joint outcome counts for all four setting pairs.
struct EventCounts {
  std::array<PairCounts, 4> pairs{};

  PairCounts& operator[](SettingPair pair);
  const PairCounts& operator[](SettingPair pair) const;

  friend bool operator==(const EventCounts&, const EventCounts&) = default;
};

/// Estimated correlators with standard errors. The CHSH value is always
/// recomputed from the four correlators, so the fields cannot drift apart.
struct ChshReport {
  std::array<Correlator, 4> xi{};  // indexed by SettingPair
  std::array<double, 4> se{};

  double b() const;
  double b_se() const;  // quadrature sum of the four correlator errors
};

/// Probability table over joint outcomes (a, b) in {+1, -1}^2.
struct OutcomePairDistribution {
  std::array<std::array<double, 2>, 2> p{};  // [outcome_index(a)][outcome_index(b)]

  double prob(int a, int b) const;
  double correlator() const;                  // sum of a*b*P(a,b)
  std::array<double, 2> marginal_first() const;   // P(a=+1), P(a=-1)
  std::array<double, 2> marginal_second() const;  // P(b=+1), P(b=-1)
  void validate() const;  // entries >= 0 and total 1, within kIneqTol
};

}  // namespace bellsim
