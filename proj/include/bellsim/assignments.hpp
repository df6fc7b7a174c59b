#pragma once

#include <array>
#include <utility>

#include "bellsim/types.hpp"

namespace bellsim {

/// One deterministic assignment of the four outcomes (a, b, a', b').
struct OutcomeAssignment {
  int row_index = 1;  // 1..16
  int a = +1;
  int b = +1;
  int a_prime = +1;
  int b_prime = +1;

  /// Products (ab, ab', a'b, a'b'), indexed by SettingPair.
  std::array<int, 4> products() const;

  /// The two outcomes read off when the given setting pair is measured.
  std::pair<int, int> pair_outcomes(SettingPair pair) const;

  friend bool operator==(const OutcomeAssignment&, const OutcomeAssignment&) = default;
};

/// All 16 assignments in the fixed row order: row 1 = (+,+,+,+) counting
/// down to row 16 = (-,-,-,-), column order (a, b, a', b').
const std::array<OutcomeAssignment, 16>& enumerate_assignments();

/// A probability distribution over the 16 deterministic assignments.
struct ProbabilityVector16 {
  std::array<double, 16> p{};

  void validate() const;  // entries in [0, 1], sum within kIneqTol of 1
};

ProbabilityVector16 point_mass16(int row_index);
ProbabilityVector16 uniform16();

/// xi(pair) = sum_i product_i(pair) * p_i, for each of the four pairs.
std::array<Correlator, 4> correlators_from_p16(const ProbabilityVector16& p);

/// CHSH combination of correlators_from_p16(p); <= 2 for every valid p.
double chsh_of_p16(const ProbabilityVector16& p);

}  // namespace bellsim
