#pragma once

#include "bellsim/types.hpp"

namespace bellsim {

/// Throws std::domain_error unless v is finite and |v| <= 1 + kIneqTol.
void require_correlator(double v, const char* what);

/// xi = (N(+,+) + N(-,-) - N(+,-) - N(-,+)) / N_tot. The sums are exact
/// integer arithmetic; only the final division rounds.
Correlator correlator_from_counts(const PairCounts& counts);
Correlator correlator_from_counts(const EventCounts& counts, SettingPair pair);

/// B = |xi(a,b) - xi(a,b')| + |xi(a',b) + xi(a',b')|, in [0, 4].
double chsh_combination(Correlator xi_ab, Correlator xi_ab_prime,
                        Correlator xi_a_prime_b, Correlator xi_a_prime_b_prime);

struct OriginalBellCheck {
  double lhs = 0.0;  // |xi(a,b) - xi(a,c)|
  double rhs = 0.0;  // 1 + xi(c,b)
  bool satisfied = false;
};

/// The three-setting inequality obtained from the CHSH combination at
/// a' = b' = c: |xi(a,b) - xi(a,c)| <= 1 + xi(c,b).
OriginalBellCheck original_bell_check(Correlator xi_ab, Correlator xi_ac, Correlator xi_cb);

struct AbsSumBound {
  bool holds_plus = false;   // |y + y'| <= 1 + y*y'
  bool holds_minus = false;  // |y - y'| <= 1 - y*y'
};

/// Checks |y +- y'| <= 1 +- y*y' for |y| <= 1, |y'| <= 1. Both hold for
/// every admissible input; inputs outside the hypothesis are domain errors.
AbsSumBound lemma_abs_sum_bound(double y, double y_prime);

/// Q = |x*y - x*y'| + |x'*y + x'*y'| for four reals in [-1, 1]; Q <= 2.
double q_quantity(double x, double x_prime, double y, double y_prime);

}  // namespace bellsim
