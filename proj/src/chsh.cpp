#include "bellsim/chsh.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bellsim {

void require_correlator(double v, const char* what) {
  if (!std::isfinite(v) || std::abs(v) > 1.0 + kIneqTol) {
    throw std::domain_error(std::string(what) + " must lie in [-1, 1], got " +
                            std::to_string(v));
  }
}

Correlator correlator_from_counts(const PairCounts& counts) {
  const std::uint64_t total = counts.total();
  if (total == 0) {
    throw std::invalid_argument("empty counts: no trials recorded for this setting pair");
  }
  const std::int64_t same =
      static_cast<std::int64_t>(counts.at(+1, +1)) + static_cast<std::int64_t>(counts.at(-1, -1));
  const std::int64_t diff =
      static_cast<std::int64_t>(counts.at(+1, -1)) + static_cast<std::int64_t>(counts.at(-1, +1));
  return Correlator{static_cast<double>(same - diff) / static_cast<double>(total)};
}

Correlator correlator_from_counts(const EventCounts& counts, SettingPair pair) {
  return correlator_from_counts(counts[pair]);
}

double chsh_combination(Correlator xi_ab, Correlator xi_ab_prime, Correlator xi_a_prime_b,
                        Correlator xi_a_prime_b_prime) {
  require_correlator(xi_ab.value, "xi(a,b)");
  require_correlator(xi_ab_prime.value, "xi(a,b')");
  require_correlator(xi_a_prime_b.value, "xi(a',b)");
  require_correlator(xi_a_prime_b_prime.value, "xi(a',b')");
  return std::abs(xi_ab.value - xi_ab_prime.value) +
         std::abs(xi_a_prime_b.value + xi_a_prime_b_prime.value);
}

OriginalBellCheck original_bell_check(Correlator xi_ab, Correlator xi_ac, Correlator xi_cb) {
  require_correlator(xi_ab.value, "xi(a,b)");
  require_correlator(xi_ac.value, "xi(a,c)");
  require_correlator(xi_cb.value, "xi(c,b)");
  OriginalBellCheck result;
  result.lhs = std::abs(xi_ab.value - xi_ac.value);
  result.rhs = 1.0 + xi_cb.value;
  result.satisfied = result.lhs <= result.rhs + kIneqTol;
  return result;
}

AbsSumBound lemma_abs_sum_bound(double y, double y_prime) {
  require_correlator(y, "y");
  require_correlator(y_prime, "y'");
  const double prod = y * y_prime;
  return {std::abs(y + y_prime) <= 1.0 + prod + kIneqTol,
          std::abs(y - y_prime) <= 1.0 - prod + kIneqTol};
}

double q_quantity(double x, double x_prime, double y, double y_prime) {
  require_correlator(x, "x");
  require_correlator(x_prime, "x'");
  require_correlator(y, "y");
  require_correlator(y_prime, "y'");
  return std::abs(x * y - x * y_prime) + std::abs(x_prime * y + x_prime * y_prime);
}

}  // namespace bellsim
