#include "bellsim/assignments.hpp"

#include <cmath>
#include <stdexcept>

#include "bellsim/chsh.hpp"

namespace bellsim {

std::array<int, 4> OutcomeAssignment::products() const {
  return {a * b, a * b_prime, a_prime * b, a_prime * b_prime};
}

std::pair<int, int> OutcomeAssignment::pair_outcomes(SettingPair pair) const {
  switch (pair) {
    case SettingPair::ab: return {a, b};
    case SettingPair::ab_prime: return {a, b_prime};
    case SettingPair::a_prime_b: return {a_prime, b};
    case SettingPair::a_prime_b_prime: return {a_prime, b_prime};
  }
  throw std::logic_error("invalid setting pair");
}

const std::array<OutcomeAssignment, 16>& enumerate_assignments() {
  // Row i encodes the sign pattern of (i-1) in binary, a major through
  // b' minor, + for 0: row 1 = (+,+,+,+) ... row 16 = (-,-,-,-).
  static const std::array<OutcomeAssignment, 16> table = [] {
    std::array<OutcomeAssignment, 16> t{};
    for (int i = 0; i < 16; ++i) {
      OutcomeAssignment& r = t[static_cast<std::size_t>(i)];
      r.row_index = i + 1;
      r.a = (i & 8) ? -1 : +1;
      r.b = (i & 4) ? -1 : +1;
      r.a_prime = (i & 2) ? -1 : +1;
      r.b_prime = (i & 1) ? -1 : +1;
    }
    return t;
  }();
  return table;
}

void ProbabilityVector16::validate() const {
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < -kIneqTol || v > 1.0 + kIneqTol) {
      throw std::invalid_argument("p16 entries must lie in [0, 1]");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kIneqTol) {
    throw std::invalid_argument("p16 entries must sum to 1");
  }
}

ProbabilityVector16 point_mass16(int row_index) {
  if (row_index < 1 || row_index > 16) {
    throw std::invalid_argument("row index must be in 1..16");
  }
  ProbabilityVector16 p{};
  p.p[static_cast<std::size_t>(row_index - 1)] = 1.0;
  return p;
}

ProbabilityVector16 uniform16() {
  ProbabilityVector16 p{};
  p.p.fill(1.0 / 16.0);
  return p;
}

std::array<Correlator, 4> correlators_from_p16(const ProbabilityVector16& p) {
  p.validate();
  const auto& rows = enumerate_assignments();
  std::array<Correlator, 4> xi{};
  for (std::size_t k = 0; k < 4; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
      sum += static_cast<double>(rows[i].products()[k]) * p.p[i];
    }
    xi[k] = Correlator{sum};
  }
  return xi;
}

double chsh_of_p16(const ProbabilityVector16& p) {
  const auto xi = correlators_from_p16(p);
  return chsh_combination(xi[0], xi[1], xi[2], xi[3]);
}

}  // namespace bellsim
