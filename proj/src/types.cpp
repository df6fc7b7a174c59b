#include "bellsim/types.hpp"

#include <cmath>
#include <stdexcept>

#include "bellsim/chsh.hpp"

namespace bellsim {

int outcome_index(int outcome) {
  if (outcome == +1) return 0;
  if (outcome == -1) return 1;
  throw std::domain_error("outcome must be +1 or -1");
}

namespace {

double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

}  // namespace

AngleSettings AngleSettings::canonical() const {
  validate();
  return {wrap_two_pi(alpha), wrap_two_pi(alpha_prime), wrap_two_pi(beta),
          wrap_two_pi(beta_prime)};
}

void AngleSettings::validate() const {
  for (double v : {alpha, alpha_prime, beta, beta_prime}) {
    if (!std::isfinite(v)) throw std::domain_error("analyzer angles must be finite");
  }
}

AngleSettings max_violation_settings() {
  constexpr double pi = kTwoPi / 2.0;
  return {0.0, pi / 2.0, pi / 4.0, 3.0 * pi / 4.0};
}

const char* to_label(SettingPair pair) {
  switch (pair) {
    case SettingPair::ab: return "ab";
    case SettingPair::ab_prime: return "ab'";
    case SettingPair::a_prime_b: return "a'b";
    case SettingPair::a_prime_b_prime: return "a'b'";
  }
  throw std::logic_error("invalid setting pair");
}

std::pair<double, double> pair_angles(const AngleSettings& settings, SettingPair pair) {
  switch (pair) {
    case SettingPair::ab: return {settings.alpha, settings.beta};
    case SettingPair::ab_prime: return {settings.alpha, settings.beta_prime};
    case SettingPair::a_prime_b: return {settings.alpha_prime, settings.beta};
    case SettingPair::a_prime_b_prime: return {settings.alpha_prime, settings.beta_prime};
  }
  throw std::logic_error("invalid setting pair");
}

std::uint64_t& PairCounts::at(int a, int b) {
  return n[static_cast<std::size_t>(outcome_index(a))][static_cast<std::size_t>(outcome_index(b))];
}

const std::uint64_t& PairCounts::at(int a, int b) const {
  return n[static_cast<std::size_t>(outcome_index(a))][static_cast<std::size_t>(outcome_index(b))];
}

std::uint64_t PairCounts::total() const {
  return n[0][0] + n[0][1] + n[1][0] + n[1][1];
}

PairCounts& EventCounts::operator[](SettingPair pair) {
  return pairs[static_cast<std::size_t>(pair)];
}

const PairCounts& EventCounts::operator[](SettingPair pair) const {
  return pairs[static_cast<std::size_t>(pair)];
}

double ChshReport::b() const { return chsh_combination(xi[0], xi[1], xi[2], xi[3]); }

double ChshReport::b_se() const {
  double sum = 0.0;
  for (double s : se) sum += s * s;
  return std::sqrt(sum);
}

double OutcomePairDistribution::prob(int a, int b) const {
  return p[static_cast<std::size_t>(outcome_index(a))][static_cast<std::size_t>(outcome_index(b))];
}

double OutcomePairDistribution::correlator() const {
  double sum = 0.0;
  for (int a : kOutcomes) {
    for (int b : kOutcomes) sum += static_cast<double>(a * b) * prob(a, b);
  }
  return sum;
}

std::array<double, 2> OutcomePairDistribution::marginal_first() const {
  return {p[0][0] + p[0][1], p[1][0] + p[1][1]};
}

std::array<double, 2> OutcomePairDistribution::marginal_second() const {
  return {p[0][0] + p[1][0], p[0][1] + p[1][1]};
}

void OutcomePairDistribution::validate() const {
  double sum = 0.0;
  for (const auto& row : p) {
    for (double v : row) {
      if (!std::isfinite(v) || v < -kIneqTol || v > 1.0 + kIneqTol) {
        throw std::invalid_argument("outcome probability outside [0, 1]");
      }
      sum += v;
    }
  }
  if (std::abs(sum - 1.0) > kIneqTol) {
    throw std::invalid_argument("outcome probabilities must sum to 1");
  }
}

}  // namespace bellsim
