#include "bellsim/hidden_variable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bellsim/chsh.hpp"

namespace bellsim {

namespace {

constexpr double kAngleMatchTol = 1e-9;

double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

void require_weights(const std::vector<double>& weights, const char* what) {
  if (weights.empty()) {
    throw std::invalid_argument(std::string(what) + ": at least one lambda is required");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument(std::string(what) + ": weights must be non-negative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kIneqTol) {
    throw std::invalid_argument(std::string(what) + ": weights must sum to 1");
  }
}

void fill_exponential_simplex(RngStream& rng, std::vector<double>& out) {
  double sum = 0.0;
  for (double& v : out) {
    v = -std::log(rng.next_unit_open());
    sum += v;
  }
  for (double& v : out) v /= sum;
}

}  // namespace

void WingResponseTable::add(double angle, std::vector<double> value, std::vector<double> prob) {
  entries.push_back({wrap_two_pi(angle), std::move(value), std::move(prob)});
}

const WingResponseTable::Entry& WingResponseTable::at(double angle) const {
  const double wrapped = wrap_two_pi(angle);
  for (const Entry& e : entries) {
    if (std::abs(e.angle - wrapped) <= kAngleMatchTol) return e;
  }
  throw std::invalid_argument("analyzer angle " + std::to_string(angle) +
                              " is not tabulated in this model");
}

double HiddenVariableModel::value_a(double angle, std::size_t lambda) const {
  return wing_a.at(angle).value.at(lambda);
}

double HiddenVariableModel::value_b(double angle, std::size_t lambda) const {
  return wing_b.at(angle).value.at(lambda);
}

double HiddenVariableModel::prob_a(double angle, std::size_t lambda) const {
  return wing_a.at(angle).prob.at(lambda);
}

double HiddenVariableModel::prob_b(double angle, std::size_t lambda) const {
  return wing_b.at(angle).prob.at(lambda);
}

double HiddenVariableModel::effective_a(double angle, std::size_t lambda) const {
  const auto& e = wing_a.at(angle);
  return e.value.at(lambda) * e.prob.at(lambda);
}

double HiddenVariableModel::effective_b(double angle, std::size_t lambda) const {
  const auto& e = wing_b.at(angle);
  return e.value.at(lambda) * e.prob.at(lambda);
}

void HiddenVariableModel::validate() const {
  require_weights(weights, "hidden-variable model");
  if (!lambda_labels.empty() && lambda_labels.size() != weights.size()) {
    throw std::invalid_argument("hidden-variable model: label count must match weight count");
  }
  auto check_wing = [this](const WingResponseTable& wing, const char* name) {
    for (const auto& e : wing.entries) {
      if (e.value.size() != weights.size() || e.prob.size() != weights.size()) {
        throw std::invalid_argument(std::string("hidden-variable model: ") + name +
                                    " entries must list one value and one prob per lambda");
      }
      for (double v : e.value) {
        if (!std::isfinite(v) || std::abs(v) > 1.0 + kIneqTol) {
          throw std::invalid_argument("hidden-variable model: response values must lie in [-1, 1]");
        }
      }
      for (double q : e.prob) {
        if (!std::isfinite(q) || q < -kIneqTol || q > 1.0 + kIneqTol) {
          throw std::invalid_argument("hidden-variable model: response weights must lie in [0, 1]");
        }
      }
    }
  };
  check_wing(wing_a, "wing_a");
  check_wing(wing_b, "wing_b");
}

Correlator correlator_factorizable(const HiddenVariableModel& model, double alpha, double beta) {
  model.validate();
  const auto& ea = model.wing_a.at(alpha);
  const auto& eb = model.wing_b.at(beta);
  double sum = 0.0;
  for (std::size_t l = 0; l < model.n_lambda(); ++l) {
    sum += model.weights[l] * (ea.value[l] * ea.prob[l]) * (eb.value[l] * eb.prob[l]);
  }
  return Correlator{sum};
}

double chsh_factorizable(const HiddenVariableModel& model, const AngleSettings& settings) {
  settings.validate();
  auto xi = [&](SettingPair pair) {
    const auto [a, b] = pair_angles(settings, pair);
    return correlator_factorizable(model, a, b);
  };
  return chsh_combination(xi(SettingPair::ab), xi(SettingPair::ab_prime),
                          xi(SettingPair::a_prime_b), xi(SettingPair::a_prime_b_prime));
}

double JointValueTable::prob(std::size_t i, std::size_t j) const {
  return probs.at(i * b_values.size() + j);
}

void JointDistributionModel::validate() const {
  require_weights(weights, "joint model");
  if (!lambda_labels.empty() && lambda_labels.size() != weights.size()) {
    throw std::invalid_argument("joint model: label count must match weight count");
  }
  if (tables.size() != weights.size()) {
    throw std::invalid_argument("joint model: one value table per lambda is required");
  }
  for (const auto& t : tables) {
    if (t.a_values.empty() || t.b_values.empty()) {
      throw std::invalid_argument("joint model: value grids must be non-empty");
    }
    for (double v : t.a_values) {
      if (!std::isfinite(v) || std::abs(v) > 1.0 + kIneqTol) {
        throw std::invalid_argument("joint model: grid values must lie in [-1, 1]");
      }
    }
    for (double v : t.b_values) {
      if (!std::isfinite(v) || std::abs(v) > 1.0 + kIneqTol) {
        throw std::invalid_argument("joint model: grid values must lie in [-1, 1]");
      }
    }
    if (t.probs.size() != t.a_values.size() * t.b_values.size()) {
      throw std::invalid_argument("joint model: table size must match the value grid");
    }
    double sum = 0.0;
    for (double q : t.probs) {
      if (!std::isfinite(q) || q < -kIneqTol || q > 1.0 + kIneqTol) {
        throw std::invalid_argument("joint model: table entries must lie in [0, 1]");
      }
      sum += q;
    }
    if (std::abs(sum - 1.0) > kIneqTol) {
      throw std::invalid_argument("joint model: each table must sum to 1");
    }
  }
}

Correlator correlator_joint_model(const JointDistributionModel& model, SettingPair pair) {
  (void)pair;  // the law is setting-independent; the label mirrors the run interface
  model.validate();
  double sum = 0.0;
  for (std::size_t l = 0; l < model.n_lambda(); ++l) {
    const JointValueTable& t = model.tables[l];
    double inner = 0.0;
    for (std::size_t i = 0; i < t.a_values.size(); ++i) {
      for (std::size_t j = 0; j < t.b_values.size(); ++j) {
        inner += t.a_values[i] * t.b_values[j] * t.prob(i, j);
      }
    }
    sum += model.weights[l] * inner;
  }
  return Correlator{sum};
}

double chsh_joint_model(const JointDistributionModel& model) {
  auto xi = [&](SettingPair pair) { return correlator_joint_model(model, pair); };
  return chsh_combination(xi(SettingPair::ab), xi(SettingPair::ab_prime),
                          xi(SettingPair::a_prime_b), xi(SettingPair::a_prime_b_prime));
}

JointChainCheck check_joint_chain(const JointDistributionModel& model) {
  model.validate();

  // On the canonical coupling A' = A, B' = B the two combination terms are
  // X1 = AB - AB' and X2 = A'B + A'B'. Expectations run over lambda and the
  // per-lambda support.
  double e_x1 = 0.0, e_x2 = 0.0;
  double e_abs_x1 = 0.0, e_abs_x2 = 0.0;
  double e_combined = 0.0;
  double y_max = 0.0;
  for (std::size_t l = 0; l < model.n_lambda(); ++l) {
    const JointValueTable& t = model.tables[l];
    for (std::size_t i = 0; i < t.a_values.size(); ++i) {
      for (std::size_t j = 0; j < t.b_values.size(); ++j) {
        const double w = model.weights[l] * t.prob(i, j);
        const double ab = t.a_values[i] * t.b_values[j];
        const double x1 = ab - ab;
        const double x2 = ab + ab;
        e_x1 += w * x1;
        e_x2 += w * x2;
        e_abs_x1 += w * std::abs(x1);
        e_abs_x2 += w * std::abs(x2);
        e_combined += w * (std::abs(x1) + std::abs(x2));
        if (t.prob(i, j) > 0.0) {
          y_max = std::max(y_max, std::abs(x1) + std::abs(x2));
        }
      }
    }
  }

  JointChainCheck check;
  check.b = chsh_joint_model(model);
  check.expected_abs = e_combined;
  check.y_max = y_max;

  // Equality steps (linearity of expectation), then the inequality steps
  // |E(X)| <= E(|X|), E(Y) <= Y_max, Y_max <= 2.
  const double combination_of_means = std::abs(e_x1) + std::abs(e_x2);
  const double linearity_head = std::abs(check.b - combination_of_means);
  const double linearity_split = std::abs(e_combined - (e_abs_x1 + e_abs_x2));
  check.linearity_residual = std::max(linearity_head, linearity_split);

  const double jensen_margin = (e_abs_x1 + e_abs_x2) - combination_of_means;
  const double max_margin = y_max - e_combined;
  const double two_margin = 2.0 - y_max;
  check.worst_margin = std::min({jensen_margin, max_margin, two_margin});

  check.ok = check.linearity_residual <= kIneqTol && check.worst_margin >= -kIneqTol;
  return check;
}

OutcomePairDistribution quantum_mimic_joint(double pair_angle_difference) {
  if (!std::isfinite(pair_angle_difference)) {
    throw std::domain_error("angle difference must be finite");
  }
  const double c = std::cos(pair_angle_difference);
  OutcomePairDistribution dist{};
  for (int a : kOutcomes) {
    for (int b : kOutcomes) {
      dist.p[static_cast<std::size_t>(outcome_index(a))]
            [static_cast<std::size_t>(outcome_index(b))] =
          (1.0 - static_cast<double>(a * b) * c) / 4.0;
    }
  }
  return dist;
}

double chsh_quantum_mimic(const AngleSettings& settings) {
  settings.validate();
  auto xi = [&](SettingPair pair) {
    const auto [a, b] = pair_angles(settings, pair);
    return Correlator{quantum_mimic_joint(a - b).correlator()};
  };
  return chsh_combination(xi(SettingPair::ab), xi(SettingPair::ab_prime),
                          xi(SettingPair::a_prime_b), xi(SettingPair::a_prime_b_prime));
}

ProbabilityVector16 random_p16(RngStream& rng) {
  ProbabilityVector16 p{};
  std::vector<double> w(16);
  fill_exponential_simplex(rng, w);
  std::copy(w.begin(), w.end(), p.p.begin());
  return p;
}

AngleSettings random_settings(RngStream& rng) {
  return {rng.next_unit() * kTwoPi, rng.next_unit() * kTwoPi, rng.next_unit() * kTwoPi,
          rng.next_unit() * kTwoPi};
}

HiddenVariableModel random_factorizable_model(RngStream& rng, const AngleSettings& settings,
                                              std::size_t n_lambda) {
  if (n_lambda == 0) throw std::invalid_argument("n_lambda must be positive");
  HiddenVariableModel model;
  model.weights.resize(n_lambda);
  fill_exponential_simplex(rng, model.weights);

  auto random_entry = [&rng, n_lambda](WingResponseTable& wing, double angle) {
    std::vector<double> value(n_lambda), prob(n_lambda);
    for (std::size_t l = 0; l < n_lambda; ++l) {
      value[l] = rng.next_symmetric();
      prob[l] = rng.next_unit();
    }
    wing.add(angle, std::move(value), std::move(prob));
  };
  random_entry(model.wing_a, settings.alpha);
  random_entry(model.wing_a, settings.alpha_prime);
  random_entry(model.wing_b, settings.beta);
  random_entry(model.wing_b, settings.beta_prime);
  return model;
}

JointDistributionModel random_joint_model(RngStream& rng, std::size_t n_lambda,
                                          std::size_t grid_size) {
  if (n_lambda == 0) throw std::invalid_argument("n_lambda must be positive");
  if (grid_size == 0) throw std::invalid_argument("grid_size must be positive");
  JointDistributionModel model;
  model.weights.resize(n_lambda);
  fill_exponential_simplex(rng, model.weights);

  auto random_values = [&rng, grid_size] {
    if (grid_size == 2) return std::vector<double>{+1.0, -1.0};
    std::vector<double> v(grid_size);
    for (double& x : v) x = rng.next_symmetric();
    return v;
  };
  for (std::size_t l = 0; l < n_lambda; ++l) {
    JointValueTable t;
    t.a_values = random_values();
    t.b_values = random_values();
    t.probs.resize(grid_size * grid_size);
    fill_exponential_simplex(rng, t.probs);
    model.tables.push_back(std::move(t));
  }
  return model;
}

}  // namespace bellsim
