#include "bellsim/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bellsim/chsh.hpp"

namespace bellsim {

void VisibilityModel::validate() const {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw std::invalid_argument("visibility must lie in [0, 1]");
  }
}

Correlator visibility_correlator(const VisibilityModel& visibility, double alpha, double beta) {
  visibility.validate();
  return Correlator{-visibility.v * std::cos(alpha - beta)};
}

const char* source_kind(const Source& source) {
  struct Visitor {
    const char* operator()(const QuantumSource&) const { return "quantum"; }
    const char* operator()(const P16Source&) const { return "p16"; }
    const char* operator()(const FactorizableSource&) const { return "factorizable"; }
    const char* operator()(const JointSource&) const { return "joint"; }
    const char* operator()(const VisibilitySource&) const { return "visibility"; }
  };
  return std::visit(Visitor{}, source);
}

namespace {

constexpr std::uint64_t kChunkTrials = 1u << 16;
// Fixed counter stride per trial; every source consumes at most this many draws.
constexpr std::uint64_t kDrawsPerTrial = 4;

int sign_outcome(double v) { return v >= 0.0 ? +1 : -1; }

// Inverse-CDF pick. Zero-probability cells occupy empty half-open intervals
// and are never selected, including at the distribution's tail.
struct Categorical {
  std::vector<double> cdf;
  std::size_t last_nonzero = 0;

  explicit Categorical(const std::vector<double>& probs) {
    cdf.resize(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      cdf[i] = acc;
      if (probs[i] > 0.0) last_nonzero = i;
    }
  }

  std::size_t pick(double u) const {
    for (std::size_t i = 0; i < cdf.size(); ++i) {
      if (u < cdf[i]) return i;
    }
    return last_nonzero;
  }
};

// Prepared per (source, setting pair) samplers; each maps trial draws to a
// joint outcome.
struct PreparedOutcomeLaw {
  Categorical law;
  std::array<std::pair<int, int>, 4> outcomes;
};

struct PreparedP16 {
  Categorical rows;
  std::array<std::pair<int, int>, 16> outcomes;
};

struct PreparedFactorizable {
  Categorical lambda;
  std::vector<double> prob_a_plus;  // (1 + effective_a)/2 per lambda
  std::vector<double> prob_b_plus;
};

struct PreparedJoint {
  Categorical lambda;
  std::vector<Categorical> cells;                          // per lambda
  std::vector<std::vector<std::pair<int, int>>> signs;     // per lambda, per cell
};

using PreparedPair =
    std::variant<PreparedOutcomeLaw, PreparedP16, PreparedFactorizable, PreparedJoint>;

PreparedOutcomeLaw prepare_outcome_law(const OutcomePairDistribution& dist) {
  std::vector<double> probs;
  std::array<std::pair<int, int>, 4> outcomes{};
  std::size_t k = 0;
  for (int a : kOutcomes) {
    for (int b : kOutcomes) {
      probs.push_back(dist.prob(a, b));
      outcomes[k++] = {a, b};
    }
  }
  return {Categorical{probs}, outcomes};
}

PreparedPair prepare_pair(const Source& source, const AngleSettings& settings, SettingPair pair) {
  const auto [angle_a, angle_b] = pair_angles(settings, pair);

  struct Visitor {
    double angle_a, angle_b;
    SettingPair pair;

    PreparedPair operator()(const QuantumSource& s) const {
      return prepare_outcome_law(joint_outcome_distribution(s.state, angle_a, angle_b));
    }
    PreparedPair operator()(const VisibilitySource& s) const {
      s.visibility.validate();
      OutcomePairDistribution dist{};
      const double c = std::cos(angle_a - angle_b);
      for (int a : kOutcomes) {
        for (int b : kOutcomes) {
          dist.p[static_cast<std::size_t>(outcome_index(a))]
                [static_cast<std::size_t>(outcome_index(b))] =
              (1.0 - s.visibility.v * static_cast<double>(a * b) * c) / 4.0;
        }
      }
      return prepare_outcome_law(dist);
    }
    PreparedPair operator()(const P16Source& s) const {
      s.p.validate();
      PreparedP16 prepared{Categorical{{s.p.p.begin(), s.p.p.end()}}, {}};
      const auto& rows = enumerate_assignments();
      for (std::size_t i = 0; i < 16; ++i) {
        prepared.outcomes[i] = rows[i].pair_outcomes(pair);
      }
      return prepared;
    }
    PreparedPair operator()(const FactorizableSource& s) const {
      s.model.validate();
      const auto& ea = s.model.wing_a.at(angle_a);
      const auto& eb = s.model.wing_b.at(angle_b);
      PreparedFactorizable prepared{Categorical{s.model.weights}, {}, {}};
      for (std::size_t l = 0; l < s.model.n_lambda(); ++l) {
        prepared.prob_a_plus.push_back((1.0 + ea.value[l] * ea.prob[l]) / 2.0);
        prepared.prob_b_plus.push_back((1.0 + eb.value[l] * eb.prob[l]) / 2.0);
      }
      return prepared;
    }
    PreparedPair operator()(const JointSource& s) const {
      s.model.validate();
      PreparedJoint prepared{Categorical{s.model.weights}, {}, {}};
      for (const JointValueTable& t : s.model.tables) {
        std::vector<double> probs;
        std::vector<std::pair<int, int>> signs;
        for (std::size_t i = 0; i < t.a_values.size(); ++i) {
          for (std::size_t j = 0; j < t.b_values.size(); ++j) {
            probs.push_back(t.prob(i, j));
            signs.emplace_back(sign_outcome(t.a_values[i]), sign_outcome(t.b_values[j]));
          }
        }
        prepared.cells.emplace_back(probs);
        prepared.signs.push_back(std::move(signs));
      }
      return prepared;
    }
  };

  return std::visit(Visitor{angle_a, angle_b, pair}, source);
}

void sample_chunk(const PreparedPair& prepared, const RngStream& stream, std::uint64_t n_trials,
                  PairCounts& out) {
  struct Visitor {
    const RngStream& stream;
    std::uint64_t n_trials;
    PairCounts& out;

    void operator()(const PreparedOutcomeLaw& p) const {
      for (std::uint64_t t = 0; t < n_trials; ++t) {
        const auto [a, b] = p.outcomes[p.law.pick(stream.unit_at(t * kDrawsPerTrial))];
        ++out.at(a, b);
      }
    }
    void operator()(const PreparedP16& p) const {
      for (std::uint64_t t = 0; t < n_trials; ++t) {
        const auto [a, b] = p.outcomes[p.rows.pick(stream.unit_at(t * kDrawsPerTrial))];
        ++out.at(a, b);
      }
    }
    void operator()(const PreparedFactorizable& p) const {
      for (std::uint64_t t = 0; t < n_trials; ++t) {
        const std::size_t l = p.lambda.pick(stream.unit_at(t * kDrawsPerTrial));
        const int a = stream.unit_at(t * kDrawsPerTrial + 1) < p.prob_a_plus[l] ? +1 : -1;
        const int b = stream.unit_at(t * kDrawsPerTrial + 2) < p.prob_b_plus[l] ? +1 : -1;
        ++out.at(a, b);
      }
    }
    void operator()(const PreparedJoint& p) const {
      for (std::uint64_t t = 0; t < n_trials; ++t) {
        const std::size_t l = p.lambda.pick(stream.unit_at(t * kDrawsPerTrial));
        const std::size_t cell = p.cells[l].pick(stream.unit_at(t * kDrawsPerTrial + 1));
        const auto [a, b] = p.signs[l][cell];
        ++out.at(a, b);
      }
    }
  };
  std::visit(Visitor{stream, n_trials, out}, prepared);
}

}  // namespace

void TrialPlan::validate() const {
  if (n_per_pair == 0) throw std::invalid_argument("n_per_pair must be at least 1");
  settings.validate();
  // Prepare each pair once to surface source validation errors eagerly.
  for (SettingPair pair : kSettingPairs) (void)prepare_pair(source, settings, pair);
}

EventCounts sample_events(const TrialPlan& plan, unsigned n_threads) {
  if (plan.n_per_pair == 0) throw std::invalid_argument("n_per_pair must be at least 1");
  plan.settings.validate();

  std::array<PreparedPair, 4> prepared{
      prepare_pair(plan.source, plan.settings, SettingPair::ab),
      prepare_pair(plan.source, plan.settings, SettingPair::ab_prime),
      prepare_pair(plan.source, plan.settings, SettingPair::a_prime_b),
      prepare_pair(plan.source, plan.settings, SettingPair::a_prime_b_prime),
  };

  const RngStream root = RngStream::from_seed(plan.seed);
  const std::uint64_t chunks_per_pair = (plan.n_per_pair + kChunkTrials - 1) / kChunkTrials;
  const std::uint64_t n_tasks = 4 * chunks_per_pair;

  const unsigned hw = std::max(1u, n_threads);
  const unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(hw, std::max<std::uint64_t>(1, n_tasks)));

  std::vector<EventCounts> partial(workers);
  std::atomic<std::uint64_t> next_task{0};

  auto work = [&](unsigned worker_index) {
    EventCounts& local = partial[worker_index];
    for (;;) {
      const std::uint64_t task = next_task.fetch_add(1, std::memory_order_relaxed);
      if (task >= n_tasks) break;
      const std::size_t pair_index = static_cast<std::size_t>(task / chunks_per_pair);
      const std::uint64_t chunk = task % chunks_per_pair;
      const std::uint64_t first_trial = chunk * kChunkTrials;
      const std::uint64_t n_trials = std::min(kChunkTrials, plan.n_per_pair - first_trial);
      const RngStream stream = root.substream(pair_index).substream(chunk);
      sample_chunk(prepared[pair_index], stream, n_trials,
                   local[kSettingPairs[pair_index]]);
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }

  // Integer merge; commutative, so the worker schedule cannot matter.
  EventCounts counts{};
  for (const EventCounts& part : partial) {
    for (std::size_t k = 0; k < 4; ++k) {
      for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
          counts.pairs[k].n[i][j] += part.pairs[k].n[i][j];
        }
      }
    }
  }
  return counts;
}

ChshReport estimate_chsh(const EventCounts& counts) {
  ChshReport report;
  for (std::size_t k = 0; k < 4; ++k) {
    const PairCounts& pc = counts.pairs[k];
    if (pc.total() == 0) {
      throw std::invalid_argument(std::string("empty counts for setting pair ") +
                                  to_label(kSettingPairs[k]));
    }
    const Correlator xi = correlator_from_counts(pc);
    report.xi[k] = xi;
    report.se[k] = std::sqrt(std::max(0.0, 1.0 - xi.value * xi.value) /
                             static_cast<double>(pc.total()));
  }
  return report;
}

OutcomePairDistribution exact_pair_distribution(const Source& source,
                                                const AngleSettings& settings, SettingPair pair) {
  const auto [angle_a, angle_b] = pair_angles(settings, pair);

  struct Visitor {
    double angle_a, angle_b;
    SettingPair pair;

    OutcomePairDistribution operator()(const QuantumSource& s) const {
      return joint_outcome_distribution(s.state, angle_a, angle_b);
    }
    OutcomePairDistribution operator()(const VisibilitySource& s) const {
      s.visibility.validate();
      OutcomePairDistribution dist{};
      const double c = std::cos(angle_a - angle_b);
      for (int a : kOutcomes) {
        for (int b : kOutcomes) {
          dist.p[static_cast<std::size_t>(outcome_index(a))]
                [static_cast<std::size_t>(outcome_index(b))] =
              (1.0 - s.visibility.v * static_cast<double>(a * b) * c) / 4.0;
        }
      }
      return dist;
    }
    OutcomePairDistribution operator()(const P16Source& s) const {
      s.p.validate();
      OutcomePairDistribution dist{};
      const auto& rows = enumerate_assignments();
      for (std::size_t i = 0; i < 16; ++i) {
        const auto [a, b] = rows[i].pair_outcomes(pair);
        dist.p[static_cast<std::size_t>(outcome_index(a))]
              [static_cast<std::size_t>(outcome_index(b))] += s.p.p[i];
      }
      return dist;
    }
    OutcomePairDistribution operator()(const FactorizableSource& s) const {
      s.model.validate();
      const auto& ea = s.model.wing_a.at(angle_a);
      const auto& eb = s.model.wing_b.at(angle_b);
      OutcomePairDistribution dist{};
      for (std::size_t l = 0; l < s.model.n_lambda(); ++l) {
        const double pa = (1.0 + ea.value[l] * ea.prob[l]) / 2.0;
        const double pb = (1.0 + eb.value[l] * eb.prob[l]) / 2.0;
        const double w = s.model.weights[l];
        dist.p[0][0] += w * pa * pb;
        dist.p[0][1] += w * pa * (1.0 - pb);
        dist.p[1][0] += w * (1.0 - pa) * pb;
        dist.p[1][1] += w * (1.0 - pa) * (1.0 - pb);
      }
      return dist;
    }
    OutcomePairDistribution operator()(const JointSource& s) const {
      s.model.validate();
      OutcomePairDistribution dist{};
      for (std::size_t l = 0; l < s.model.n_lambda(); ++l) {
        const JointValueTable& t = s.model.tables[l];
        for (std::size_t i = 0; i < t.a_values.size(); ++i) {
          for (std::size_t j = 0; j < t.b_values.size(); ++j) {
            const int a = sign_outcome(t.a_values[i]);
            const int b = sign_outcome(t.b_values[j]);
            dist.p[static_cast<std::size_t>(outcome_index(a))]
                  [static_cast<std::size_t>(outcome_index(b))] +=
                s.model.weights[l] * t.prob(i, j);
          }
        }
      }
      return dist;
    }
  };

  return std::visit(Visitor{angle_a, angle_b, pair}, source);
}

AspectComparison aspect_comparison(const VisibilityModel& visibility, std::uint64_t n_per_pair,
                                   std::uint64_t seed, unsigned n_threads) {
  visibility.validate();
  const AngleSettings settings = max_violation_settings();

  auto xi = [&](SettingPair pair) {
    const auto [a, b] = pair_angles(settings, pair);
    return visibility_correlator(visibility, a, b);
  };
  AspectComparison result;
  result.b_pred =
      chsh_combination(xi(SettingPair::ab), xi(SettingPair::ab_prime), xi(SettingPair::a_prime_b),
                       xi(SettingPair::a_prime_b_prime));

  const TrialPlan plan{n_per_pair, settings, VisibilitySource{visibility}, seed};
  const ChshReport report = estimate_chsh(sample_events(plan, n_threads));
  result.b_est = report.b();
  result.b_est_se = report.b_se();
  result.compatible = std::abs(result.b_est - result.b_pred) <= 3.0 * result.b_est_se;
  return result;
}

}  // namespace bellsim
