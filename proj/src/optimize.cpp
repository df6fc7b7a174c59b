#include "bellsim/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "bellsim/assignments.hpp"
#include "bellsim/chsh.hpp"
#include "bellsim/hidden_variable.hpp"
#include "bellsim/rng.hpp"

namespace bellsim {

namespace {

using AngleTuple = std::array<double, 4>;  // alpha, alpha', beta, beta'

double objective(const CorrelatorSource& source, const AngleTuple& t) {
  auto xi = [&](double a, double b) {
    const double v = source(a, b);
    if (!std::isfinite(v)) {
      throw std::runtime_error("correlator source returned a non-finite value");
    }
    return Correlator{v};
  };
  return chsh_combination(xi(t[0], t[2]), xi(t[0], t[3]), xi(t[1], t[2]), xi(t[1], t[3]));
}

}  // namespace

OptimizationResult maximize_chsh(const CorrelatorSource& source, const OptimizeOptions& options) {
  if (options.grid_n < 8) throw std::invalid_argument("grid_n must be at least 8");
  if (!(options.refine_tol > 0.0)) throw std::invalid_argument("refine_tol must be positive");

  const double grid_step = kTwoPi / options.grid_n;
  const int alpha_points = options.gauge_fix_alpha ? 1 : options.grid_n;

  // Ascending lexicographic scan with strict improvement keeps the smallest
  // maximizing tuple.
  AngleTuple best{0.0, 0.0, 0.0, 0.0};
  double best_b = -1.0;
  for (int ia = 0; ia < alpha_points; ++ia) {
    for (int iap = 0; iap < options.grid_n; ++iap) {
      for (int ib = 0; ib < options.grid_n; ++ib) {
        for (int ibp = 0; ibp < options.grid_n; ++ibp) {
          const AngleTuple t{ia * grid_step, iap * grid_step, ib * grid_step, ibp * grid_step};
          const double b = objective(source, t);
          if (b > best_b) {
            best_b = b;
            best = t;
          }
        }
      }
    }
  }

  double step = grid_step;
  int sweeps = 0;
  bool converged = false;
  const int first_coord = options.gauge_fix_alpha ? 1 : 0;
  while (sweeps < options.max_sweeps) {
    if (step < options.refine_tol) {
      converged = true;
      break;
    }
    ++sweeps;
    bool improved = false;
    for (int c = first_coord; c < 4; ++c) {
      for (double delta : {+step, -step}) {
        AngleTuple t = best;
        t[static_cast<std::size_t>(c)] += delta;
        const double b = objective(source, t);
        if (b > best_b) {
          best_b = b;
          best = t;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  OptimizationResult result;
  result.settings = AngleSettings{best[0], best[1], best[2], best[3]}.canonical();
  result.b = objective(source, {result.settings.alpha, result.settings.alpha_prime,
                                result.settings.beta, result.settings.beta_prime});
  result.iterations = sweeps;
  result.converged = converged;
  return result;
}

double lhv_ceiling_search(std::size_t n_models, std::uint64_t seed) {
  double best = 0.0;
  for (int row = 1; row <= 16; ++row) {
    best = std::max(best, chsh_of_p16(point_mass16(row)));
  }
  RngStream rng = RngStream::from_seed(seed);
  for (std::size_t i = 0; i < n_models; ++i) {
    best = std::max(best, chsh_of_p16(random_p16(rng)));
  }
  return best;
}

}  // namespace bellsim
