#pragma once

#include <cstdint>
#include <functional>

#include "bellsim/types.hpp"

namespace bellsim {

/// A correlator as a function of the two wings' analyzer angles.
using CorrelatorSource = std::function<double(double alpha, double beta)>;

struct OptimizeOptions {
  int grid_n = 24;             // coarse-grid points per free dimension, >= 8
  double refine_tol = 1e-7;    // stop once the descent step is below this
  bool gauge_fix_alpha = true; // freeze alpha = 0; valid whenever the source
                               // depends on angle differences only
  int max_sweeps = 10000;
};

struct OptimizationResult {
  AngleSettings settings;  // wrapped into [0, 2pi)
  double b = 0.0;          // recomputed at the returned settings
  int iterations = 0;      // refinement sweeps performed
  bool converged = false;
};

/// Coarse grid search over the analyzer angles followed by coordinate
/// descent with a halving step. Deterministic: the grid is visited in
/// ascending lexicographic order and only strict improvements move the
/// incumbent, so ties resolve to the smallest angle tuple.
OptimizationResult maximize_chsh(const CorrelatorSource& source,
                                 const OptimizeOptions& options = {});

/// Maximum CHSH value over the 16 deterministic assignments plus n_models
/// random distributions over them. The maximum is attained at a vertex and
/// equals 2 exactly.
double lhv_ceiling_search(std::size_t n_models, std::uint64_t seed);

}  // namespace bellsim
