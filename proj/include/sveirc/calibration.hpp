#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sveirc/params.hpp"

namespace sveirc {

// Daily vaccinated-count observations, cumulative by default.
struct ObservedSeries {
  std::vector<int> day_index;
  std::vector<double> vaccinated;

  // Throws unless day_index is strictly increasing from >= 0, sizes match,
  // and counts are finite and nonnegative.
  void validate() const;
};

// The seven rates the fit adjusts, in canonical order.
inline constexpr std::array<std::string_view, 7> kFitParamNames = {
    "beta", "epsilon", "alpha1", "alpha2", "xi", "delta", "sigma"};

struct FitOptions {
  // Subset of kFitParamNames to adjust; empty means all seven.
  std::vector<std::string> free_names;
  // Optional [lo, hi] boxes aligned with the free parameters; empty means
  // unbounded (positivity is always enforced through the log transform).
  std::vector<std::pair<double, double>> bounds;
  // Fit day-over-day increments instead of cumulative levels.
  bool difference_data = false;
  double rtol = 1e-8;
  double atol = 1e-6;
};

struct FitResult {
  std::vector<std::string> names;
  std::vector<double> fitted;
  double objective = 0;
  int iterations = 0;
  bool converged = false;
  // Objective value at the start and after each accepted step.
  std::vector<double> residual_history;
};

// Sum of squared deviations between observed counts and the model V
// compartment sampled at the observation days. Order of data rows does not
// matter. Free parameter values must be strictly positive.
double objective(const std::vector<double>& free_values,
                 const ModelParams& base, const StateVector& init,
                 const ObservedSeries& data, const FitOptions& opts = {});

// Damped Gauss-Newton (Levenberg-Marquardt) in log-parameter space, which
// enforces positivity. Stops when the relative objective decrease drops
// below 1e-10 or the gradient norm below 1e-8 * (1 + objective); hitting
// max_iter returns converged = false rather than throwing.
FitResult fit(const ModelParams& base, const StateVector& init,
              const ObservedSeries& data, const std::vector<double>& guess,
              int max_iter = 200, const FitOptions& opts = {});

// Model V(t) sampled daily over 0..days, each value multiplied by (1 + eta)
// with eta drawn uniformly from [-noise_rel, noise_rel] under the given
// seed. noise_rel = 0 reproduces the model curve exactly.
ObservedSeries synthesize_observations(const ModelParams& p,
                                       const StateVector& init, int days,
                                       double noise_rel,
                                       std::uint64_t seed = 42);

}  // namespace sveirc
