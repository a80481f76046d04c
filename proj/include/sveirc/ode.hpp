#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace sveirc::ode {

// Right-hand side callback: fills dydt from (t, y). dydt is pre-sized.
using RhsFn = std::function<void(double t, const std::vector<double>& y,
                                 std::vector<double>& dydt)>;

struct Options {
  double rtol = 1e-8;
  double atol = 1e-6;
  // Sampled or accepted components below this value abort the run with
  // NegativityError. Defaults to no floor.
  double floor = -std::numeric_limits<double>::infinity();
};

struct Sampled {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
};

// Integrates y' = f(t, y) from t = 0 to t_end with the Dormand-Prince 5(4)
// embedded pair (FSAL, PI step-size control) and returns the solution on the
// uniform grid 0, sample_step, 2*sample_step, ... clipped to t_end. Grid
// points inside a step come from cubic Hermite interpolation on the stored
// endpoint values and slopes. Throws StiffnessError on step-size underflow.
Sampled integrate_sampled(const RhsFn& f, std::vector<double> y0, double t_end,
                          double sample_step, const Options& opts = {});

}  // namespace sveirc::ode
