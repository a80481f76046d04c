#pragma once

#include <string>
#include <vector>

#include "sveirc/params.hpp"

namespace sveirc {

// One simulated run, sampled on the uniform grid 0, sample_step, ...
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  ModelParams params;
};

// Integrates the model from init to t_end. init must be finite and
// nonnegative. Sampled states are guaranteed to stay above -atol in every
// component; a deeper excursion aborts with NegativityError.
Trajectory integrate(const ModelParams& p, const StateVector& init,
                     double t_end, double sample_step = 1.0,
                     double rtol = 1e-8, double atol = 1e-6);

// Writes "t,S,E,I,V,R,C,N" rows with shortest round-trip formatting. The
// file appears atomically (temp file plus rename).
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

// Same data in long format, "t,series,value", one row per compartment plus N
// per sample time; convenient for plotting tools.
void write_trajectory_plot_csv(const Trajectory& traj,
                               const std::string& path);

}  // namespace sveirc
