#include "sveirc/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sveirc/errors.hpp"
#include "sveirc/io.hpp"
#include "sveirc/model.hpp"
#include "sveirc/ode.hpp"

namespace sveirc {

Trajectory integrate(const ModelParams& p, const StateVector& init,
                     double t_end, double sample_step, double rtol,
                     double atol) {
  p.validate();
  for (double v : init.to_array()) {
    if (!std::isfinite(v))
      throw InvalidStateError("integrate: initial state contains NaN or Inf");
    if (v < 0.0)
      throw InvalidStateError("integrate: initial state must be nonnegative");
  }

  // Stage values probed by the stepper may dip a hair below zero; clamp the
  // response argument there so the right-hand side stays defined. Accepted
  // points are still held above -atol by the floor option.
  auto f = [&p](double, const std::vector<double>& y,
                std::vector<double>& dydt) {
    StateVector s{y[0], y[1], y[2], y[3], y[4], y[5]};
    const double g = s.C > 0.0 ? response_g(s.C, p.kappa, p.n) : 0.0;
    const StateVector d = detail::rhs_with_response(s, p, g);
    const auto a = d.to_array();
    std::copy(a.begin(), a.end(), dydt.begin());
  };

  ode::Options opts;
  opts.rtol = rtol;
  opts.atol = atol;
  opts.floor = -atol;
  auto sampled = ode::integrate_sampled(
      f, {init.S, init.E, init.I, init.V, init.R, init.C}, t_end, sample_step,
      opts);

  Trajectory traj;
  traj.params = p;
  traj.times = std::move(sampled.times);
  traj.states.reserve(sampled.states.size());
  for (const auto& y : sampled.states)
    traj.states.push_back({y[0], y[1], y[2], y[3], y[4], y[5]});
  return traj;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::string body = "t,S,E,I,V,R,C,N\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const StateVector& s = traj.states[i];
    body += io::format_double(traj.times[i]);
    for (double v : {s.S, s.E, s.I, s.V, s.R, s.C, total_population(s)}) {
      body += ',';
      body += io::format_double(v);
    }
    body += '\n';
  }
  io::write_file_atomic(path, body);
}

void write_trajectory_plot_csv(const Trajectory& traj,
                               const std::string& path) {
  static const char* series[7] = {"S", "E", "I", "V", "R", "C", "N"};
  std::string body = "t,series,value\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const StateVector& s = traj.states[i];
    const double values[7] = {s.S, s.E, s.I, s.V,
                              s.R, s.C, total_population(s)};
    for (int j = 0; j < 7; ++j) {
      body += io::format_double(traj.times[i]);
      body += ',';
      body += series[j];
      body += ',';
      body += io::format_double(values[j]);
      body += '\n';
    }
  }
  io::write_file_atomic(path, body);
}

}  // namespace sveirc
