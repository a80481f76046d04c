#include "sveirc/calibration.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sveirc/errors.hpp"
#include "sveirc/integrate.hpp"

namespace sveirc {

void ObservedSeries::validate() const {
  if (day_index.size() != vaccinated.size())
    throw SchemaError("observed series: day and count columns differ in length");
  if (day_index.empty())
    throw SchemaError("observed series: no observations");
  int prev = -1;
  for (std::size_t i = 0; i < day_index.size(); ++i) {
    if (day_index[i] < 0)
      throw SchemaError("observed series: negative day index");
    if (day_index[i] <= prev)
      throw SchemaError("observed series: day indices must strictly increase");
    prev = day_index[i];
    if (!std::isfinite(vaccinated[i]) || vaccinated[i] < 0.0)
      throw SchemaError(
          "observed series: counts must be finite and nonnegative");
  }
}

namespace {

std::vector<std::string> resolve_free_names(
    const std::vector<std::string>& requested) {
  if (requested.empty())
    return {kFitParamNames.begin(), kFitParamNames.end()};
  std::vector<std::string> out;
  for (const std::string& name : requested) {
    if (std::find(kFitParamNames.begin(), kFitParamNames.end(), name) ==
        kFitParamNames.end())
      throw InvalidParameterError("fit: '" + name +
                                  "' is not a fittable parameter");
    if (std::find(out.begin(), out.end(), name) != out.end())
      throw InvalidParameterError("fit: parameter '" + name +
                                  "' listed twice");
    out.push_back(name);
  }
  return out;
}

ModelParams apply_free(const ModelParams& base,
                       const std::vector<std::string>& names,
                       const std::vector<double>& values) {
  ModelParams p = base;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] <= 0.0)
      throw DomainError("fit: free parameter '" + names[i] +
                        "' must be strictly positive");
    p = p.with(names[i], values[i]);
  }
  return p;
}

// (day, count) pairs in day order regardless of how the caller arranged
// them, so the objective has set semantics over rows.
std::vector<std::pair<int, double>> sorted_observations(
    const ObservedSeries& data) {
  if (data.day_index.size() != data.vaccinated.size())
    throw SchemaError("observed series: day and count columns differ in length");
  if (data.day_index.empty())
    throw SchemaError("observed series: no observations");
  std::vector<std::pair<int, double>> obs;
  obs.reserve(data.day_index.size());
  for (std::size_t i = 0; i < data.day_index.size(); ++i) {
    if (data.day_index[i] < 0)
      throw SchemaError("observed series: negative day index");
    obs.emplace_back(data.day_index[i], data.vaccinated[i]);
  }
  std::sort(obs.begin(), obs.end());
  for (std::size_t i = 1; i < obs.size(); ++i)
    if (obs[i].first == obs[i - 1].first)
      throw SchemaError("observed series: duplicate day index");
  return obs;
}

std::vector<double> residuals_at(const ModelParams& p,
                                 const StateVector& init,
                                 const std::vector<std::pair<int, double>>& obs,
                                 const FitOptions& opts) {
  const int last_day = obs.back().first;
  std::vector<double> model_v(static_cast<std::size_t>(last_day) + 1,
                              init.V);
  if (last_day > 0) {
    const Trajectory traj = integrate(p, init, last_day, 1.0, opts.rtol,
                                      opts.atol);
    for (std::size_t k = 0; k < traj.states.size(); ++k)
      model_v[k] = traj.states[k].V;
  }

  std::vector<double> res;
  if (opts.difference_data) {
    if (obs.size() < 2)
      throw InvalidParameterError(
          "fit: differencing needs at least two observations");
    res.reserve(obs.size() - 1);
    for (std::size_t i = 1; i < obs.size(); ++i) {
      const double d_obs = obs[i].second - obs[i - 1].second;
      const double d_mod = model_v[static_cast<std::size_t>(obs[i].first)] -
                           model_v[static_cast<std::size_t>(obs[i - 1].first)];
      res.push_back(d_obs - d_mod);
    }
  } else {
    res.reserve(obs.size());
    for (const auto& [day, count] : obs)
      res.push_back(count - model_v[static_cast<std::size_t>(day)]);
  }
  return res;
}

double sum_of_squares(const std::vector<double>& r) {
  double s = 0.0;
  for (double x : r) s += x * x;
  return s;
}

}  // namespace

double objective(const std::vector<double>& free_values,
                 const ModelParams& base, const StateVector& init,
                 const ObservedSeries& data, const FitOptions& opts) {
  const auto names = resolve_free_names(opts.free_names);
  if (free_values.size() != names.size())
    throw InvalidParameterError(
        "objective: got " + std::to_string(free_values.size()) +
        " values for " + std::to_string(names.size()) + " free parameters");
  const ModelParams p = apply_free(base, names, free_values);
  return sum_of_squares(residuals_at(p, init, sorted_observations(data),
                                     opts));
}

FitResult fit(const ModelParams& base, const StateVector& init,
              const ObservedSeries& data, const std::vector<double>& guess,
              int max_iter, const FitOptions& opts) {
  const auto names = resolve_free_names(opts.free_names);
  const std::size_t m = names.size();
  if (guess.size() != m)
    throw InvalidParameterError(
        "fit: got " + std::to_string(guess.size()) + " guesses for " +
        std::to_string(m) + " free parameters");
  if (max_iter < 1) throw InvalidParameterError("fit: max_iter must be >= 1");
  if (!opts.bounds.empty() && opts.bounds.size() != m)
    throw InvalidParameterError(
        "fit: bounds list does not match the free parameters");
  const auto obs = sorted_observations(data);

  std::vector<double> log_lo(m, -std::numeric_limits<double>::infinity());
  std::vector<double> log_hi(m, std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < opts.bounds.size(); ++j) {
    const auto [lo, hi] = opts.bounds[j];
    if (!(lo > 0.0) || !(hi >= lo))
      throw InvalidParameterError("fit: bounds must satisfy 0 < lo <= hi");
    log_lo[j] = std::log(lo);
    log_hi[j] = std::log(hi);
  }

  Eigen::VectorXd theta(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (!std::isfinite(guess[j]) || guess[j] <= 0.0)
      throw DomainError("fit: guess for '" + names[j] +
                        "' must be strictly positive");
    theta(j) = std::clamp(std::log(guess[j]), log_lo[j], log_hi[j]);
  }

  auto values_of = [&](const Eigen::VectorXd& th) {
    std::vector<double> v(m);
    for (std::size_t j = 0; j < m; ++j) v[j] = std::exp(th(j));
    return v;
  };
  auto residuals_of = [&](const Eigen::VectorXd& th) {
    return residuals_at(apply_free(base, names, values_of(th)), init, obs,
                        opts);
  };

  std::vector<double> res = residuals_of(theta);
  double s = sum_of_squares(res);

  FitResult result;
  result.names = names;
  result.residual_history.push_back(s);

  constexpr double kFdStep = 1e-6;
  double damping = 1e-3;
  bool converged = false;
  int iter = 0;
  while (iter < max_iter && !converged) {
    ++iter;
    // Forward-difference Jacobian of the residual vector in log-parameters.
    Eigen::MatrixXd jac(res.size(), m);
    for (std::size_t j = 0; j < m; ++j) {
      Eigen::VectorXd th = theta;
      th(j) += kFdStep;
      const std::vector<double> res_j = residuals_of(th);
      for (std::size_t i = 0; i < res.size(); ++i)
        jac(i, j) = (res_j[i] - res[i]) / kFdStep;
    }
    Eigen::VectorXd r(res.size());
    for (std::size_t i = 0; i < res.size(); ++i) r(i) = res[i];
    const Eigen::VectorXd grad = jac.transpose() * r;
    if (grad.lpNorm<Eigen::Infinity>() <= 1e-8 * (1.0 + s)) {
      converged = true;
      break;
    }
    // Marquardt column scales; the floor keeps directions the data cannot
    // see pinned in place instead of letting them wander.
    Eigen::VectorXd col_scale(m);
    for (std::size_t j = 0; j < m; ++j)
      col_scale(j) = std::max(jac.col(j).norm(), 1e-150);

    bool accepted = false;
    while (!accepted) {
      // Solve the damped least-squares system min |J step + r|^2 +
      // damping |D step|^2 through QR of the stacked matrix; this avoids
      // forming J^T J, which squares the condition number and turns steps
      // along sloppy directions into noise.
      const Eigen::Index rows = static_cast<Eigen::Index>(res.size());
      Eigen::MatrixXd stacked(rows + static_cast<Eigen::Index>(m), m);
      Eigen::VectorXd rhs(rows + static_cast<Eigen::Index>(m));
      stacked.topRows(rows) = jac;
      rhs.head(rows) = -r;
      stacked.bottomRows(static_cast<Eigen::Index>(m)) =
          std::sqrt(damping) * Eigen::MatrixXd(col_scale.asDiagonal());
      rhs.tail(static_cast<Eigen::Index>(m)).setZero();
      const Eigen::VectorXd step = stacked.colPivHouseholderQr().solve(rhs);
      bool usable = step.allFinite();
      Eigen::VectorXd theta_trial;
      double s_trial = std::numeric_limits<double>::infinity();
      if (usable) {
        theta_trial = theta + step;
        for (std::size_t j = 0; j < m; ++j)
          theta_trial(j) = std::clamp(theta_trial(j), log_lo[j], log_hi[j]);
        try {
          const std::vector<double> res_trial = residuals_of(theta_trial);
          s_trial = sum_of_squares(res_trial);
          if (s_trial <= s) {
            const double decrease = (s - s_trial) / std::max(s, 1e-300);
            theta = theta_trial;
            res = res_trial;
            s = s_trial;
            result.residual_history.push_back(s);
            damping = std::max(damping / 3.0, 1e-12);
            accepted = true;
            if (decrease < 1e-10) converged = true;
            break;
          }
        } catch (const Error&) {
          // Trial point broke the integrator; treat as a rejected step.
        }
      }
      damping *= 10.0;
      if (damping > 1e12) break;  // singular/hopeless direction
    }
    if (!accepted) break;
  }

  result.fitted = values_of(theta);
  result.objective = s;
  result.iterations = iter;
  result.converged = converged;
  return result;
}

ObservedSeries synthesize_observations(const ModelParams& p,
                                       const StateVector& init, int days,
                                       double noise_rel, std::uint64_t seed) {
  if (days < 1)
    throw InvalidParameterError("synthesize_observations: days must be >= 1");
  if (!std::isfinite(noise_rel) || noise_rel < 0.0)
    throw InvalidParameterError(
        "synthesize_observations: noise_rel must be nonnegative");
  const Trajectory traj = integrate(p, init, days, 1.0);
  ObservedSeries out;
  out.day_index.resize(traj.states.size());
  std::iota(out.day_index.begin(), out.day_index.end(), 0);
  out.vaccinated.reserve(traj.states.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> eta(-noise_rel, noise_rel);
  for (const StateVector& s : traj.states) {
    double v = s.V;
    if (noise_rel > 0.0) v *= 1.0 + eta(rng);
    out.vaccinated.push_back(v);
  }
  return out;
}

}  // namespace sveirc
