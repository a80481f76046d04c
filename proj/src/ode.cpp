#include "sveirc/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "sveirc/errors.hpp"

namespace sveirc::ode {

namespace {

// Dormand-Prince 5(4) tableau. The last row of a doubles as the 5th-order
// weights (FSAL), e holds the difference against the embedded 4th-order
// solution.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
     -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kE[7] = {71.0 / 57600,     0.0,          -71.0 / 16695,
                          71.0 / 1920,      -17253.0 / 339200,
                          22.0 / 525,       -1.0 / 40};

double scaled_rms(const std::vector<double>& v, const std::vector<double>& ya,
                  const std::vector<double>& yb, double rtol, double atol) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double sc =
        atol + rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
    const double e = v[i] / sc;
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(v.size()));
}

// Starting step size along the lines of Hairer/Norsett/Wanner.
double initial_step(const RhsFn& f, const std::vector<double>& y0,
                    const std::vector<double>& f0, double t_end, double rtol,
                    double atol) {
  const std::size_t dim = y0.size();
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double sc = atol + rtol * std::abs(y0[i]);
    d0 += (y0[i] / sc) * (y0[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = std::sqrt(d0 / static_cast<double>(dim));
  d1 = std::sqrt(d1 / static_cast<double>(dim));
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, t_end);

  std::vector<double> y1(dim), f1(dim);
  for (std::size_t i = 0; i < dim; ++i) y1[i] = y0[i] + h0 * f0[i];
  f(h0, y1, f1);
  double d2 = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double sc = atol + rtol * std::abs(y0[i]);
    const double df = (f1[i] - f0[i]) / sc;
    d2 += df * df;
  }
  d2 = std::sqrt(d2 / static_cast<double>(dim)) / h0;

  const double dmax = std::max(d1, d2);
  double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                            : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, t_end});
}

}  // namespace

Sampled integrate_sampled(const RhsFn& f, std::vector<double> y0, double t_end,
                          double sample_step, const Options& opts) {
  if (!(t_end > 0.0) || !std::isfinite(t_end))
    throw InvalidParameterError("integrate: t_end must be positive");
  if (!(sample_step > 0.0) || !std::isfinite(sample_step))
    throw InvalidParameterError("integrate: sample_step must be positive");
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0))
    throw InvalidParameterError("integrate: tolerances must be positive");
  if (y0.empty()) throw InvalidParameterError("integrate: empty state");

  const std::size_t dim = y0.size();
  const long n_samples =
      static_cast<long>(std::floor(t_end / sample_step * (1.0 + 1e-12)));

  Sampled out;
  out.times.reserve(static_cast<std::size_t>(n_samples) + 1);
  out.states.reserve(static_cast<std::size_t>(n_samples) + 1);
  out.times.push_back(0.0);
  out.states.push_back(y0);
  long next_sample = 1;

  auto check_floor = [&](const std::vector<double>& y, double t) {
    for (std::size_t i = 0; i < dim; ++i)
      if (y[i] < opts.floor)
        throw NegativityError("integrate: component " + std::to_string(i) +
                              " fell below " + std::to_string(opts.floor) +
                              " near t = " + std::to_string(t));
  };
  check_floor(y0, 0.0);

  std::vector<double> k[7];
  for (auto& ki : k) ki.resize(dim);
  std::vector<double> y = y0, y_new(dim), y_err(dim), y_stage(dim),
      y_interp(dim);

  f(0.0, y, k[0]);
  for (double v : k[0])
    if (!std::isfinite(v))
      throw InvalidStateError("integrate: derivative is not finite at t = 0");

  double h = initial_step(f, y, k[0], t_end, opts.rtol, opts.atol);
  const double h_min = 1e-14 * std::max(1.0, t_end);

  // PI controller constants (Hairer's dopri5 defaults).
  constexpr double kSafety = 0.9;
  constexpr double kAlpha = 0.7 / 5.0;
  constexpr double kBeta = 0.4 / 10.0;
  constexpr double kFacMin = 0.2;
  constexpr double kFacMax = 10.0;
  double err_old = 1e-4;

  double t = 0.0;
  bool last_step = false;
  while (!last_step) {
    if (h < h_min)
      throw StiffnessError(
          "integrate: step size underflow near t = " + std::to_string(t) +
          ", the problem appears too stiff for this method");
    if (t + h >= t_end) {
      h = t_end - t;
      last_step = true;
    }

    for (int s = 1; s < 7; ++s) {
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += kA[s][j] * k[j][i];
        y_stage[i] = y[i] + h * acc;
      }
      f(t + kC[s] * h, y_stage, k[s]);
    }
    // Stage 7 used y_new as its argument, so y_new and k[6] (FSAL) are ready.
    y_new = y_stage;

    bool finite = true;
    for (std::size_t i = 0; i < dim && finite; ++i)
      finite = std::isfinite(y_new[i]) && std::isfinite(k[6][i]);
    double err = std::numeric_limits<double>::infinity();
    if (finite) {
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (int j = 0; j < 7; ++j) acc += kE[j] * k[j][i];
        y_err[i] = h * acc;
      }
      err = scaled_rms(y_err, y, y_new, opts.rtol, opts.atol);
    }

    if (err <= 1.0) {
      const double t_new = last_step ? t_end : t + h;
      // Emit every grid point that the accepted step covers, interpolating
      // with the cubic Hermite polynomial on (y, k[0]) -> (y_new, k[6]).
      while (next_sample <= n_samples) {
        const double ts = static_cast<double>(next_sample) * sample_step;
        if (ts > t_new * (1.0 + 1e-14) && !(last_step && next_sample == n_samples))
          break;
        const double theta = std::clamp((ts - t) / h, 0.0, 1.0);
        const double h00 = (1.0 + 2.0 * theta) * (1.0 - theta) * (1.0 - theta);
        const double h10 = theta * (1.0 - theta) * (1.0 - theta);
        const double h01 = theta * theta * (3.0 - 2.0 * theta);
        const double h11 = theta * theta * (theta - 1.0);
        for (std::size_t i = 0; i < dim; ++i)
          y_interp[i] = h00 * y[i] + h10 * h * k[0][i] + h01 * y_new[i] +
                        h11 * h * k[6][i];
        check_floor(y_interp, ts);
        out.times.push_back(ts);
        out.states.push_back(y_interp);
        ++next_sample;
      }
      check_floor(y_new, t_new);

      t = t_new;
      y.swap(y_new);
      k[0].swap(k[6]);

      const double fac = kSafety * std::pow(err > 0 ? err : 1e-16, -kAlpha) *
                         std::pow(err_old, kBeta);
      h *= std::clamp(fac, kFacMin, kFacMax);
      err_old = std::max(err, 1e-4);
    } else {
      last_step = false;
      const double fac =
          finite ? std::max(kFacMin, kSafety * std::pow(err, -kAlpha)) : 0.1;
      h *= std::min(1.0, fac);
    }
  }
  return out;
}

}  // namespace sveirc::ode
