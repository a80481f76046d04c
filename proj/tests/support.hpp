#pragma once

// Shared fixtures and independent numeric oracles for the test binaries.
// The oracles deliberately avoid the closed forms under test: linear solves,
// finite differences, eigensolvers, bisection and sign scans stand on their
// own so a bug in the production formulas cannot hide.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>

#include "sveirc/equilibria.hpp"
#include "sveirc/model.hpp"
#include "sveirc/params.hpp"

namespace sveirc::testing {

// Parameter set behind the 300-day epidemic scenario (n = 1).
inline ModelParams scenario_params() {
  ModelParams p;
  p.Lambda = 3032;
  p.beta = 1.5e-9;
  p.sigma = 0.01;
  p.lambda_v = 0.8;
  p.t_prime = 1.0 / 120.0;
  p.alpha1 = 0.01;
  p.alpha2 = 0.01;
  p.epsilon = 1.5e-9;
  p.mu = 3.653e-5;
  p.xi = 0.125;
  p.delta = 0.06;
  p.d = 0.02;
  p.phi = 2;
  p.omega = 4;
  p.kappa = 20000;
  p.n = 1;
  return p;
}

// Fitted parameter set, saturation exponent 1.
inline ModelParams fitted_params_n1() {
  ModelParams p;
  p.Lambda = 3032;
  p.beta = 1.0257e-8;
  p.sigma = 0.02136;
  p.lambda_v = 0.8;
  p.t_prime = 0.0055;
  p.alpha1 = 0.00041;
  p.alpha2 = 0.00031;
  p.epsilon = 1.0e-8;
  p.mu = 3.653e-5;
  p.xi = 0.01004;
  p.delta = 0.19999;
  p.d = 0.1;
  p.phi = 2;
  p.omega = 5;
  p.kappa = 20000;
  p.n = 1;
  return p;
}

// Fitted parameter set, saturation exponent 2.
inline ModelParams fitted_params_n2() {
  ModelParams p = fitted_params_n1();
  p.beta = 1.004e-8;
  p.sigma = 0.02126;
  p.alpha1 = 0.0001;
  p.alpha2 = 0.0001;
  p.xi = 0.01133;
  p.delta = 0.2;
  p.n = 2;
  return p;
}

inline StateVector epidemic_init() {
  StateVector s;
  s.S = 61098000;
  s.E = 2200000;
  s.I = 1200000;
  s.V = 18500000;
  s.R = 2000;
  s.C = 20000;
  return s;
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

struct DrawOptions {
  int n = 1;
  // Enforce the biological assumptions strictly: epsilon < beta,
  // alpha2 < alpha1, lambda_v >= 0.05.
  bool biological = false;
  // Redraw until beta_star exists.
  bool need_beta_star = false;
};

// One random valid parameter set spanning several orders of magnitude.
inline ModelParams draw_params(std::mt19937_64& rng, const DrawOptions& opt) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    ModelParams p;
    p.Lambda = log_uniform(rng, 1e2, 1e4);
    p.mu = log_uniform(rng, 1e-5, 1e-3);
    p.beta = log_uniform(rng, 1e-10, 1e-7);
    p.epsilon = opt.biological
                    ? p.beta * (0.05 + 0.90 * unit(rng))
                    : log_uniform(rng, 1e-10, 1e-7);
    p.sigma = log_uniform(rng, 1e-4, 0.5);
    p.lambda_v = opt.biological ? 0.05 + 0.95 * unit(rng) : unit(rng);
    p.t_prime = log_uniform(rng, 1e-3, 0.1);
    p.alpha1 = log_uniform(rng, 1e-6, 0.05);
    p.alpha2 = opt.biological ? p.alpha1 * (0.05 + 0.90 * unit(rng))
                              : log_uniform(rng, 1e-6, 0.05);
    p.xi = log_uniform(rng, 0.01, 0.5);
    p.delta = log_uniform(rng, 0.01, 0.5);
    p.d = log_uniform(rng, 1e-4, 0.1);
    p.phi = log_uniform(rng, 0.1, 5.0);
    p.omega = log_uniform(rng, 0.1, 5.0);
    p.kappa = log_uniform(rng, 1e3, 1e6);
    p.n = opt.n;
    p.validate();
    if (opt.need_beta_star) {
      const double dg0 = response_g_dC_at_zero(p.kappa, p.n);
      const double rhs_val =
          (p.xi + p.mu) * (p.mu + p.delta + p.d) /
              (p.xi * disease_free_state(p).S) -
          p.alpha1 * p.phi * dg0 / p.omega -
          (p.epsilon + p.alpha2 * p.phi * dg0 / p.omega) * p.sigma /
              (p.t_prime + p.mu);
      if (rhs_val <= 0.0) continue;
    }
    return p;
  }
}

// Random strictly positive interior state at population scales.
inline StateVector draw_state(std::mt19937_64& rng) {
  StateVector s;
  s.S = log_uniform(rng, 1e2, 1e8);
  s.E = log_uniform(rng, 1e1, 1e7);
  s.I = log_uniform(rng, 1e1, 1e7);
  s.V = log_uniform(rng, 1e2, 1e8);
  s.R = log_uniform(rng, 1e1, 1e8);
  s.C = log_uniform(rng, 1e0, 1e7);
  return s;
}

// Disease-free state by solving the 3x3 linear balance system for
// (S, V, R) directly, instead of the closed forms.
inline StateVector dfs_linear_solve_oracle(const ModelParams& p) {
  Eigen::Matrix3d a;
  Eigen::Vector3d b;
  // S' = Lambda - sigma S + (1-lambda) t' V - mu S = 0
  // V' = sigma S - (t' + mu) V = 0
  // R' = lambda t' V - mu R = 0
  a << -(p.sigma + p.mu), (1.0 - p.lambda_v) * p.t_prime, 0.0,
      p.sigma, -(p.t_prime + p.mu), 0.0,
      0.0, p.lambda_v * p.t_prime, -p.mu;
  b << -p.Lambda, 0.0, 0.0;
  const Eigen::Vector3d x = a.fullPivLu().solve(b);
  StateVector s;
  s.S = x(0);
  s.V = x(1);
  s.R = x(2);
  return s;
}

// Richardson-extrapolated central-difference Jacobian of rhs. Alongside the
// value it reports a per-entry error bound built from the floating-point
// noise of the difference quotient (eps * |f| / h) and a truncation probe
// (the spread between the h and 2h quotients), so callers can demand
// 1e-5 relative agreement exactly where the arithmetic can support it.
struct FdJacobian {
  Matrix6 value;
  Matrix6 tol;
};

inline FdJacobian fd_jacobian_oracle(const StateVector& state,
                                     const ModelParams& p) {
  FdJacobian out;
  const auto base = state.to_array();
  double scale = 1.0;
  for (double v : base) scale = std::max(scale, std::abs(v));
  constexpr double eps = 2.3e-16;
  for (int col = 0; col < 6; ++col) {
    const auto idx = static_cast<std::size_t>(col);
    // The step follows both the coordinate and the overall state magnitude:
    // rows mix terms at the full population scale, so a step keyed to a tiny
    // coordinate alone would drown the quotient in cancellation noise.
    const double h = 1e-6 * std::max(std::abs(base[idx]), 1e-3 * scale);
    std::array<double, 6> f_mag{};
    auto quotient = [&](double step) {
      auto up = base, down = base;
      up[idx] += step;
      down[idx] -= step;
      const auto f_up = rhs(StateVector::from_array(up), p).to_array();
      const auto f_down = rhs(StateVector::from_array(down), p).to_array();
      std::array<double, 6> q{};
      for (std::size_t row = 0; row < 6; ++row) {
        f_mag[row] = std::max({f_mag[row], std::abs(f_up[row]),
                               std::abs(f_down[row])});
        q[row] = (f_up[row] - f_down[row]) / (2.0 * step);
      }
      return q;
    };
    const auto q1 = quotient(h);
    const auto q2 = quotient(2.0 * h);
    for (std::size_t row = 0; row < 6; ++row) {
      out.value(static_cast<int>(row), col) = (4.0 * q1[row] - q2[row]) / 3.0;
      out.tol(static_cast<int>(row), col) =
          20.0 * eps * f_mag[row] / h + 0.1 * std::abs(q2[row] - q1[row]);
    }
  }
  return out;
}

// Coefficients of det(lambda I - M) for a 3x3 block, from its eigenvalues:
// a1 = -sum, a2 = sum of pairwise products, a3 = -product.
struct CharPoly3 {
  double a1 = 0, a2 = 0, a3 = 0;
};

inline CharPoly3 char_poly_oracle(const Matrix3& m) {
  const Eigen::EigenSolver<Matrix3> es(m);
  const auto ev = es.eigenvalues();
  const std::complex<double> e0 = ev(0), e1 = ev(1), e2 = ev(2);
  CharPoly3 c;
  c.a1 = -(e0 + e1 + e2).real();
  c.a2 = (e0 * e1 + e0 * e2 + e1 * e2).real();
  c.a3 = -(e0 * e1 * e2).real();
  return c;
}

// Spectral radius of F V^{-1} by plain power iteration.
inline double spectral_radius_oracle(const Matrix3& f, const Matrix3& v) {
  const Matrix3 k = f * v.inverse();
  Eigen::Vector3d x(1.0, 1.0, 1.0);
  x.normalize();
  double radius = 0.0;
  for (int it = 0; it < 500; ++it) {
    const Eigen::Vector3d y = k * x;
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    x = y / norm;
    radius = norm;
  }
  return radius;
}

// Critical contact rate by bisection on r0(beta) = 1. r0 is strictly
// increasing in beta, so a sign change brackets the root whenever R0 can
// reach 1 at all.
inline std::optional<double> beta_star_bisection_oracle(const ModelParams& p) {
  double lo = 1e-300;
  if (r0(p.with("beta", lo)) >= 1.0) return std::nullopt;  // already >= 1
  double hi = 1.0;
  if (r0(p.with("beta", hi)) < 1.0) return std::nullopt;
  for (int it = 0; it < 2000; ++it) {
    const double mid = std::sqrt(lo * hi);  // geometric: the scales vary
    if (hi - lo <= 1e-14 * mid) break;
    if (r0(p.with("beta", mid)) < 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Right and left kernel vectors of a 6x6 matrix via SVD, scaled so the
// second component is 1.
inline std::pair<Vector6, Vector6> kernel_vectors_oracle(const Matrix6& j) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      j, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vector6 right = svd.matrixV().col(5);
  Vector6 left = svd.matrixU().col(5);
  right /= right(1);
  left /= left(1);
  return {right, left};
}

}  // namespace sveirc::testing
