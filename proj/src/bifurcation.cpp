#include "sveirc/bifurcation.hpp"

#include <algorithm>
#include <cmath>

#include "sveirc/errors.hpp"
#include "sveirc/io.hpp"
#include "sveirc/model.hpp"

namespace sveirc {

std::optional<double> beta_star(const ModelParams& p) {
  const StateVector dfs = disease_free_state(p);
  const double dg0 = response_g_dC_at_zero(p.kappa, p.n);
  const double value =
      (p.xi + p.mu) * (p.mu + p.delta + p.d) / (p.xi * dfs.S) -
      p.alpha1 * p.phi * dg0 / p.omega -
      (p.epsilon + p.alpha2 * p.phi * dg0 / p.omega) * p.sigma /
          (p.t_prime + p.mu);
  if (value <= 0.0) return std::nullopt;
  return value;
}

std::pair<Vector6, Vector6> criticality_eigenvectors(const ModelParams& p) {
  const auto bs = beta_star(p);
  if (!bs)
    throw NoCriticalBetaError(
        "criticality_eigenvectors: no positive critical contact rate exists "
        "for these parameters");
  const double beta_c = *bs;
  const StateVector dfs = disease_free_state(p);
  const double dd = p.delta + p.d + p.mu;
  const double dg0 = response_g_dC_at_zero(p.kappa, p.n);
  const double det = p.mu * (p.sigma + p.t_prime + p.mu) +
                     p.lambda_v * p.t_prime * p.sigma;
  // Forcing terms of the (S, V) subsystem produced by w2 = 1.
  const double fs =
      (beta_c + p.alpha1 * p.phi * dg0 / p.omega) * p.xi * dfs.S / dd;
  const double fv =
      (p.epsilon + p.alpha2 * p.phi * dg0 / p.omega) * p.xi * dfs.V / dd;

  Vector6 w;
  w(1) = 1.0;
  w(2) = p.xi / dd;
  w(5) = p.phi * p.xi / (p.omega * dd);
  w(0) = -((p.t_prime + p.mu) * fs + (1.0 - p.lambda_v) * p.t_prime * fv) /
         det;
  w(3) = -(p.sigma * fs + (p.sigma + p.mu) * fv) / det;
  w(4) = (p.delta * w(2) + p.lambda_v * p.t_prime * w(3)) / p.mu;

  Vector6 v = Vector6::Zero();
  v(1) = 1.0;
  v(2) = (p.xi + p.mu) / p.xi;
  v(5) = (p.alpha1 * dfs.S + p.alpha2 * dfs.V) * dg0 / p.omega;
  return {w, v};
}

std::pair<double, double> normal_form_coefficients(const ModelParams& p,
                                                   double w2_scale,
                                                   double v2_scale) {
  if (!(w2_scale > 0.0) || !(v2_scale > 0.0))
    throw InvalidParameterError(
        "normal_form_coefficients: eigenvector scales must be positive");
  const auto bs = beta_star(p);
  if (!bs)
    throw NoCriticalBetaError(
        "normal_form_coefficients: no positive critical contact rate exists "
        "for these parameters");
  const double beta_c = *bs;
  auto [w, v] = criticality_eigenvectors(p);
  w *= w2_scale;
  v *= v2_scale;
  const StateVector dfs = disease_free_state(p);
  const double dg0 = response_g_dC_at_zero(p.kappa, p.n);
  const double d2g0 = response_g_d2C_at_zero(p.kappa, p.n);
  const double a =
      2.0 * v(1) *
      (w(0) * w(2) * beta_c + w(2) * w(3) * p.epsilon +
       (p.alpha1 * w(0) + p.alpha2 * w(3)) * w(5) * dg0 +
       (p.alpha1 * dfs.S + p.alpha2 * dfs.V) * w(5) * w(5) * d2g0);
  const double b = w(2) * dfs.S * (w(1) - w(0));
  return {a, b};
}

bool backward_condition(const ModelParams& p) {
  if (p.n != 2) return false;
  const auto bs = beta_star(p);
  if (!bs) return false;
  const double beta_c = *bs;
  const double det = p.mu * (p.sigma + p.t_prime + p.mu) +
                     p.lambda_v * p.t_prime * p.sigma;
  const double tm = p.t_prime + p.mu;
  const double lhs = 2.0 * (p.alpha1 * tm + p.alpha2 * p.sigma) * p.phi *
                     p.phi / (p.omega * p.omega * p.kappa);
  const double rhs_val =
      (beta_c * beta_c * tm * tm +
       beta_c * p.epsilon * ((2.0 - p.lambda_v) * p.t_prime + p.mu) *
           p.sigma +
       p.epsilon * p.epsilon * p.t_prime * p.sigma * (p.sigma + p.mu)) /
      det;
  return lhs > rhs_val;
}

namespace {

struct EndemicAlgebra {
  double g = 0;
  double vden = 0;  // epsilon I + (t' + mu) + alpha2 g
  double z = 0;
  double s = 0;
  double v = 0;
};

EndemicAlgebra endemic_algebra(const ModelParams& p, double i_value) {
  EndemicAlgebra alg;
  const double c = p.phi / p.omega * i_value;
  alg.g = response_g(c, p.kappa, p.n);
  alg.vden = p.epsilon * i_value + (p.t_prime + p.mu) + p.alpha2 * alg.g;
  alg.z = (p.beta * i_value + p.sigma + p.alpha1 * alg.g + p.mu) * alg.vden -
          (1.0 - p.lambda_v) * p.t_prime * p.sigma;
  if (alg.z <= 0.0)
    throw SingularityError(
        "endemic elimination: denominator Z is nonpositive at I = " +
        std::to_string(i_value));
  alg.s = p.Lambda * alg.vden / alg.z;
  alg.v = p.sigma * alg.s / alg.vden;
  return alg;
}

StateVector endemic_state_at(const ModelParams& p, double i_value) {
  const EndemicAlgebra alg = endemic_algebra(p, i_value);
  StateVector st;
  st.S = alg.s;
  st.E = (p.delta + p.d + p.mu) * i_value / p.xi;
  st.I = i_value;
  st.V = alg.v;
  st.R = (p.delta * i_value + p.lambda_v * p.t_prime * alg.v) / p.mu;
  st.C = p.phi / p.omega * i_value;
  return st;
}

}  // namespace

double endemic_polynomial_value(const ModelParams& p, double i_value) {
  if (!std::isfinite(i_value) || i_value < 0.0)
    throw InvalidParameterError(
        "endemic_polynomial_value: I must be finite and nonnegative");
  const EndemicAlgebra alg = endemic_algebra(p, i_value);
  const double ratio = p.phi / p.omega;
  const double cn_plus_kappa =
      std::pow(ratio, p.n) * std::pow(i_value, p.n) + p.kappa;
  // pow(I, n-1) is 1 at I = 0 for n = 1, which is the correct limit of
  // g(C)/I there.
  const double env = (p.alpha1 * alg.s + p.alpha2 * alg.v) *
                     std::pow(ratio, p.n) * std::pow(i_value, p.n - 1) /
                     cn_plus_kappa;
  const double reduced = p.beta * alg.s + p.epsilon * alg.v -
                         (p.xi + p.mu) * (p.delta + p.d + p.mu) / p.xi + env;
  return reduced * alg.z * alg.vden * cn_plus_kappa;
}

namespace {

double bisect_root(const ModelParams& p, double lo, double hi, double f_lo) {
  // f has opposite signs at lo and hi; narrow to 1e-12 relative.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-12 * mid) return mid;
    const double f_mid = endemic_polynomial_value(p, mid);
    if (f_mid == 0.0) return mid;
    if ((f_lo < 0.0) == (f_mid < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double newton_polish(const ModelParams& p, double root, double lo,
                     double hi) {
  for (int it = 0; it < 4; ++it) {
    const double h = 1e-7 * std::max(root, 1.0);
    const double f = endemic_polynomial_value(p, root);
    const double fp = (endemic_polynomial_value(p, root + h) -
                       endemic_polynomial_value(p, root - h)) /
                      (2.0 * h);
    if (fp == 0.0) break;
    const double next = root - f / fp;
    if (!std::isfinite(next) || next <= lo || next >= hi) break;
    if (std::abs(next - root) <= 1e-15 * root) return next;
    root = next;
  }
  return root;
}

}  // namespace

std::vector<EndemicState> endemic_steady_states(const ModelParams& p) {
  const double i_max = 1.01 * p.Lambda / p.mu;
  const double i_min = 1e-14 * i_max;
  const int grid_points = 10000;

  std::vector<double> roots;
  double prev_i = i_min;
  double prev_f = endemic_polynomial_value(p, i_min);
  const double log_ratio = std::log(i_max / i_min);
  for (int k = 1; k <= grid_points; ++k) {
    const double cur_i =
        i_min * std::exp(log_ratio * k / static_cast<double>(grid_points));
    const double cur_f = endemic_polynomial_value(p, cur_i);
    if (prev_f == 0.0) {
      roots.push_back(prev_i);
    } else if (cur_f != 0.0 && (prev_f < 0.0) != (cur_f < 0.0)) {
      double r = bisect_root(p, prev_i, cur_i, prev_f);
      r = newton_polish(p, r, prev_i, cur_i);
      roots.push_back(r);
    }
    prev_i = cur_i;
    prev_f = cur_f;
  }
  if (prev_f == 0.0) roots.push_back(prev_i);

  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) {
                            return b - a <= 1e-9 * std::max(a, b);
                          }),
              roots.end());

  std::vector<EndemicState> out;
  out.reserve(roots.size());
  for (double r : roots) {
    EndemicState es;
    es.i_root = r;
    es.state = endemic_state_at(p, r);
    const StateVector deriv = rhs(es.state, p);
    double num = 0.0, den = 0.0;
    for (double x : deriv.to_array()) num += x * x;
    for (double x : es.state.to_array()) den += x * x;
    es.residual = std::sqrt(num) / std::sqrt(den);
    if (!(es.residual <= 1e-8))
      throw ConvergenceError(
          "endemic_steady_states: root polish failed, residual " +
          std::to_string(es.residual) + " at I = " + std::to_string(r));
    const Eigen::EigenSolver<Matrix6> solver(jacobian_at(es.state, p));
    es.jac_max_real = solver.eigenvalues().real().maxCoeff();
    out.push_back(std::move(es));
  }
  return out;
}

std::vector<BranchRow> bifurcation_scan(const ModelParams& p, double beta_min,
                                        double beta_max, int steps) {
  if (!(beta_min > 0.0) || !(beta_max >= beta_min))
    throw InvalidParameterError(
        "bifurcation_scan: beta range must be positive with max >= min");
  if (steps < 2)
    throw InvalidParameterError("bifurcation_scan: steps must be >= 2");
  std::vector<BranchRow> rows;
  rows.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    const double beta =
        beta_min + (beta_max - beta_min) * k / static_cast<double>(steps - 1);
    const ModelParams pk = p.with("beta", beta);
    BranchRow row;
    row.beta = beta;
    row.r0 = r0(pk);
    row.states = endemic_steady_states(pk);
    rows.push_back(std::move(row));
  }
  return rows;
}

BifurcationReport bifurcation_report(const ModelParams& p) {
  BifurcationReport rep;
  rep.beta_star = beta_star(p);
  rep.backward = backward_condition(p);
  if (!rep.beta_star) return rep;
  auto [w, v] = criticality_eigenvectors(p);
  rep.w = w;
  rep.v = v;
  auto [a, b] = normal_form_coefficients(p);
  rep.a = a;
  rep.b = b;
  // Scale reference for the degeneracy cutoff: the terms summed into a.
  const StateVector dfs = disease_free_state(p);
  const double dg0 = response_g_dC_at_zero(p.kappa, p.n);
  const double d2g0 = response_g_d2C_at_zero(p.kappa, p.n);
  const double scale =
      2.0 * (std::abs(w(0) * w(2) * *rep.beta_star) +
             std::abs(w(2) * w(3) * p.epsilon) +
             std::abs((p.alpha1 * w(0) + p.alpha2 * w(3)) * w(5) * dg0) +
             std::abs((p.alpha1 * dfs.S + p.alpha2 * dfs.V) * w(5) * w(5) *
                      d2g0));
  if (std::abs(rep.a) <= 1e-12 * scale)
    rep.regime = Regime::degenerate;
  else
    rep.regime = rep.a > 0.0 ? Regime::backward : Regime::forward;
  return rep;
}

void write_branch_csv(const std::vector<BranchRow>& rows,
                      const std::string& path) {
  std::string body = "beta,R0,root_index,I,S,E,V,R,C,stable_hint\n";
  for (const BranchRow& row : rows) {
    if (row.states.empty()) {
      body += io::format_double(row.beta);
      body += ',';
      body += io::format_double(row.r0);
      body += ",0,,,,,,,none\n";
      continue;
    }
    for (std::size_t k = 0; k < row.states.size(); ++k) {
      const EndemicState& es = row.states[k];
      body += io::format_double(row.beta);
      body += ',';
      body += io::format_double(row.r0);
      body += ',';
      body += std::to_string(k + 1);
      for (double x : {es.i_root, es.state.S, es.state.E, es.state.V,
                       es.state.R, es.state.C}) {
        body += ',';
        body += io::format_double(x);
      }
      body += ',';
      body += es.jac_max_real < 0.0 ? "stable" : "unstable";
      body += '\n';
    }
  }
  io::write_file_atomic(path, body);
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::forward:
      return "forward";
    case Regime::backward:
      return "backward";
    default:
      return "degenerate";
  }
}

}  // namespace sveirc
