#include "sveirc/model.hpp"

#include <cmath>

#include "sveirc/errors.hpp"

namespace sveirc {

const std::array<std::string_view, 15>& ModelParams::scalar_names() {
  static const std::array<std::string_view, 15> names = {
      "Lambda", "beta",    "sigma", "lambda_v", "t_prime",
      "alpha1", "alpha2",  "epsilon", "mu",     "xi",
      "delta",  "d",       "phi",   "omega",    "kappa"};
  return names;
}

namespace {

double* field_ptr(ModelParams& p, std::string_view name) {
  if (name == "Lambda") return &p.Lambda;
  if (name == "beta") return &p.beta;
  if (name == "sigma") return &p.sigma;
  if (name == "lambda_v") return &p.lambda_v;
  if (name == "t_prime") return &p.t_prime;
  if (name == "alpha1") return &p.alpha1;
  if (name == "alpha2") return &p.alpha2;
  if (name == "epsilon") return &p.epsilon;
  if (name == "mu") return &p.mu;
  if (name == "xi") return &p.xi;
  if (name == "delta") return &p.delta;
  if (name == "d") return &p.d;
  if (name == "phi") return &p.phi;
  if (name == "omega") return &p.omega;
  if (name == "kappa") return &p.kappa;
  throw InvalidParameterError("unknown parameter name: " + std::string(name));
}

}  // namespace

double ModelParams::get(std::string_view name) const {
  return *field_ptr(const_cast<ModelParams&>(*this), name);
}

ModelParams ModelParams::with(std::string_view name, double value) const {
  ModelParams copy = *this;
  *field_ptr(copy, name) = value;
  return copy;
}

std::vector<std::string> ModelParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0)
      throw InvalidParameterError(std::string(name) +
                                  " must be finite and strictly positive");
  };
  auto nonnegative = [](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0)
      throw InvalidParameterError(std::string(name) +
                                  " must be finite and nonnegative");
  };
  positive(Lambda, "Lambda");
  positive(beta, "beta");
  positive(t_prime, "t_prime");
  positive(epsilon, "epsilon");
  positive(mu, "mu");
  positive(xi, "xi");
  positive(delta, "delta");
  positive(phi, "phi");
  positive(omega, "omega");
  positive(kappa, "kappa");
  nonnegative(sigma, "sigma");
  nonnegative(alpha1, "alpha1");
  nonnegative(alpha2, "alpha2");
  nonnegative(d, "d");
  if (!std::isfinite(lambda_v) || lambda_v < 0.0 || lambda_v > 1.0)
    throw InvalidParameterError("lambda_v must lie in [0, 1]");
  if (n < 1) throw InvalidParameterError("n must be an integer >= 1");

  std::vector<std::string> warnings;
  if (epsilon > beta)
    warnings.push_back(
        "epsilon > beta: vaccinated individuals catch the disease by contact "
        "more easily than unvaccinated ones");
  if (alpha2 > alpha1)
    warnings.push_back(
        "alpha2 > alpha1: vaccinated individuals catch the disease from the "
        "environment more easily than unvaccinated ones");
  return warnings;
}

double total_population(const StateVector& s) {
  return s.S + s.E + s.I + s.V + s.R;
}

namespace {

void check_response_args(double C, double kappa, int n) {
  if (!std::isfinite(kappa) || kappa <= 0.0)
    throw InvalidParameterError("response: kappa must be strictly positive");
  if (n < 1) throw InvalidParameterError("response: n must be >= 1");
  if (!std::isfinite(C) || C < 0.0)
    throw InvalidParameterError("response: C must be finite and nonnegative");
}

}  // namespace

double response_g(double C, double kappa, int n) {
  check_response_args(C, kappa, n);
  if (C == 0.0) return 0.0;
  const double log_cn = n * std::log(C);
  // Past this point C^n overflows a double; use g = 1 - kappa / (C^n + kappa)
  // with C^n + kappa ~= C^n.
  if (log_cn > 700.0) return 1.0 - kappa * std::exp(-log_cn);
  const double cn = std::exp(log_cn);
  return cn / (cn + kappa);
}

double response_g_dC(double C, double kappa, int n) {
  check_response_args(C, kappa, n);
  if (C == 0.0) return response_g_dC_at_zero(kappa, n);
  const double log_cn = n * std::log(C);
  // (C^n + kappa)^2 overflows before C^n does; switch to the tail expansion
  // n kappa / C^(n+1) while both forms still agree to ~1e-140.
  if (log_cn > 350.0)
    return n * kappa * std::exp(-(n + 1) * std::log(C));
  const double cn = std::exp(log_cn);
  const double denom = cn + kappa;
  return n * kappa * std::pow(C, n - 1) / (denom * denom);
}

double response_g_dC_at_zero(double kappa, int n) {
  check_response_args(0.0, kappa, n);
  return n == 1 ? 1.0 / kappa : 0.0;
}

double response_g_d2C_at_zero(double kappa, int n) {
  check_response_args(0.0, kappa, n);
  if (n == 1) return -2.0 / (kappa * kappa);
  if (n == 2) return 2.0 / kappa;
  return 0.0;
}

namespace detail {

StateVector rhs_with_response(const StateVector& s, const ModelParams& p,
                              double g) {
  StateVector out;
  out.S = p.Lambda - p.beta * s.S * s.I - p.sigma * s.S +
          (1.0 - p.lambda_v) * p.t_prime * s.V - p.alpha1 * s.S * g -
          p.mu * s.S;
  out.E = p.beta * s.S * s.I + p.epsilon * s.I * s.V - p.xi * s.E -
          p.mu * s.E + p.alpha1 * s.S * g + p.alpha2 * s.V * g;
  out.I = p.xi * s.E - (p.delta + p.d + p.mu) * s.I;
  out.V = p.sigma * s.S - p.epsilon * s.I * s.V - (p.t_prime + p.mu) * s.V -
          p.alpha2 * s.V * g;
  out.R = p.delta * s.I - p.mu * s.R + p.lambda_v * p.t_prime * s.V;
  out.C = p.phi * s.I - p.omega * s.C;
  return out;
}

}  // namespace detail

StateVector rhs(const StateVector& s, const ModelParams& p) {
  for (double v : s.to_array()) {
    if (!std::isfinite(v))
      throw InvalidStateError("rhs: state contains NaN or Inf");
    if (v < 0.0) throw InvalidStateError("rhs: state must be nonnegative");
  }
  return detail::rhs_with_response(s, p, response_g(s.C, p.kappa, p.n));
}

}  // namespace sveirc
