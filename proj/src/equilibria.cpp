#include "sveirc/equilibria.hpp"

#include <cmath>

#include "sveirc/errors.hpp"
#include "sveirc/model.hpp"

namespace sveirc {

StateVector disease_free_state(const ModelParams& p) {
  const double denom = p.mu * (p.sigma + p.t_prime + p.mu) +
                       p.lambda_v * p.t_prime * p.sigma;
  StateVector s;
  s.S = p.Lambda * (p.t_prime + p.mu) / denom;
  s.V = p.Lambda * p.sigma / denom;
  s.R = p.lambda_v * p.t_prime * p.Lambda * p.sigma / (p.mu * denom);
  return s;
}

Matrix6 jacobian_at(const StateVector& s, const ModelParams& p) {
  const double g = response_g(s.C, p.kappa, p.n);
  const double gp = response_g_dC(s.C, p.kappa, p.n);
  Matrix6 j = Matrix6::Zero();
  j(0, 0) = -p.beta * s.I - p.sigma - p.alpha1 * g - p.mu;
  j(0, 2) = -p.beta * s.S;
  j(0, 3) = (1.0 - p.lambda_v) * p.t_prime;
  j(0, 5) = -p.alpha1 * s.S * gp;
  j(1, 0) = p.beta * s.I + p.alpha1 * g;
  j(1, 1) = -(p.xi + p.mu);
  j(1, 2) = p.beta * s.S + p.epsilon * s.V;
  j(1, 3) = p.epsilon * s.I + p.alpha2 * g;
  j(1, 5) = (p.alpha1 * s.S + p.alpha2 * s.V) * gp;
  j(2, 1) = p.xi;
  j(2, 2) = -(p.delta + p.d + p.mu);
  j(3, 0) = p.sigma;
  j(3, 2) = -p.epsilon * s.V;
  j(3, 3) = -p.epsilon * s.I - (p.t_prime + p.mu) - p.alpha2 * g;
  j(3, 5) = -p.alpha2 * s.V * gp;
  j(4, 2) = p.delta;
  j(4, 3) = p.lambda_v * p.t_prime;
  j(4, 4) = -p.mu;
  j(5, 2) = p.phi;
  j(5, 5) = -p.omega;
  return j;
}

RouthHurwitz routh_hurwitz(const ModelParams& p) {
  const Matrix6 j = jacobian_at(disease_free_state(p), p);
  // Infected block: rows/columns E, I, C = indices 1, 2, 5.
  const double j22 = j(1, 1), j23 = j(1, 2), j26 = j(1, 5);
  const double j32 = j(2, 1), j33 = j(2, 2);
  const double j63 = j(5, 2), j66 = j(5, 5);
  RouthHurwitz rh;
  rh.a1 = -j22 - j33 - j66;
  rh.a2 = j22 * j33 - j23 * j32 + j66 * (j22 + j33);
  rh.a3 = -j22 * j33 * j66 + j32 * (j23 * j66 - j63 * j26);
  rh.stable_block = rh.a1 > 0.0 && rh.a1 * rh.a2 > rh.a3 && rh.a3 > 0.0;
  return rh;
}

std::pair<Matrix3, Matrix3> next_generation_matrices(const ModelParams& p) {
  const StateVector dfs = disease_free_state(p);
  Matrix3 f = Matrix3::Zero();
  f(0, 1) = p.beta * dfs.S + p.epsilon * dfs.V;
  f(0, 2) = (p.alpha1 * dfs.S + p.alpha2 * dfs.V) *
            response_g_dC_at_zero(p.kappa, p.n);
  Matrix3 v = Matrix3::Zero();
  v(0, 0) = p.xi + p.mu;
  v(1, 0) = -p.xi;
  v(1, 1) = p.delta + p.d + p.mu;
  v(2, 1) = -p.phi;
  v(2, 2) = p.omega;
  return {f, v};
}

double r0(const ModelParams& p) {
  const StateVector dfs = disease_free_state(p);
  const double dg0 = response_g_dC_at_zero(p.kappa, p.n);
  const double env1 = p.alpha1 * p.phi * dg0 / p.omega;
  const double env2 = p.alpha2 * p.phi * dg0 / p.omega;
  return p.xi * dfs.S / ((p.xi + p.mu) * (p.mu + p.delta + p.d)) *
         (p.beta + env1 +
          (p.epsilon + env2) * p.sigma / (p.t_prime + p.mu));
}

VaccinationTrend vaccination_trend(const ModelParams& p) {
  const double dg0 = response_g_dC_at_zero(p.kappa, p.n);
  const double b = p.epsilon * p.omega + p.alpha2 * p.phi * dg0;
  const double c =
      (p.mu + p.t_prime) * (p.omega * p.beta + p.alpha1 * p.phi * dg0);
  const double dd = p.mu + p.lambda_v * p.t_prime;
  const double e = p.mu * (p.mu + p.t_prime);
  VaccinationTrend out;
  out.be_minus_cd = b * e - c * dd;
  out.sign = (out.be_minus_cd > 0.0) - (out.be_minus_cd < 0.0);
  return out;
}

EquilibriumReport equilibrium_report(const ModelParams& p) {
  EquilibriumReport rep;
  rep.dfs = disease_free_state(p);
  rep.jacobian = jacobian_at(rep.dfs, p);
  rep.routh_hurwitz = routh_hurwitz(p);
  auto [f, v] = next_generation_matrices(p);
  rep.ngm_f = f;
  rep.ngm_v = v;
  rep.r0 = r0(p);
  const Eigen::EigenSolver<Matrix6> es(rep.jacobian);
  rep.dominant_eig_real = es.eigenvalues().real().maxCoeff();
  if (rep.r0 < 1.0 - 1e-12)
    rep.verdict = Verdict::stable;
  else if (rep.r0 > 1.0 + 1e-12)
    rep.verdict = Verdict::unstable;
  else
    rep.verdict = Verdict::marginal;
  rep.stable = rep.verdict == Verdict::stable;
  return rep;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::stable:
      return "stable";
    case Verdict::unstable:
      return "unstable";
    default:
      return "marginal";
  }
}

}  // namespace sveirc
