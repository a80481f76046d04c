#pragma once

#include <Eigen/Dense>
#include <utility>

#include "sveirc/params.hpp"

namespace sveirc {

using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Matrix3 = Eigen::Matrix<double, 3, 3>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

enum class Verdict { stable, unstable, marginal };

// Routh-Hurwitz data for the infected block (E, I, C rows and columns) of
// the Jacobian at the disease-free state.
struct RouthHurwitz {
  double a1 = 0;
  double a2 = 0;
  double a3 = 0;
  bool stable_block = false;
};

// Sign of the derivative of the reproduction number with respect to the
// vaccination rate. R0(sigma) is a Mobius function A (B sigma + C)/(D sigma
// + E); the sign of dR0/dsigma equals the sign of BE - CD for every sigma.
struct VaccinationTrend {
  double be_minus_cd = 0;
  int sign = 0;  // -1, 0, +1
};

struct EquilibriumReport {
  StateVector dfs;
  Matrix6 jacobian;
  RouthHurwitz routh_hurwitz;
  Matrix3 ngm_f;
  Matrix3 ngm_v;
  double r0 = 0;
  double dominant_eig_real = 0;
  Verdict verdict = Verdict::marginal;
  bool stable = false;
};

// Disease-free state in closed form: E = I = C = 0 and S, V, R set by the
// balance of recruitment, vaccination and waning.
StateVector disease_free_state(const ModelParams& p);

// Jacobian of the right-hand side at an arbitrary nonnegative state,
// ordered (S, E, I, V, R, C).
Matrix6 jacobian_at(const StateVector& s, const ModelParams& p);

// Routh-Hurwitz coefficients of the infected block at the disease-free
// state; stable_block requires a1 > 0, a1 a2 > a3 and a3 > 0.
RouthHurwitz routh_hurwitz(const ModelParams& p);

// New-infection matrix F and transition matrix V of the next-generation
// decomposition, on the infected coordinates (E, I, C).
std::pair<Matrix3, Matrix3> next_generation_matrices(const ModelParams& p);

// Basic reproduction number, in closed form.
double r0(const ModelParams& p);

VaccinationTrend vaccination_trend(const ModelParams& p);

// Full report; the verdict uses a 1e-12 tolerance around R0 = 1.
EquilibriumReport equilibrium_report(const ModelParams& p);

const char* verdict_name(Verdict v);

}  // namespace sveirc
