#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sveirc/equilibria.hpp"
#include "sveirc/params.hpp"

namespace sveirc {

enum class Regime { forward, backward, degenerate };

// Criticality data at the transcritical point beta = beta_star. When no
// positive critical contact rate exists, beta_star is empty and the
// remaining fields are not meaningful.
struct BifurcationReport {
  std::optional<double> beta_star;
  Vector6 w = Vector6::Zero();  // right kernel vector, w2 = 1
  Vector6 v = Vector6::Zero();  // left kernel vector, v2 = 1
  double a = 0;
  double b = 0;
  bool backward = false;
  Regime regime = Regime::forward;
};

// One endemic equilibrium, reconstructed from a positive root I of the
// endemic polynomial.
struct EndemicState {
  StateVector state;
  double i_root = 0;
  double residual = 0;       // ||rhs(state)|| / ||state||
  double jac_max_real = 0;   // largest real part over Jacobian eigenvalues
};

struct BranchRow {
  double beta = 0;
  double r0 = 0;
  std::vector<EndemicState> states;
};

// The contact rate with R0 = 1, all other parameters held fixed; empty when
// the defining expression is nonpositive (no admissible critical rate).
std::optional<double> beta_star(const ModelParams& p);

// Right and left kernel vectors of the Jacobian at (DFS, beta_star), from
// the closed forms, normalized to w2 = v2 = 1. Throws NoCriticalBetaError
// when beta_star is empty.
std::pair<Vector6, Vector6> criticality_eigenvectors(const ModelParams& p);

// Normal-form coefficients (a, b) at the transcritical point. The sign of a
// decides the bifurcation direction; b is positive at any admissible
// parameter set. w2_scale and v2_scale rescale the eigenvector
// normalizations; signs are invariant under positive rescaling.
std::pair<double, double> normal_form_coefficients(const ModelParams& p,
                                                   double w2_scale = 1.0,
                                                   double v2_scale = 1.0);

// Closed-form backward-bifurcation criterion. Only n = 2 can produce a
// backward bifurcation; for every other exponent this is false.
bool backward_condition(const ModelParams& p);

// Value of the endemic polynomial p(I): the scalar equation left after
// eliminating S, E, V, R, C in terms of I, cleared of its denominators.
// Positive roots are in one-to-one correspondence with endemic equilibria.
double endemic_polynomial_value(const ModelParams& p, double i_value);

// All endemic equilibria: sign-scan on a log grid over (0, I_max] with
// I_max = 1.01 Lambda/mu, bisection, then Newton polish. Each root is
// expanded to a full state and verified against rhs.
std::vector<EndemicState> endemic_steady_states(const ModelParams& p);

// Equilibria along a uniform beta grid (steps >= 2, endpoints included).
std::vector<BranchRow> bifurcation_scan(const ModelParams& p, double beta_min,
                                        double beta_max, int steps);

BifurcationReport bifurcation_report(const ModelParams& p);

// Header beta,R0,root_index,I,S,E,V,R,C,stable_hint; one row per root,
// root_index counting from 1 per beta; a beta without endemic states gets a
// single row with root_index 0 and empty state columns.
void write_branch_csv(const std::vector<BranchRow>& rows,
                      const std::string& path);

const char* regime_name(Regime r);

}  // namespace sveirc
