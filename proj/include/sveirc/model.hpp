#pragma once

#include "sveirc/params.hpp"

namespace sveirc {

// Saturating uptake response C^n / (C^n + kappa). Safe for very large C
// (evaluated in log space once C^n would overflow) and exact at C = 0.
double response_g(double C, double kappa, int n);

// dg/dC at arbitrary C >= 0.
double response_g_dC(double C, double kappa, int n);

// First and second derivatives of g at C = 0. The Hill exponent decides
// which of them vanish: g'(0) = 1/kappa only for n = 1, and g''(0) is
// -2/kappa^2 for n = 1, 2/kappa for n = 2, zero beyond.
double response_g_dC_at_zero(double kappa, int n);
double response_g_d2C_at_zero(double kappa, int n);

// Time derivative of every compartment at the given state. The state must
// be finite and nonnegative.
StateVector rhs(const StateVector& state, const ModelParams& p);

namespace detail {

// rhs with the response value supplied by the caller; the integrator uses
// this to keep stage evaluations defined when C dips below zero by a
// rounding-level amount.
StateVector rhs_with_response(const StateVector& state, const ModelParams& p,
                              double g);

}  // namespace detail

}  // namespace sveirc
