#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace sveirc {

// Scalar rates of the six-compartment model. All rates are per day; beta and
// epsilon are per contact per day, phi is virus copies shed per infectious
// individual per day, kappa is in copies^n.
struct ModelParams {
  double Lambda = 0;    // recruitment into the susceptible class
  double beta = 0;      // contact transmission rate, susceptible
  double sigma = 0;     // vaccination rate
  double lambda_v = 0;  // vaccine efficacy, fraction in [0, 1]
  double t_prime = 0;   // inverse mean waiting time in the vaccinated class
  double alpha1 = 0;    // environmental transmission rate, susceptible
  double alpha2 = 0;    // environmental transmission rate, vaccinated
  double epsilon = 0;   // contact transmission rate, vaccinated
  double mu = 0;        // natural death rate
  double xi = 0;        // progression rate from exposed to infectious
  double delta = 0;     // recovery rate
  double d = 0;         // disease-induced death rate
  double phi = 0;       // virus shedding rate into the environment
  double omega = 0;     // environmental virus decay rate
  double kappa = 0;     // half-saturation constant of the uptake response
  int n = 1;            // Hill exponent of the uptake response

  // Checks hard invariants (throws InvalidParameterError) and returns
  // human-readable warnings for the soft biological assumptions
  // epsilon <= beta and alpha2 <= alpha1.
  std::vector<std::string> validate() const;

  // Value of a named scalar field. Unknown names throw.
  double get(std::string_view name) const;

  // Copy with one named scalar field replaced. Unknown names throw.
  ModelParams with(std::string_view name, double value) const;

  // Names of the 15 scalar fields, in canonical order (excludes n).
  static const std::array<std::string_view, 15>& scalar_names();
};

// Compartment values at one instant. S, E, I, V, R count individuals,
// C counts virus copies in the environment.
struct StateVector {
  double S = 0;
  double E = 0;
  double I = 0;
  double V = 0;
  double R = 0;
  double C = 0;

  std::array<double, 6> to_array() const { return {S, E, I, V, R, C}; }

  static StateVector from_array(const std::array<double, 6>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5]};
  }
};

// Living population N = S + E + I + V + R (the environment is excluded).
double total_population(const StateVector& s);

}  // namespace sveirc
