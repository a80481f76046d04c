#pragma once

#include <string>
#include <vector>

#include "sveirc/bifurcation.hpp"
#include "sveirc/calibration.hpp"
#include "sveirc/equilibria.hpp"
#include "sveirc/params.hpp"
#include "sveirc/sensitivity.hpp"

namespace sveirc::io {

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

// Writes content to a temporary file beside path, then renames it into
// place, so readers never observe a half-written file.
void write_file_atomic(const std::string& path, const std::string& content);

// JSON object with exactly the ModelParams keys (the 15 scalars plus n).
// Missing keys are reported by name, unknown keys rejected, hard invariants
// enforced; soft-assumption warnings are appended to *warnings when given.
ModelParams load_params(const std::string& path,
                        std::vector<std::string>* warnings = nullptr);

// JSON object with exactly the keys S, E, I, V, R, C, all finite and >= 0.
StateVector load_initial_state(const std::string& path);

// CSV with header "day,vaccinated".
ObservedSeries load_observed_csv(const std::string& path);
void write_observed_csv(const ObservedSeries& data, const std::string& path);

// Fit configuration JSON: optional keys "free" (names), "guess" (numbers,
// aligned with free), "bounds" ([lo, hi] pairs), "max_iter", "seed",
// "difference". Returns the pieces fit() needs.
struct FitConfig {
  FitOptions options;
  std::vector<double> guess;  // empty = take values from the base params
  int max_iter = 200;
  std::uint64_t seed = 42;
};
FitConfig load_fit_config(const std::string& path);

std::string equilibrium_report_json(const EquilibriumReport& rep);
std::string bifurcation_report_json(const BifurcationReport& rep);
std::string fit_result_json(const FitResult& result);
std::string sensitivity_table_json(const SensitivityTable& table);
std::string params_json(const ModelParams& p);

}  // namespace sveirc::io
