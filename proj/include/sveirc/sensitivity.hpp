#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sveirc/params.hpp"

namespace sveirc {

struct SensitivityTable {
  // parameter name -> elasticity, canonical scalar order preserved.
  std::vector<std::pair<std::string, double>> entries;
  int n = 1;
  ModelParams params;
};

// Normalized sensitivity (elasticity) of the reproduction number:
// (P/R0) dR0/dP, central finite difference with relative step 1e-6. A
// parameter whose current value is zero has elasticity zero by definition.
// Throws on unknown names and when R0 = 0.
double sensitivity_index(const ModelParams& p, std::string_view name);

// Elasticities for all 15 scalar parameters.
SensitivityTable sensitivity_table(const ModelParams& p);

// CSV "parameter,index" in canonical order.
void write_sensitivity_csv(const SensitivityTable& table,
                           const std::string& path);

// Same rows ordered by decreasing |index|, ready for a tornado plot.
void write_tornado_csv(const SensitivityTable& table, const std::string& path);

}  // namespace sveirc
