#include "sveirc/sensitivity.hpp"

#include <algorithm>
#include <cmath>

#include "sveirc/equilibria.hpp"
#include "sveirc/errors.hpp"
#include "sveirc/io.hpp"

namespace sveirc {

double sensitivity_index(const ModelParams& p, std::string_view name) {
  const double value = p.get(name);  // validates the name
  const double base = r0(p);
  if (base == 0.0 || !std::isfinite(base))
    throw Error("sensitivity_index: R0 is zero or not finite here");
  if (value == 0.0) return 0.0;
  const double h = 1e-6;
  const double up = r0(p.with(name, value * (1.0 + h)));
  const double down = r0(p.with(name, value * (1.0 - h)));
  return (up - down) / (2.0 * h * base);
}

SensitivityTable sensitivity_table(const ModelParams& p) {
  SensitivityTable table;
  table.n = p.n;
  table.params = p;
  for (std::string_view name : ModelParams::scalar_names())
    table.entries.emplace_back(std::string(name), sensitivity_index(p, name));
  return table;
}

namespace {

std::string rows_csv(const std::vector<std::pair<std::string, double>>& rows) {
  std::string body = "parameter,index\n";
  for (const auto& [name, index] : rows) {
    body += name;
    body += ',';
    body += io::format_double(index);
    body += '\n';
  }
  return body;
}

}  // namespace

void write_sensitivity_csv(const SensitivityTable& table,
                           const std::string& path) {
  io::write_file_atomic(path, rows_csv(table.entries));
}

void write_tornado_csv(const SensitivityTable& table,
                       const std::string& path) {
  auto rows = table.entries;
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::abs(a.second) > std::abs(b.second);
  });
  io::write_file_atomic(path, rows_csv(rows));
}

}  // namespace sveirc
