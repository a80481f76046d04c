#include "sveirc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

#include "sveirc/errors.hpp"

namespace sveirc::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc())
    throw IoError("format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() /
                       (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot move '" + tmp.string() + "' to '" + path +
                  "': " + ec.message());
  }
}

namespace {

json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object())
    throw SchemaError("'" + path + "' must hold a JSON object");
  return j;
}

double number_at(const json& j, const std::string& key,
                 const std::string& path) {
  const json& v = j.at(key);
  if (!v.is_number())
    throw SchemaError("'" + path + "': key '" + key + "' must be a number");
  return v.get<double>();
}

void check_keys(const json& j, const std::vector<std::string>& required,
                const std::string& path) {
  std::string missing;
  for (const std::string& key : required)
    if (!j.contains(key)) missing += missing.empty() ? key : ", " + key;
  if (!missing.empty())
    throw SchemaError("'" + path + "': missing keys: " + missing);
  for (const auto& [key, value] : j.items())
    if (std::find(required.begin(), required.end(), key) == required.end())
      throw SchemaError("'" + path + "': unknown key '" + key + "'");
}

}  // namespace

ModelParams load_params(const std::string& path,
                        std::vector<std::string>* warnings) {
  const json j = parse_json_file(path);
  std::vector<std::string> keys;
  for (std::string_view name : ModelParams::scalar_names())
    keys.emplace_back(name);
  keys.emplace_back("n");
  check_keys(j, keys, path);

  ModelParams p;
  for (std::string_view name : ModelParams::scalar_names())
    p = p.with(name, number_at(j, std::string(name), path));
  const json& n_val = j.at("n");
  if (!n_val.is_number_integer())
    throw SchemaError("'" + path + "': key 'n' must be an integer");
  p.n = n_val.get<int>();

  const std::vector<std::string> warn = p.validate();
  if (warnings)
    warnings->insert(warnings->end(), warn.begin(), warn.end());
  return p;
}

StateVector load_initial_state(const std::string& path) {
  const json j = parse_json_file(path);
  check_keys(j, {"S", "E", "I", "V", "R", "C"}, path);
  StateVector s;
  s.S = number_at(j, "S", path);
  s.E = number_at(j, "E", path);
  s.I = number_at(j, "I", path);
  s.V = number_at(j, "V", path);
  s.R = number_at(j, "R", path);
  s.C = number_at(j, "C", path);
  for (double v : s.to_array())
    if (!std::isfinite(v) || v < 0.0)
      throw SchemaError("'" + path +
                        "': state components must be finite and >= 0");
  return s;
}

ObservedSeries load_observed_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw SchemaError("'" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "day,vaccinated")
    throw SchemaError("'" + path + "': expected header 'day,vaccinated'");
  ObservedSeries data;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw SchemaError("'" + path + "' line " + std::to_string(line_no) +
                        ": expected 'day,vaccinated'");
    try {
      data.day_index.push_back(std::stoi(line.substr(0, comma)));
      data.vaccinated.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw SchemaError("'" + path + "' line " + std::to_string(line_no) +
                        ": malformed number");
    }
  }
  data.validate();
  return data;
}

void write_observed_csv(const ObservedSeries& data, const std::string& path) {
  std::string body = "day,vaccinated\n";
  for (std::size_t i = 0; i < data.day_index.size(); ++i) {
    body += std::to_string(data.day_index[i]);
    body += ',';
    body += format_double(data.vaccinated[i]);
    body += '\n';
  }
  write_file_atomic(path, body);
}

FitConfig load_fit_config(const std::string& path) {
  const json j = parse_json_file(path);
  static const std::vector<std::string> known = {
      "free", "guess", "bounds", "max_iter", "seed", "difference"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw SchemaError("'" + path + "': unknown key '" + key + "'");

  FitConfig cfg;
  if (j.contains("free")) {
    if (!j.at("free").is_array())
      throw SchemaError("'" + path + "': 'free' must be an array of names");
    for (const json& name : j.at("free")) {
      if (!name.is_string())
        throw SchemaError("'" + path + "': 'free' entries must be strings");
      cfg.options.free_names.push_back(name.get<std::string>());
    }
  }
  if (j.contains("guess")) {
    if (!j.at("guess").is_array())
      throw SchemaError("'" + path + "': 'guess' must be an array of numbers");
    for (const json& v : j.at("guess")) {
      if (!v.is_number())
        throw SchemaError("'" + path + "': 'guess' entries must be numbers");
      cfg.guess.push_back(v.get<double>());
    }
  }
  if (j.contains("bounds")) {
    if (!j.at("bounds").is_array())
      throw SchemaError("'" + path + "': 'bounds' must be an array of pairs");
    for (const json& pair : j.at("bounds")) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
          !pair[1].is_number())
        throw SchemaError("'" + path +
                          "': each bound must be a [lo, hi] number pair");
      cfg.options.bounds.emplace_back(pair[0].get<double>(),
                                      pair[1].get<double>());
    }
  }
  if (j.contains("max_iter")) {
    if (!j.at("max_iter").is_number_integer() ||
        j.at("max_iter").get<int>() < 1)
      throw SchemaError("'" + path + "': 'max_iter' must be an integer >= 1");
    cfg.max_iter = j.at("max_iter").get<int>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer())
      throw SchemaError("'" + path + "': 'seed' must be an integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("difference")) {
    if (!j.at("difference").is_boolean())
      throw SchemaError("'" + path + "': 'difference' must be a boolean");
    cfg.options.difference_data = j.at("difference").get<bool>();
  }
  return cfg;
}

namespace {

json state_json(const StateVector& s) {
  return json{{"S", s.S}, {"E", s.E}, {"I", s.I},
              {"V", s.V}, {"R", s.R}, {"C", s.C}};
}

json matrix_json(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector6& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

std::string params_json(const ModelParams& p) {
  json j;
  for (std::string_view name : ModelParams::scalar_names())
    j[std::string(name)] = p.get(name);
  j["n"] = p.n;
  return j.dump(2) + "\n";
}

std::string equilibrium_report_json(const EquilibriumReport& rep) {
  json j;
  j["dfs"] = state_json(rep.dfs);
  j["jacobian"] = matrix_json(rep.jacobian);
  j["routh_hurwitz"] = {{"a1", rep.routh_hurwitz.a1},
                        {"a2", rep.routh_hurwitz.a2},
                        {"a3", rep.routh_hurwitz.a3},
                        {"stable_block", rep.routh_hurwitz.stable_block}};
  j["ngm_f"] = matrix_json(rep.ngm_f);
  j["ngm_v"] = matrix_json(rep.ngm_v);
  j["r0"] = rep.r0;
  j["dominant_eig_real"] = rep.dominant_eig_real;
  j["verdict"] = verdict_name(rep.verdict);
  j["stable"] = rep.stable;
  return j.dump(2) + "\n";
}

std::string bifurcation_report_json(const BifurcationReport& rep) {
  json j;
  if (rep.beta_star) {
    j["beta_star"] = *rep.beta_star;
    j["w"] = vector_json(rep.w);
    j["v"] = vector_json(rep.v);
    j["a"] = rep.a;
    j["b"] = rep.b;
    j["regime"] = regime_name(rep.regime);
  } else {
    j["beta_star"] = nullptr;
  }
  j["backward"] = rep.backward;
  return j.dump(2) + "\n";
}

std::string fit_result_json(const FitResult& result) {
  json j;
  json fitted = json::object();
  for (std::size_t i = 0; i < result.names.size(); ++i)
    fitted[result.names[i]] = result.fitted[i];
  j["fitted"] = fitted;
  j["objective"] = result.objective;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["residual_history"] = result.residual_history;
  return j.dump(2) + "\n";
}

std::string sensitivity_table_json(const SensitivityTable& table) {
  json entries = json::object();
  for (const auto& [name, value] : table.entries) entries[name] = value;
  json j;
  j["n"] = table.n;
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

}  // namespace sveirc::io
