#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "support.hpp"
#include "sveirc/equilibria.hpp"
#include "sveirc/errors.hpp"
#include "sveirc/model.hpp"
#include "sveirc/sensitivity.hpp"

using namespace sveirc;
namespace st = sveirc::testing;

namespace {

std::map<std::string, double> as_map(const SensitivityTable& t) {
  return {t.entries.begin(), t.entries.end()};
}

// Elasticities of the closed-form reproduction number, derived by hand from
// R0 = [xi S* / ((xi+mu)(mu+delta+d))] (B + E q) with q = sigma/(t'+mu),
// B = beta + a1, E = epsilon + a2, a_i = delta_1n alpha_i phi / (omega kappa).
struct HandElasticities {
  double beta, epsilon, alpha1, alpha2, delta, d, xi, lambda_v;
};

HandElasticities hand_elasticities(const ModelParams& p) {
  const double dg0 = response_g_dC_at_zero(p.kappa, p.n);
  const double a1 = p.alpha1 * p.phi * dg0 / p.omega;
  const double a2 = p.alpha2 * p.phi * dg0 / p.omega;
  const double q = p.sigma / (p.t_prime + p.mu);
  const double b_tot = (p.beta + a1) + (p.epsilon + a2) * q;
  const double delta_denom = p.mu * (p.sigma + p.t_prime + p.mu) +
                             p.lambda_v * p.t_prime * p.sigma;
  HandElasticities e;
  e.beta = p.beta / b_tot;
  e.epsilon = p.epsilon * q / b_tot;
  e.alpha1 = a1 / b_tot;
  e.alpha2 = a2 * q / b_tot;
  e.delta = -p.delta / (p.mu + p.delta + p.d);
  e.d = -p.d / (p.mu + p.delta + p.d);
  e.xi = p.mu / (p.xi + p.mu);
  e.lambda_v = -p.lambda_v * p.t_prime * p.sigma / delta_denom;
  return e;
}

}  // namespace

TEST_SUITE_BEGIN("sensitivity");

TEST_CASE("published index table, saturation exponent 1") {
  const auto idx = as_map(sensitivity_table(st::fitted_params_n1()));
  CHECK(std::abs(idx.at("beta") - 0.1276764) < 0.01);
  CHECK(std::abs(idx.at("epsilon") - 0.4754643) < 0.01);
  CHECK(std::abs(idx.at("t_prime") - (-0.7636042)) < 0.01);
  CHECK(std::abs(idx.at("lambda_v") - (-0.9897355)) < 0.01);
  CHECK(std::abs(idx.at("d") - (-0.3333038)) < 0.01);
  CHECK(std::abs(idx.at("alpha1") - 0.1020714) < 0.01);
  CHECK(std::abs(idx.at("alpha2") - 0.2947878) < 0.01);
  CHECK(std::abs(idx.at("xi") - 0.0036252) < 0.01);
  CHECK(std::abs(idx.at("delta") - (-0.6665743)) < 0.01);
  CHECK(std::abs(idx.at("sigma") - (-0.2276182)) < 0.01);

  // The rate-group indices depend only mildly on the rounding of the
  // published parameters, so they reproduce much tighter.
  CHECK(std::abs(idx.at("lambda_v") - (-0.9897355)) < 0.001);
  CHECK(std::abs(idx.at("delta") - (-0.6665743)) < 0.001);
  CHECK(std::abs(idx.at("d") - (-0.3333038)) < 0.001);
  CHECK(std::abs(idx.at("xi") - 0.0036252) < 0.001);
}

TEST_CASE("published index table, saturation exponent 2") {
  const auto idx = as_map(sensitivity_table(st::fitted_params_n2()));
  CHECK(idx.at("alpha1") == 0.0);
  CHECK(idx.at("alpha2") == 0.0);
  CHECK(std::abs(idx.at("beta") - 0.2089141) < 0.01);
  CHECK(std::abs(idx.at("epsilon") - 0.7910858) < 0.01);
  CHECK(std::abs(idx.at("t_prime") - (-0.7843018)) < 0.01);
  CHECK(std::abs(idx.at("lambda_v") - (-0.9897256)) < 0.01);
  CHECK(std::abs(idx.at("d") - (-0.3332927)) < 0.01);
  CHECK(std::abs(idx.at("xi") - 0.0032138) < 0.01);
  CHECK(std::abs(idx.at("delta") - (-0.6665855)) < 0.01);
  CHECK(std::abs(idx.at("sigma") - (-0.2067744)) < 0.01);
}

TEST_CASE("recruitment elasticity is exactly one") {
  for (const ModelParams& p :
       {st::scenario_params(), st::fitted_params_n1(), st::fitted_params_n2()})
    CHECK(std::abs(sensitivity_index(p, "Lambda") - 1.0) < 1e-9);
}

TEST_CASE("transmission elasticities sum to one") {
  std::mt19937_64 rng(5501);
  for (int trial = 0; trial < 100; ++trial) {
    st::DrawOptions opt;
    opt.n = 1 + static_cast<int>(rng() % 2);
    const ModelParams p = st::draw_params(rng, opt);
    const double sum =
        sensitivity_index(p, "beta") + sensitivity_index(p, "epsilon") +
        sensitivity_index(p, "alpha1") + sensitivity_index(p, "alpha2");
    CHECK(std::abs(sum - 1.0) < 1e-8);
  }
}

TEST_CASE("indices match the hand-derived elasticities") {
  std::mt19937_64 rng(5502);
  for (int trial = 0; trial < 100; ++trial) {
    st::DrawOptions opt;
    opt.n = 1 + static_cast<int>(rng() % 3);
    const ModelParams p = st::draw_params(rng, opt);
    const HandElasticities e = hand_elasticities(p);
    CHECK(sensitivity_index(p, "beta") ==
          doctest::Approx(e.beta).epsilon(1e-6));
    CHECK(sensitivity_index(p, "epsilon") ==
          doctest::Approx(e.epsilon).epsilon(1e-6));
    CHECK(sensitivity_index(p, "alpha1") ==
          doctest::Approx(e.alpha1).epsilon(1e-6).scale(1.0));
    CHECK(sensitivity_index(p, "alpha2") ==
          doctest::Approx(e.alpha2).epsilon(1e-6).scale(1.0));
    CHECK(sensitivity_index(p, "delta") ==
          doctest::Approx(e.delta).epsilon(1e-6));
    CHECK(sensitivity_index(p, "d") == doctest::Approx(e.d).epsilon(1e-6));
    CHECK(sensitivity_index(p, "xi") == doctest::Approx(e.xi).epsilon(1e-6));
    CHECK(sensitivity_index(p, "lambda_v") ==
          doctest::Approx(e.lambda_v).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("rate rescaling invariants") {
  // Scaling every per-day rate by a common factor leaves R0 unchanged, so
  // those elasticities sum to zero. The environmental chain obeys
  // e_phi = e_alpha1 + e_alpha2 = -e_omega = -e_kappa for n = 1.
  std::mt19937_64 rng(5503);
  for (int trial = 0; trial < 50; ++trial) {
    st::DrawOptions opt;
    opt.n = 1 + static_cast<int>(rng() % 2);
    const ModelParams p = st::draw_params(rng, opt);
    const SensitivityTable table = sensitivity_table(p);
    const auto idx = as_map(table);
    double rate_sum = 0.0;
    for (const char* name : {"Lambda", "beta", "sigma", "t_prime", "alpha1",
                             "alpha2", "epsilon", "mu", "xi", "delta", "d",
                             "phi", "omega"})
      rate_sum += idx.at(name);
    CHECK(std::abs(rate_sum) < 1e-7);

    const double env = idx.at("alpha1") + idx.at("alpha2");
    CHECK(idx.at("phi") == doctest::Approx(env).epsilon(1e-6).scale(1.0));
    CHECK(idx.at("omega") == doctest::Approx(-env).epsilon(1e-6).scale(1.0));
    CHECK(idx.at("kappa") == doctest::Approx(-env).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("vaccination index sign matches the closed-form trend") {
  std::mt19937_64 rng(5504);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    st::DrawOptions opt;
    opt.n = 1 + static_cast<int>(rng() % 2);
    const ModelParams p = st::draw_params(rng, opt);
    const double idx = sensitivity_index(p, "sigma");
    if (std::abs(idx) < 1e-9) continue;
    ++checked;
    CHECK((idx > 0.0 ? 1 : -1) == vaccination_trend(p).sign);
  }
  CHECK(checked > 250);
}

TEST_CASE("zero-valued parameters have zero elasticity by definition") {
  const ModelParams p = st::fitted_params_n1().with("sigma", 0.0);
  CHECK(sensitivity_index(p, "sigma") == 0.0);
}

TEST_CASE("unknown names are rejected") {
  CHECK_THROWS_AS(sensitivity_index(st::fitted_params_n1(), "r_naught"),
                  InvalidParameterError);
}

TEST_CASE("table covers every scalar in canonical order") {
  const ModelParams p = st::fitted_params_n2();
  const SensitivityTable table = sensitivity_table(p);
  REQUIRE(table.entries.size() == 15);
  CHECK(table.n == 2);
  CHECK(table.params.beta == p.beta);
  const auto& names = ModelParams::scalar_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    CHECK(table.entries[i].first == names[i]);
}

TEST_CASE("CSV outputs: canonical order and tornado order") {
  const SensitivityTable table = sensitivity_table(st::fitted_params_n1());
  const std::string plain = "sens.csv";
  const std::string tornado = "tornado.csv";
  write_sensitivity_csv(table, plain);
  write_tornado_csv(table, tornado);

  auto read_rows = [](const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "parameter,index");
    std::vector<std::pair<std::string, double>> rows;
    while (std::getline(in, line)) {
      const auto comma = line.find(',');
      REQUIRE(comma != std::string::npos);
      rows.emplace_back(line.substr(0, comma),
                        std::stod(line.substr(comma + 1)));
    }
    return rows;
  };

  const auto plain_rows = read_rows(plain);
  REQUIRE(plain_rows.size() == 15);
  CHECK(plain_rows[0].first == "Lambda");

  const auto tornado_rows = read_rows(tornado);
  REQUIRE(tornado_rows.size() == 15);
  for (std::size_t i = 1; i < tornado_rows.size(); ++i)
    CHECK(std::abs(tornado_rows[i].second) <=
          std::abs(tornado_rows[i - 1].second) + 1e-15);
  // Same multiset of names in both files.
  auto sorted_names = [](std::vector<std::pair<std::string, double>> rows) {
    std::vector<std::string> names;
    for (auto& [name, value] : rows) names.push_back(name);
    std::sort(names.begin(), names.end());
    return names;
  };
  CHECK(sorted_names(plain_rows) == sorted_names(tornado_rows));

  std::remove(plain.c_str());
  std::remove(tornado.c_str());
}

TEST_SUITE_END();
