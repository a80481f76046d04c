#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sveirc/bifurcation.hpp"
#include "sveirc/calibration.hpp"
#include "sveirc/equilibria.hpp"
#include "sveirc/errors.hpp"
#include "sveirc/integrate.hpp"
#include "sveirc/io.hpp"
#include "sveirc/sensitivity.hpp"

namespace {

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel g_log_level = LogLevel::info;

void init_log_level() {
  const char* env = std::getenv("EPIDEMIO_LOG");
  if (!env) return;
  const std::string value(env);
  if (value == "quiet")
    g_log_level = LogLevel::quiet;
  else if (value == "info")
    g_log_level = LogLevel::info;
  else if (value == "debug")
    g_log_level = LogLevel::debug;
  else
    std::cerr << "warning: EPIDEMIO_LOG='" << value
              << "' is not one of quiet|info|debug, using info\n";
}

void log_info(const std::string& msg) {
  if (g_log_level >= LogLevel::info) std::cerr << msg << '\n';
}

void log_debug(const std::string& msg) {
  if (g_log_level >= LogLevel::debug) std::cerr << msg << '\n';
}

void log_warning(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

sveirc::ModelParams load_params_logged(const std::string& path) {
  std::vector<std::string> warnings;
  sveirc::ModelParams p = sveirc::io::load_params(path, &warnings);
  for (const std::string& w : warnings) log_warning(w);
  log_debug("loaded parameters from " + path);
  return p;
}

struct Cli {
  std::string params_path;
  std::string init_path;
  std::string data_path;
  std::string config_path;
  std::string out_path;
  std::string report_path;
  std::string plot_path;
  std::string tornado_path;
  std::string synth_out;
  double t_end = 300.0;
  double sample_step = 1.0;
  double rtol = 1e-8;
  double atol = 1e-6;
  double beta_min = 0.0;
  double beta_max = 0.0;
  int steps = 2;
  int synth_days = 60;
  double synth_noise = 0.005;
  std::uint64_t seed = 42;
  std::optional<double> i0_override;
};

int run_simulate(const Cli& o) {
  const auto p = load_params_logged(o.params_path);
  const auto init = sveirc::io::load_initial_state(o.init_path);
  const auto traj =
      sveirc::integrate(p, init, o.t_end, o.sample_step, o.rtol, o.atol);
  sveirc::write_trajectory_csv(traj, o.out_path);
  log_info("wrote " + std::to_string(traj.times.size()) + " samples to " +
           o.out_path);
  if (!o.plot_path.empty()) {
    sveirc::write_trajectory_plot_csv(traj, o.plot_path);
    log_info("wrote plot data to " + o.plot_path);
  }
  return 0;
}

int run_equilibrium(const Cli& o) {
  const auto p = load_params_logged(o.params_path);
  const auto rep = sveirc::equilibrium_report(p);
  std::cout << "R0=" << sveirc::io::format_double(rep.r0) << '\n'
            << "verdict=" << sveirc::verdict_name(rep.verdict) << '\n';
  if (!o.out_path.empty()) {
    sveirc::io::write_file_atomic(o.out_path,
                                  sveirc::io::equilibrium_report_json(rep));
    log_info("wrote equilibrium report to " + o.out_path);
  }
  return 0;
}

int run_r0(const Cli& o) {
  const auto p = load_params_logged(o.params_path);
  const auto rep = sveirc::equilibrium_report(p);
  std::cout << "R0=" << sveirc::io::format_double(rep.r0) << '\n'
            << "verdict=" << sveirc::verdict_name(rep.verdict) << '\n';
  return 0;
}

int run_bifurcate(const Cli& o) {
  const auto p = load_params_logged(o.params_path);
  const auto rows = sveirc::bifurcation_scan(p, o.beta_min, o.beta_max,
                                             o.steps);
  sveirc::write_branch_csv(rows, o.out_path);
  log_info("wrote " + std::to_string(rows.size()) + " scan rows to " +
           o.out_path);
  if (!o.report_path.empty()) {
    const auto rep = sveirc::bifurcation_report(p);
    sveirc::io::write_file_atomic(o.report_path,
                                  sveirc::io::bifurcation_report_json(rep));
    log_info("wrote bifurcation report to " + o.report_path);
  }
  return 0;
}

int run_fit(const Cli& o) {
  const auto p = load_params_logged(o.params_path);
  auto init = sveirc::io::load_initial_state(o.init_path);
  if (o.i0_override) {
    if (*o.i0_override < 0.0)
      throw sveirc::InvalidParameterError("--i0 must be nonnegative");
    init.I = *o.i0_override;
  }

  sveirc::io::FitConfig cfg;
  if (!o.config_path.empty()) cfg = sveirc::io::load_fit_config(o.config_path);

  if (!o.synth_out.empty()) {
    const auto series = sveirc::synthesize_observations(
        p, init, o.synth_days, o.synth_noise, o.seed);
    sveirc::io::write_observed_csv(series, o.synth_out);
    log_info("wrote " + std::to_string(series.day_index.size()) +
             " synthetic observations to " + o.synth_out);
    return 0;
  }

  const auto data = sveirc::io::load_observed_csv(o.data_path);
  std::vector<double> guess = cfg.guess;
  if (guess.empty()) {
    // Start from the base parameter values.
    const auto names = cfg.options.free_names.empty()
                           ? std::vector<std::string>(
                                 sveirc::kFitParamNames.begin(),
                                 sveirc::kFitParamNames.end())
                           : cfg.options.free_names;
    for (const std::string& name : names) guess.push_back(p.get(name));
  }
  const auto result =
      sveirc::fit(p, init, data, guess, cfg.max_iter, cfg.options);
  if (!result.converged)
    log_warning("fit did not converge within " +
                std::to_string(cfg.max_iter) + " iterations");
  const std::string body = sveirc::io::fit_result_json(result);
  if (o.out_path.empty()) {
    std::cout << body;
  } else {
    sveirc::io::write_file_atomic(o.out_path, body);
    log_info("wrote fit result to " + o.out_path);
  }
  return 0;
}

int run_sensitivity(const Cli& o) {
  const auto p = load_params_logged(o.params_path);
  const auto table = sveirc::sensitivity_table(p);
  if (o.out_path.empty()) {
    std::cout << "parameter,index\n";
    for (const auto& [name, value] : table.entries)
      std::cout << name << ',' << sveirc::io::format_double(value) << '\n';
  } else {
    sveirc::write_sensitivity_csv(table, o.out_path);
    log_info("wrote sensitivity table to " + o.out_path);
  }
  if (!o.tornado_path.empty()) {
    sveirc::write_tornado_csv(table, o.tornado_path);
    log_info("wrote tornado data to " + o.tornado_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  init_log_level();
  Cli o;

  CLI::App app{"Six-compartment epidemic model with imperfect vaccination "
               "and environmental transmission"};
  app.require_subcommand(1);

  auto add_params = [&](CLI::App* cmd) {
    cmd->add_option("--params", o.params_path, "model parameter JSON file")
        ->required()
        ->check(CLI::ExistingFile);
  };

  CLI::App* simulate = app.add_subcommand("simulate", "integrate the model");
  add_params(simulate);
  simulate->add_option("--init", o.init_path, "initial state JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--t-end", o.t_end, "length of the run in days")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--sample-step", o.sample_step,
                       "output sampling interval in days")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--rtol", o.rtol, "relative tolerance")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--atol", o.atol, "absolute tolerance")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--out", o.out_path, "trajectory CSV path")->required();
  simulate->add_option("--plot-data", o.plot_path,
                       "also write long-format CSV for plotting");

  CLI::App* equilibrium = app.add_subcommand(
      "equilibrium", "disease-free state, stability and R0 report");
  add_params(equilibrium);
  equilibrium->add_option("--out", o.out_path, "report JSON path");

  CLI::App* r0_cmd =
      app.add_subcommand("r0", "print the reproduction number and verdict");
  add_params(r0_cmd);

  CLI::App* bifurcate =
      app.add_subcommand("bifurcate", "scan endemic branches over beta");
  add_params(bifurcate);
  bifurcate->add_option("--beta-min", o.beta_min, "scan start")
      ->required()
      ->check(CLI::PositiveNumber);
  bifurcate->add_option("--beta-max", o.beta_max, "scan end")
      ->required()
      ->check(CLI::PositiveNumber);
  bifurcate->add_option("--steps", o.steps, "number of grid points")
      ->check(CLI::Range(2, 1000000));
  bifurcate->add_option("--out", o.out_path, "branch CSV path")->required();
  bifurcate->add_option("--report", o.report_path,
                        "also write criticality report JSON");

  CLI::App* fit_cmd =
      app.add_subcommand("fit", "least-squares fit to vaccination counts");
  add_params(fit_cmd);
  fit_cmd->add_option("--init", o.init_path, "initial state JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  auto* data_opt =
      fit_cmd->add_option("--data", o.data_path, "observed CSV (day,vaccinated)")
          ->check(CLI::ExistingFile);
  fit_cmd->add_option("--config", o.config_path,
                      "fit configuration JSON (free, guess, bounds, ...)")
      ->check(CLI::ExistingFile);
  fit_cmd->add_option("--out", o.out_path,
                      "fit result JSON path (default: stdout)");
  fit_cmd->add_option("--i0", o.i0_override,
                      "override the initial infectious count");
  auto* synth_opt = fit_cmd->add_option(
      "--synthesize-out", o.synth_out,
      "write a synthetic observation CSV instead of fitting");
  fit_cmd->add_option("--days", o.synth_days, "synthetic series length")
      ->check(CLI::Range(1, 100000));
  fit_cmd->add_option("--noise", o.synth_noise,
                      "synthetic relative noise amplitude")
      ->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--seed", o.seed, "synthetic noise seed");
  data_opt->excludes(synth_opt);

  CLI::App* sensitivity =
      app.add_subcommand("sensitivity", "elasticities of R0");
  add_params(sensitivity);
  sensitivity->add_option("--out", o.out_path,
                          "table CSV path (default: stdout)");
  sensitivity->add_option("--tornado", o.tornado_path,
                          "also write rows sorted by |index|");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(simulate)) return run_simulate(o);
    if (app.got_subcommand(equilibrium)) return run_equilibrium(o);
    if (app.got_subcommand(r0_cmd)) return run_r0(o);
    if (app.got_subcommand(bifurcate)) return run_bifurcate(o);
    if (app.got_subcommand(fit_cmd)) {
      if (o.data_path.empty() && o.synth_out.empty()) {
        std::cerr << "fit: either --data or --synthesize-out is required\n";
        return 1;
      }
      return run_fit(o);
    }
    if (app.got_subcommand(sensitivity)) return run_sensitivity(o);
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const sveirc::SchemaError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const sveirc::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const sveirc::InvalidParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const sveirc::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
}
