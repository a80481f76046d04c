#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <optional>
#include <vector>

#include "sveirc/bifurcation.hpp"
#include "sveirc/calibration.hpp"
#include "sveirc/equilibria.hpp"
#include "sveirc/errors.hpp"
#include "sveirc/integrate.hpp"
#include "sveirc/io.hpp"
#include "sveirc/model.hpp"
#include "sveirc/sensitivity.hpp"

namespace py = pybind11;

namespace {

std::vector<std::vector<double>> to_rows(
    const Eigen::Ref<const Eigen::MatrixXd>& m) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    rows[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = m(i, k);
  }
  return rows;
}

std::vector<double> to_list(const sveirc::Vector6& v) {
  return {v(0), v(1), v(2), v(3), v(4), v(5)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Six-compartment epidemic model with imperfect vaccination and "
            "environmental transmission";

  py::register_exception<sveirc::Error>(m, "ModelError", PyExc_RuntimeError);

  py::class_<sveirc::ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("Lambda", &sveirc::ModelParams::Lambda)
      .def_readwrite("beta", &sveirc::ModelParams::beta)
      .def_readwrite("sigma", &sveirc::ModelParams::sigma)
      .def_readwrite("lambda_v", &sveirc::ModelParams::lambda_v)
      .def_readwrite("t_prime", &sveirc::ModelParams::t_prime)
      .def_readwrite("alpha1", &sveirc::ModelParams::alpha1)
      .def_readwrite("alpha2", &sveirc::ModelParams::alpha2)
      .def_readwrite("epsilon", &sveirc::ModelParams::epsilon)
      .def_readwrite("mu", &sveirc::ModelParams::mu)
      .def_readwrite("xi", &sveirc::ModelParams::xi)
      .def_readwrite("delta", &sveirc::ModelParams::delta)
      .def_readwrite("d", &sveirc::ModelParams::d)
      .def_readwrite("phi", &sveirc::ModelParams::phi)
      .def_readwrite("omega", &sveirc::ModelParams::omega)
      .def_readwrite("kappa", &sveirc::ModelParams::kappa)
      .def_readwrite("n", &sveirc::ModelParams::n)
      .def("validate", &sveirc::ModelParams::validate)
      .def("get", &sveirc::ModelParams::get)
      .def("with_param", &sveirc::ModelParams::with);

  py::class_<sveirc::StateVector>(m, "StateVector")
      .def(py::init<>())
      .def(py::init([](double s, double e, double i, double v, double r,
                       double c) {
             return sveirc::StateVector{s, e, i, v, r, c};
           }),
           py::arg("S"), py::arg("E"), py::arg("I"), py::arg("V"),
           py::arg("R"), py::arg("C"))
      .def_readwrite("S", &sveirc::StateVector::S)
      .def_readwrite("E", &sveirc::StateVector::E)
      .def_readwrite("I", &sveirc::StateVector::I)
      .def_readwrite("V", &sveirc::StateVector::V)
      .def_readwrite("R", &sveirc::StateVector::R)
      .def_readwrite("C", &sveirc::StateVector::C)
      .def("to_list", [](const sveirc::StateVector& s) {
        const auto a = s.to_array();
        return std::vector<double>(a.begin(), a.end());
      });

  py::class_<sveirc::Trajectory>(m, "Trajectory")
      .def_readonly("times", &sveirc::Trajectory::times)
      .def_readonly("states", &sveirc::Trajectory::states)
      .def_readonly("params", &sveirc::Trajectory::params);

  py::class_<sveirc::EndemicState>(m, "EndemicState")
      .def_readonly("state", &sveirc::EndemicState::state)
      .def_readonly("i_root", &sveirc::EndemicState::i_root)
      .def_readonly("residual", &sveirc::EndemicState::residual)
      .def_readonly("jac_max_real", &sveirc::EndemicState::jac_max_real);

  py::class_<sveirc::BranchRow>(m, "BranchRow")
      .def_readonly("beta", &sveirc::BranchRow::beta)
      .def_readonly("r0", &sveirc::BranchRow::r0)
      .def_readonly("states", &sveirc::BranchRow::states);

  py::class_<sveirc::ObservedSeries>(m, "ObservedSeries")
      .def(py::init<>())
      .def_readwrite("day_index", &sveirc::ObservedSeries::day_index)
      .def_readwrite("vaccinated", &sveirc::ObservedSeries::vaccinated)
      .def("validate", &sveirc::ObservedSeries::validate);

  py::class_<sveirc::FitResult>(m, "FitResult")
      .def_readonly("names", &sveirc::FitResult::names)
      .def_readonly("fitted", &sveirc::FitResult::fitted)
      .def_readonly("objective", &sveirc::FitResult::objective)
      .def_readonly("iterations", &sveirc::FitResult::iterations)
      .def_readonly("converged", &sveirc::FitResult::converged)
      .def_readonly("residual_history", &sveirc::FitResult::residual_history);

  m.def("response_g", &sveirc::response_g, py::arg("C"), py::arg("kappa"),
        py::arg("n"));
  m.def("rhs", &sveirc::rhs, py::arg("state"), py::arg("params"));
  m.def("total_population", &sveirc::total_population);

  m.def("integrate", &sveirc::integrate, py::arg("params"), py::arg("init"),
        py::arg("t_end"), py::arg("sample_step") = 1.0,
        py::arg("rtol") = 1e-8, py::arg("atol") = 1e-6);

  m.def("disease_free_state", &sveirc::disease_free_state);
  m.def("jacobian_at",
        [](const sveirc::StateVector& s, const sveirc::ModelParams& p) {
          return to_rows(sveirc::jacobian_at(s, p));
        });
  m.def("r0", &sveirc::r0);
  m.def("routh_hurwitz", [](const sveirc::ModelParams& p) {
    const auto rh = sveirc::routh_hurwitz(p);
    return py::make_tuple(rh.a1, rh.a2, rh.a3, rh.stable_block);
  });
  m.def("next_generation_matrices", [](const sveirc::ModelParams& p) {
    const auto [f, v] = sveirc::next_generation_matrices(p);
    return py::make_tuple(to_rows(f), to_rows(v));
  });
  m.def("vaccination_trend", [](const sveirc::ModelParams& p) {
    const auto t = sveirc::vaccination_trend(p);
    return py::make_tuple(t.be_minus_cd, t.sign);
  });
  m.def("equilibrium_report", [](const sveirc::ModelParams& p) {
    const auto rep = sveirc::equilibrium_report(p);
    py::dict out;
    out["dfs"] = rep.dfs;
    out["jacobian"] = to_rows(rep.jacobian);
    out["r0"] = rep.r0;
    out["dominant_eig_real"] = rep.dominant_eig_real;
    out["verdict"] = sveirc::verdict_name(rep.verdict);
    out["stable"] = rep.stable;
    return out;
  });

  m.def("beta_star", [](const sveirc::ModelParams& p) {
    return sveirc::beta_star(p);  // optional -> None
  });
  m.def("criticality_eigenvectors", [](const sveirc::ModelParams& p) {
    const auto [w, v] = sveirc::criticality_eigenvectors(p);
    return py::make_tuple(to_list(w), to_list(v));
  });
  m.def(
      "normal_form_coefficients",
      [](const sveirc::ModelParams& p, double w2, double v2) {
        const auto [a, b] = sveirc::normal_form_coefficients(p, w2, v2);
        return py::make_tuple(a, b);
      },
      py::arg("params"), py::arg("w2_scale") = 1.0, py::arg("v2_scale") = 1.0);
  m.def("backward_condition", &sveirc::backward_condition);
  m.def("endemic_polynomial_value", &sveirc::endemic_polynomial_value);
  m.def("endemic_steady_states", &sveirc::endemic_steady_states);
  m.def("bifurcation_scan", &sveirc::bifurcation_scan, py::arg("params"),
        py::arg("beta_min"), py::arg("beta_max"), py::arg("steps"));

  m.def(
      "objective",
      [](const std::vector<double>& values, const sveirc::ModelParams& base,
         const sveirc::StateVector& init, const sveirc::ObservedSeries& data,
         const std::vector<std::string>& free_names) {
        sveirc::FitOptions opts;
        opts.free_names = free_names;
        return sveirc::objective(values, base, init, data, opts);
      },
      py::arg("free_values"), py::arg("base"), py::arg("init"),
      py::arg("data"), py::arg("free_names") = std::vector<std::string>{});
  m.def(
      "fit",
      [](const sveirc::ModelParams& base, const sveirc::StateVector& init,
         const sveirc::ObservedSeries& data, const std::vector<double>& guess,
         int max_iter, const std::vector<std::string>& free_names,
         bool difference_data) {
        sveirc::FitOptions opts;
        opts.free_names = free_names;
        opts.difference_data = difference_data;
        return sveirc::fit(base, init, data, guess, max_iter, opts);
      },
      py::arg("base"), py::arg("init"), py::arg("data"), py::arg("guess"),
      py::arg("max_iter") = 200,
      py::arg("free_names") = std::vector<std::string>{},
      py::arg("difference_data") = false);
  m.def("synthesize_observations", &sveirc::synthesize_observations,
        py::arg("params"), py::arg("init"), py::arg("days"),
        py::arg("noise_rel"), py::arg("seed") = 42);

  m.def("sensitivity_index", &sveirc::sensitivity_index);
  m.def("sensitivity_table", [](const sveirc::ModelParams& p) {
    py::dict out;
    for (const auto& [name, value] : sveirc::sensitivity_table(p).entries)
      out[name.c_str()] = value;
    return out;
  });

  m.def(
      "load_params",
      [](const std::string& path) {
        std::vector<std::string> warnings;
        sveirc::ModelParams p = sveirc::io::load_params(path, &warnings);
        return py::make_tuple(p, warnings);
      },
      py::arg("path"));
  m.def("load_initial_state", &sveirc::io::load_initial_state);
  m.def("load_observed_csv", &sveirc::io::load_observed_csv);
}
