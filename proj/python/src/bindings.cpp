#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "apdg/config.hpp"
#include "apdg/harness.hpp"
#include "apdg/limit.hpp"

namespace py = pybind11;

namespace {

py::array_t<double> to_array(std::span<const double> values) {
  py::array_t<double> out(static_cast<py::ssize_t>(values.size()));
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

py::dict norms_dict(const apdg::ErrorNorms &n) {
  py::dict d;
  d["l1"] = n.l1;
  d["l2"] = n.l2;
  d["linf"] = n.linf;
  return d;
}

// A scheme and its current state; advanced in place from Python.
class Simulation {
 public:
  Simulation(const apdg::ExperimentConfig &config, int n_cells)
      : scheme_(apdg::make_scheme(config, n_cells > 0 ? n_cells : config.mesh_sizes.front())),
        state_(scheme_.initial_state(apdg::make_initial_condition(config))) {}

  void step(long n) {
    py::gil_scoped_release release;
    for (long i = 0; i < n; ++i) state_ = scheme_.full_step(state_);
  }

  double t() const { return state_.t; }
  double dt() const { return scheme_.dt(); }
  int n_cells() const { return scheme_.mesh().n_cells; }
  double mass() const { return scheme_.mass(state_); }
  double min_f() const { return scheme_.min_sampled_f(state_); }
  double equilibrium_distance() const { return scheme_.equilibrium_distance(state_); }
  py::dict energy() const {
    const auto e = scheme_.energy_norms(state_);
    py::dict d;
    d["theorem"] = e.theorem_energy;
    d["example"] = e.example_energy;
    return d;
  }
  py::array_t<double> quadrature_points() const {
    return to_array(apdg::quadrature_coordinates(scheme_.basis(), scheme_.mesh()));
  }
  py::array_t<double> density() const {
    return to_array(apdg::scalar_to_quadrature(scheme_.basis(), scheme_.mesh(), scheme_.density(state_)));
  }
  py::array_t<double> velocity_nodes() const { return to_array(scheme_.grid().nodes()); }

 private:
  apdg::ApScheme scheme_;
  apdg::ParityState state_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Asymptotic-preserving DG solver for the kinetic semiconductor model";

  py::register_exception<apdg::ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<apdg::ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_property_readonly("kind", [](const apdg::ExperimentConfig &c) { return apdg::to_string(c.kind); })
      .def_readwrite("name", &apdg::ExperimentConfig::name)
      .def_readwrite("mesh_sizes", &apdg::ExperimentConfig::mesh_sizes)
      .def_readwrite("degree", &apdg::ExperimentConfig::degree)
      .def_readwrite("n_modes", &apdg::ExperimentConfig::n_modes)
      .def_readwrite("epsilon", &apdg::ExperimentConfig::epsilon)
      .def_readwrite("epsilons", &apdg::ExperimentConfig::epsilons)
      .def_readwrite("dt", &apdg::ExperimentConfig::dt)
      .def_readwrite("t_end", &apdg::ExperimentConfig::t_end)
      .def_readwrite("boundary", &apdg::ExperimentConfig::boundary)
      .def_readwrite("field", &apdg::ExperimentConfig::field)
      .def_readwrite("initial", &apdg::ExperimentConfig::initial)
      .def_readwrite("limiter", &apdg::ExperimentConfig::limiter)
      .def_readwrite("transport", &apdg::ExperimentConfig::transport)
      .def_readwrite("reference", &apdg::ExperimentConfig::reference)
      .def_readwrite("seed", &apdg::ExperimentConfig::seed)
      .def_readwrite("threads", &apdg::ExperimentConfig::threads)
      .def("validate", [](const apdg::ExperimentConfig &c) { apdg::validate_config(c); });

  m.def("load_config", [](const std::filesystem::path &p) { return apdg::load_config(p); }, py::arg("path"));
  m.def(
      "parse_config",
      [](const std::string &text) {
        std::istringstream in(text);
        return apdg::parse_config(in, "<string>");
      },
      py::arg("text"));

  py::class_<apdg::VelocityGrid>(m, "VelocityGrid")
      .def(py::init<int>(), py::arg("n_modes"))
      .def_property_readonly("n_modes", &apdg::VelocityGrid::n_modes)
      .def_property_readonly("nodes", [](const apdg::VelocityGrid &g) { return to_array(g.nodes()); })
      .def_property_readonly("weights", [](const apdg::VelocityGrid &g) { return to_array(g.weights()); })
      .def_property_readonly("maxwellian", [](const apdg::VelocityGrid &g) { return to_array(g.maxwellian()); })
      .def("density", [](const apdg::VelocityGrid &g, const std::vector<double> &samples) {
        return apdg::moment_density(g, samples);
      });

  m.def("exact_limit_density", &apdg::exact_solution_example1, py::arg("x"), py::arg("t"));
  m.def("prescribed_field", &apdg::prescribed_field_example2, py::arg("x"));
  m.def("mixed_regime_epsilon", &apdg::mixed_regime_epsilon, py::arg("x"));
  m.def("fit_loglog_slope", &apdg::fit_loglog_slope, py::arg("x"), py::arg("y"));

  m.def(
      "run_accuracy_study",
      [](const apdg::ExperimentConfig &c) {
        apdg::AccuracyResult r;
        {
          py::gil_scoped_release release;
          r = apdg::run_accuracy_study(c);
        }
        py::list rows;
        for (const auto &row : r.rows) {
          py::dict d;
          d["n_cells"] = row.n_cells;
          d["error"] = norms_dict(row.error);
          d["order"] = norms_dict(row.order);
          rows.append(d);
        }
        return rows;
      },
      py::arg("config"));

  m.def(
      "run_ap_sweep",
      [](const apdg::ExperimentConfig &c) {
        apdg::ApSweepResult r;
        {
          py::gil_scoped_release release;
          r = apdg::run_ap_sweep(c);
        }
        py::dict d;
        d["epsilons"] = r.epsilons;
        d["errors"] = r.errors;
        d["slope"] = r.slope;
        d["reference"] = r.reference;
        return d;
      },
      py::arg("config"));

  m.def(
      "run_checks",
      [](std::uint64_t seed) {
        py::list out;
        for (const auto &c : apdg::run_checks(seed)) out.append(py::make_tuple(c.name, c.passed, c.value, c.tolerance));
        return out;
      },
      py::arg("seed") = 0);

  py::class_<Simulation>(m, "Simulation")
      .def(py::init<const apdg::ExperimentConfig &, int>(), py::arg("config"), py::arg("n_cells") = 0)
      .def("step", &Simulation::step, py::arg("n") = 1)
      .def_property_readonly("t", &Simulation::t)
      .def_property_readonly("dt", &Simulation::dt)
      .def_property_readonly("n_cells", &Simulation::n_cells)
      .def("mass", &Simulation::mass)
      .def("min_f", &Simulation::min_f)
      .def("equilibrium_distance", &Simulation::equilibrium_distance)
      .def("energy", &Simulation::energy)
      .def("quadrature_points", &Simulation::quadrature_points)
      .def("density", &Simulation::density)
      .def("velocity_nodes", &Simulation::velocity_nodes);
}
