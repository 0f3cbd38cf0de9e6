#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "boundary_lab/boundary.hpp"
#include "boundary_lab/config.hpp"
#include "boundary_lab/density.hpp"
#include "boundary_lab/errors.hpp"
#include "boundary_lab/experiments.hpp"
#include "boundary_lab/flow.hpp"
#include "boundary_lab/koopman.hpp"

namespace py = pybind11;
namespace bl = boundary_lab;

namespace {

// Python callers pass words as strings ("aB") and points as (head, period)
// pairs; the model is held by the density or passed alongside.
bl::BoundaryPoint point(const bl::GroupModel& m, const std::pair<std::string, std::string>& p) {
  return bl::BoundaryPoint::parse(m, p.first, p.second);
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Bindings for the boundary-lab C++ core";
  mod.attr("__version__") = bl::kVersion;

  py::register_exception<bl::CapExceeded>(mod, "CapExceeded");
  py::register_exception<bl::InvariantViolation>(mod, "InvariantViolation");

  py::class_<bl::GroupModel>(mod, "GroupModel")
      .def(py::init([](std::vector<double> weights) {
             int rank = static_cast<int>(weights.size());
             return bl::GroupModel(rank, std::move(weights));
           }),
           py::arg("weights"))
      .def_property_readonly("rank", &bl::GroupModel::rank)
      .def_property_readonly("weights", [](const bl::GroupModel& m) {
        auto w = m.generator_weights();
        return std::vector<double>(w.begin(), w.end());
      })
      .def("reduce", [](const bl::GroupModel& m, const std::string& w) { return m.format(m.word(w)); })
      .def("length", [](const bl::GroupModel& m, const std::string& w) { return m.word(w).wlen(); })
      .def("multiply", [](const bl::GroupModel& m, const std::string& u, const std::string& v) {
        return m.format(m.multiply(m.word(u), m.word(v)));
      })
      .def("invert", [](const bl::GroupModel& m, const std::string& w) { return m.format(m.invert(m.word(w))); })
      .def("distance", [](const bl::GroupModel& m, const std::string& g, const std::string& h) {
        return m.distance(m.word(g), m.word(h));
      })
      .def("annulus", [](const bl::GroupModel& m, double R, double alpha, std::size_t cap) {
             std::vector<std::string> out;
             for (const auto& w : m.annulus(R, alpha, cap)) out.push_back(m.format(w));
             return out;
           },
           py::arg("R"), py::arg("alpha"), py::arg("cap") = 10'000'000)
      .def("act", [](const bl::GroupModel& m, const std::string& g,
                     const std::pair<std::string, std::string>& xi) {
        bl::BoundaryPoint p = bl::act(m, m.word(g), point(m, xi));
        return std::make_pair(m.format(p.head()), m.format(p.period()));
      })
      .def("gromov_bb", [](const bl::GroupModel& m, const std::pair<std::string, std::string>& xi,
                           const std::pair<std::string, std::string>& eta) {
        return bl::gromov_bb(m, point(m, xi), point(m, eta));
      });

  mod.def("critical_exponent", &bl::critical_exponent, py::arg("model"));

  py::class_<bl::ConformalDensity>(mod, "ConformalDensity")
      .def(py::init(&bl::ConformalDensity::build), py::arg("model"), py::arg("epsilon"))
      .def_property_readonly("h", &bl::ConformalDensity::h)
      .def_property_readonly("epsilon", &bl::ConformalDensity::epsilon)
      .def_property_readonly("dimension", &bl::ConformalDensity::dimension)
      .def("mu", [](const bl::ConformalDensity& d, const std::string& prefix) {
        return d.mu(bl::Cylinder{d.model().word(prefix)});
      })
      .def("rn_derivative", [](const bl::ConformalDensity& d, const std::string& g,
                               const std::pair<std::string, std::string>& xi) {
        return d.rn_derivative(d.model().word(g), point(d.model(), xi));
      })
      .def("p1_norm", [](const bl::ConformalDensity& d, const std::string& g) {
        return bl::p1_norm(d, d.model().word(g));
      })
      .def("bms_mass", [](const bl::ConformalDensity& d, const std::string& u, const std::string& v) {
        const bl::GroupModel& m = d.model();
        return bl::bms_mass(d, bl::ProductCylinder{bl::Cylinder{m.word(u)}, bl::Cylinder{m.word(v)}});
      });

  mod.def("subcommands", &bl::subcommands);
  mod.def(
      "run",
      [](const std::string& subcommand, const std::string& config_json, const std::string& out) {
        bl::RunConfig config;
        std::ostringstream log;
        try {
          config = bl::RunConfig::from_json(nlohmann::json::parse(config_json));
        } catch (const std::exception& e) {
          return std::make_pair(static_cast<int>(bl::kExitFailure), std::string(e.what()));
        }
        int code = bl::run(subcommand, config, out, log);
        return std::make_pair(code, log.str());
      },
      py::arg("subcommand"), py::arg("config_json") = "{}", py::arg("out") = "reports",
      "Runs one subcommand; returns (exit_code, log).");
}
