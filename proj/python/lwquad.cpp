#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lwq/config.hpp"
#include "lwq/flatness.hpp"
#include "lwq/harness.hpp"
#include "lwq/trajectories.hpp"

namespace py = pybind11;
using namespace lwq;

namespace {

py::dict run_summary(const RunResult& r) {
  py::dict d;
  d["rmse"] = r.rmse;
  d["peak_error"] = r.peak_error;
  d["diverged"] = r.diverged;
  d["divergence_time"] = r.divergence_time;
  std::vector<double> t;
  std::vector<Vec3> p, p_ref;
  for (const LogRow& row : r.rows) {
    t.push_back(row.t);
    p.push_back(row.p);
    p_ref.push_back(row.p_ref);
  }
  d["t"] = t;
  d["p"] = p;
  d["p_ref"] = p_ref;
  return d;
}

}  // namespace

PYBIND11_MODULE(lwquad, m) {
  m.doc() = "Lifting-wing quadcopter flatness, control and simulation";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<AeroParams>(m, "AeroParams")
      .def(py::init<>())
      .def_readwrite("mass", &AeroParams::mass)
      .def_readwrite("kappa", &AeroParams::kappa)
      .def_readwrite("rho", &AeroParams::rho)
      .def_readwrite("wing_area", &AeroParams::wing_area)
      .def_readwrite("cd0", &AeroParams::cd0)
      .def_readwrite("cy0", &AeroParams::cy0)
      .def_readwrite("cl_alpha", &AeroParams::cl_alpha)
      .def("without_aero", &AeroParams::without_aero)
      .def("with_scaled_coefficients", &AeroParams::with_scaled_coefficients);

  py::class_<FlatSample>(m, "FlatSample")
      .def(py::init<>())
      .def_readwrite("p", &FlatSample::p)
      .def_readwrite("v", &FlatSample::v)
      .def_readwrite("a", &FlatSample::a)
      .def_readwrite("j", &FlatSample::j)
      .def_readwrite("yaw_fallback", &FlatSample::yaw_fallback);

  py::enum_<TrajectoryKind>(m, "TrajectoryKind")
      .value("Circle", TrajectoryKind::Circle)
      .value("Lemniscate", TrajectoryKind::Lemniscate)
      .value("Hover", TrajectoryKind::Hover)
      .value("Line", TrajectoryKind::Line);

  py::class_<TrajectoryDef>(m, "TrajectoryDef")
      .def(py::init<>())
      .def_readwrite("kind", &TrajectoryDef::kind)
      .def_readwrite("p0", &TrajectoryDef::p0)
      .def_readwrite("radius", &TrajectoryDef::radius)
      .def_readwrite("omega", &TrajectoryDef::omega)
      .def_readwrite("speed_cap", &TrajectoryDef::speed_cap)
      .def_readwrite("yaw_fallback", &TrajectoryDef::yaw_fallback)
      .def_static("circle", &TrajectoryDef::circle, py::arg("radius") = 15.0, py::arg("omega") = 0.06,
                  py::arg("speed_cap") = 10.0)
      .def_static("lemniscate", &TrajectoryDef::lemniscate, py::arg("radius") = 20.0, py::arg("omega") = 0.33)
      .def_static("hover", &TrajectoryDef::hover, py::arg("p0") = Vec3(0.0, 0.0, -10.0), py::arg("yaw") = 0.0)
      .def_static("line", &TrajectoryDef::line, py::arg("speed"), py::arg("yaw"));

  m.def("sample", &sample, py::arg("trajectory"), py::arg("t"));

  py::enum_<SingularCase>(m, "SingularCase")
      .value("None_", SingularCase::None)
      .value("ZeroVelocity", SingularCase::ZeroVelocity)
      .value("AlignedYPerp", SingularCase::AlignedYPerp);

  py::class_<FlatnessOutput>(m, "FlatnessOutput")
      .def_readonly("attitude", &FlatnessOutput::attitude)
      .def_readonly("thrust", &FlatnessOutput::thrust)
      .def_readonly("alpha", &FlatnessOutput::alpha)
      .def_readonly("body_rate", &FlatnessOutput::body_rate)
      .def_readonly("wind_axis", &FlatnessOutput::wind_axis)
      .def_readonly("singular_case", &FlatnessOutput::singular_case);

  m.def(
      "flatness_transform",
      [](const AeroParams& params, const FlatSample& s, const Vec3& wind) {
        return flatness_transform(params, s, wind);
      },
      py::arg("params"), py::arg("sample"), py::arg("wind") = Vec3::Zero());

  m.def(
      "rmse",
      [](const std::vector<Vec3>& reference, const std::vector<Vec3>& actual) { return rmse(reference, actual); },
      py::arg("reference"), py::arg("actual"));

  m.def(
      "simulate",
      [](const std::string& config_text, py::object condition) {
        ExperimentConfig cfg = parse_config(config_text);
        if (!condition.is_none()) {
          const auto c = parse_condition(condition.cast<std::string>());
          if (!c) throw ConfigError("unknown condition '" + condition.cast<std::string>() + "'");
          cfg.mode = mode_for(*c);
        }
        RunResult r;
        {
          py::gil_scoped_release release;
          r = simulate(cfg);
        }
        return run_summary(r);
      },
      py::arg("config_text") = "", py::arg("condition") = py::none(),
      "Closed-loop run from config text; returns rmse, peak_error, diverged and the position series.");

  m.def(
      "compare",
      [](const std::string& config_text) {
        const ExperimentConfig cfg = parse_config(config_text);
        std::vector<ConditionCell> cells;
        {
          py::gil_scoped_release release;
          cells = condition_matrix(cfg);
        }
        py::dict out;
        for (const ConditionCell& c : cells) {
          py::dict d;
          d["ok"] = c.ok;
          d["rmse"] = c.rmse;
          d["peak_error"] = c.peak_error;
          d["diverged"] = c.diverged;
          d["error"] = c.error;
          out[py::str(c.name)] = d;
        }
        return out;
      },
      py::arg("config_text") = "");
}
