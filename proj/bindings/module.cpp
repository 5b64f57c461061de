#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "srbloch/core.hpp"
#include "srbloch/dynamics.hpp"
#include "srbloch/io.hpp"
#include "srbloch/pulse_sim.hpp"
#include "srbloch/sr_analysis.hpp"
#include "srbloch/steady_state.hpp"

namespace py = pybind11;
using namespace srbloch;

PYBIND11_MODULE(_srbloch, m) {
    m.doc() = "Driven dissipative two-level system: Bloch-equation steady "
              "states, stochastic-resonance sweeps, and NMR protocols";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](double omega0, double omega1, double omega_drive, double t1,
                         double t2, double s_eq) {
                 SystemParams p;
                 p.omega0 = omega0;
                 p.omega1 = omega1;
                 p.omega_drive = omega_drive;
                 p.t1 = t1;
                 p.t2 = t2;
                 p.s_eq = s_eq;
                 return validate_params(p);
             }),
             py::arg("omega0") = 0.0, py::arg("omega1") = 0.0,
             py::arg("omega_drive") = 0.0, py::arg("t1") = 1.0, py::arg("t2") = 1.0,
             py::arg("s_eq") = 0.0)
        .def_readonly("omega0", &SystemParams::omega0)
        .def_readonly("omega1", &SystemParams::omega1)
        .def_readonly("omega_drive", &SystemParams::omega_drive)
        .def_readonly("t1", &SystemParams::t1)
        .def_readonly("t2", &SystemParams::t2)
        .def_readonly("s_eq", &SystemParams::s_eq)
        .def_readonly("weak_drive", &SystemParams::weak_drive)
        .def("detuning", &SystemParams::detuning);

    py::class_<SteadyStateSolution>(m, "SteadyStateSolution")
        .def_readonly("u", &SteadyStateSolution::u)
        .def_readonly("v", &SteadyStateSolution::v)
        .def_readonly("w", &SteadyStateSolution::w)
        .def_readonly("eta", &SteadyStateSolution::eta)
        .def_readonly("chi_prime", &SteadyStateSolution::chi_prime)
        .def_readonly("chi_double_prime", &SteadyStateSolution::chi_double_prime);

    py::class_<SrPeak>(m, "SrPeak")
        .def_readonly("t12_star", &SrPeak::t12_star)
        .def_readonly("eta_star", &SrPeak::eta_star);

    py::class_<Extremum>(m, "Extremum")
        .def_readonly("location", &Extremum::location)
        .def_readonly("value", &Extremum::value)
        .def_property_readonly("kind", [](const Extremum& e) {
            return e.kind == ExtremumKind::Max ? "max" : "none";
        });

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("grid", &SweepResult::grid)
        .def_readonly("response", &SweepResult::response)
        .def_readonly("extremum", &SweepResult::extremum)
        .def_property_readonly("control", [](const SweepResult& r) {
            return control_name(r.control);
        });

    py::class_<AcquisitionRecord>(m, "AcquisitionRecord")
        .def_readonly("times", &AcquisitionRecord::times)
        .def_readonly("values", &AcquisitionRecord::values);

    py::class_<T1Fit>(m, "T1Fit")
        .def_readonly("t1_hat", &T1Fit::t1_hat)
        .def_readonly("m0_hat", &T1Fit::m0_hat)
        .def_readonly("residual_norm", &T1Fit::residual_norm);

    py::class_<T2Fit>(m, "T2Fit")
        .def_readonly("t2_hat", &T2Fit::t2_hat)
        .def_readonly("residual_norm", &T2Fit::residual_norm);

    py::class_<IsochromatEnsemble>(m, "IsochromatEnsemble")
        .def_static("gaussian", &IsochromatEnsemble::gaussian, py::arg("sigma_rad"),
                    py::arg("n") = 21)
        .def_readonly("offsets", &IsochromatEnsemble::offsets)
        .def_readonly("weights", &IsochromatEnsemble::weights);

    m.def("hz_to_rad", &hz_to_rad);
    m.def("rad_to_hz", &rad_to_hz);
    m.def("relaxation_matrix",
          [](const SystemParams& p) -> Eigen::Matrix3cd { return relaxation_matrix(p); });
    m.def("psd_check", [](const SystemParams& p) {
        const PsdReport r = psd_check(relaxation_matrix(p));
        return py::make_tuple(r.is_psd, r.min_eigenvalue);
    });
    m.def("eta_resonant", &eta_resonant);
    m.def("steady_state_rotating", &steady_state_rotating, py::arg("params"),
          py::arg("detuning") = 0.0);
    m.def("susceptibility", &susceptibility, py::arg("params"), py::arg("detuning") = 0.0);
    m.def("eta_numeric",
          [](const SystemParams& p, double detuning) { return eta_numeric(p, detuning); },
          py::arg("params"), py::arg("detuning") = 0.0);
    m.def("sweep_t12", &sweep_t12, py::arg("omega1"), py::arg("s_eq"), py::arg("t12_grid"));
    m.def("sweep_omega1", &sweep_omega1, py::arg("t1"), py::arg("t2"), py::arg("s_eq"),
          py::arg("omega1_grid"));
    m.def("find_sr_peak", &find_sr_peak, py::arg("omega1"), py::arg("s_eq") = 1.0);
    m.def("linear_response_eta", &linear_response_eta);
    m.def("linspace", &linspace);
    m.def("inversion_recovery", &inversion_recovery);
    m.def("fit_t1", &fit_t1);
    m.def("carr_purcell", &carr_purcell, py::arg("params"), py::arg("ensemble"),
          py::arg("tau_echo"), py::arg("n_echoes"), py::arg("refocus") = true);
    m.def("fit_t2", &fit_t2);
    m.def("long_pulse_response",
          [](const SystemParams& p, double duration, double stride) {
              return long_pulse_response(p, duration, stride);
          },
          py::arg("params"), py::arg("duration"), py::arg("readout_stride"));
    m.def("add_noise", &add_noise, py::arg("record"), py::arg("sigma"), py::arg("seed"));
    m.def("simulate_rotating",
          [](const SystemParams& p, double detuning, double duration, std::size_t n) {
              const std::vector<double> samples = linspace(0.0, duration, n);
              const Trajectory traj = integrate_rotating(
                  p, detuning, {0.0, 0.0, p.s_eq, 0.0}, duration, {}, samples);
              std::vector<std::vector<double>> states(traj.size());
              for (std::size_t i = 0; i < traj.size(); ++i) {
                  states[i] = {traj.y[i][0], traj.y[i][1], traj.y[i][2]};
              }
              return py::make_tuple(traj.t, states);
          },
          py::arg("params"), py::arg("detuning"), py::arg("duration"),
          py::arg("samples") = 1000);
}
