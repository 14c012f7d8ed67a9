// Copyright 2026 The catsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "catsim/acoustics.hpp"
#include "catsim/catfit.hpp"
#include "catsim/cli.hpp"
#include "catsim/dynamics.hpp"
#include "catsim/phase_space.hpp"
#include "catsim/pipeline.hpp"
#include "catsim/tomography.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace catsim;

PYBIND11_MODULE(_catsim, m) {
  m.doc() = "Qubit-phonon cat-state simulation and analysis";
  m.attr("__version__") = CATSIM_VERSION;

  py::register_exception<CutoffError>(m, "CutoffError", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<StateError>(m, "StateError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  // hilbert
  py::class_<HilbertSpace>(m, "HilbertSpace")
      .def(py::init<int, bool>(), py::arg("n_max"), py::arg("has_qubit") = false)
      .def_property_readonly("n_max", &HilbertSpace::n_max)
      .def_property_readonly("has_qubit", &HilbertSpace::has_qubit)
      .def_property_readonly("dim", &HilbertSpace::dim)
      .def("__eq__", &HilbertSpace::operator==)
      .def("__repr__", &HilbertSpace::describe);

  py::class_<JointState>(m, "JointState")
      .def_static("pure", [](const HilbertSpace& s, const CVec& v) { return JointState::pure(s, v); })
      .def_static("mixed", [](const HilbertSpace& s, const CMat& r) { return JointState::mixed(s, r); })
      .def_property_readonly("space", &JointState::space)
      .def_property_readonly("is_pure", &JointState::is_pure)
      .def_property_readonly("truncation_deficit", &JointState::truncation_deficit)
      .def("vector", &JointState::vector)
      .def("density", &JointState::density);

  m.def("coherent_state", &coherent_state, py::arg("alpha"), py::arg("space"));
  m.def("fock_state", &fock_state, py::arg("n"), py::arg("space"));
  m.def("tensor", &tensor);
  m.def("partial_trace", [](const JointState& s, const std::string& keep) {
    if (keep != "qubit" && keep != "phonon") throw std::invalid_argument("keep must be 'qubit' or 'phonon'");
    return partial_trace(s, keep == "qubit" ? Subsystem::qubit : Subsystem::phonon);
  }, py::arg("state"), py::arg("keep"));
  m.def("purity", &purity);
  m.def("fidelity", py::overload_cast<const JointState&, const JointState&>(&fidelity));
  m.def("displacement_elements", &displacement_elements);
  m.def("recommended_n_max", &recommended_n_max);

  // dynamics
  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_readwrite("g0", &SystemParams::g0)
      .def_readwrite("alpha0", &SystemParams::alpha0)
      .def_readwrite("c_g", &SystemParams::c_g)
      .def_readwrite("c_e", &SystemParams::c_e)
      .def_readwrite("kappa_phonon", &SystemParams::kappa_phonon)
      .def_readwrite("gamma_qubit", &SystemParams::gamma_qubit)
      .def_readwrite("gamma_phi", &SystemParams::gamma_phi)
      .def_readwrite("n_max", &SystemParams::n_max)
      .def("cutoff", &SystemParams::cutoff)
      .def("joint_space", &SystemParams::joint_space)
      .def("phonon_space", &SystemParams::phonon_space);

  py::class_<CharacteristicTimes>(m, "CharacteristicTimes")
      .def_readonly("t_collapse", &CharacteristicTimes::t_collapse)
      .def_readonly("t_R", &CharacteristicTimes::t_R)
      .def_readonly("t_C", &CharacteristicTimes::t_C);
  m.def("characteristic_times", &characteristic_times);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("states", &Trajectory::states)
      .def_readonly("observables", &Trajectory::observables);

  m.def("jc_evolve_exact", &jc_evolve_exact);
  m.def("excited_population", &excited_population);
  m.def("jc_trajectory", &jc_trajectory, py::arg("params"), py::arg("times"), py::arg("keep_states") = false);
  m.def("excited_population_envelope", [](const SystemParams& p, const std::vector<double>& t,
                                          const std::string& form) {
    if (form != "mean_frequency" && form != "leading_order") throw std::invalid_argument("unknown envelope form");
    const Envelope e = excited_population_envelope(
        p, t, form == "leading_order" ? EnvelopeForm::leading_order : EnvelopeForm::mean_frequency);
    return py::make_tuple(e.values, e.outside_validity);
  }, py::arg("params"), py::arg("times"), py::arg("form") = "mean_frequency");
  m.def("phi_states", &phi_states);
  m.def("cat_time_qubit_state", &cat_time_qubit_state);
  m.def("qubit_state", &qubit_state);
  m.def("lindblad_evolve", [](const JointState& init, const SystemParams& p, bool h, const std::vector<double>& t,
                              double atol, double rtol, bool keep) {
    return lindblad_evolve(init, p, h, t, LindbladOptions{atol, rtol, keep});
  }, py::arg("initial"), py::arg("params"), py::arg("hamiltonian_on"), py::arg("times"), py::arg("atol") = 1e-10,
     py::arg("rtol") = 1e-8, py::arg("keep_states") = true);
  m.def("revival_contrast", py::overload_cast<const Trajectory&, double>(&revival_contrast));

  // phase space
  py::class_<WignerGrid>(m, "WignerGrid")
      .def_static("raster", &WignerGrid::raster)
      .def_static("slice", &WignerGrid::slice)
      .def_static("scattered", &WignerGrid::scattered)
      .def_static("default_raster", &WignerGrid::default_raster)
      .def_static("default_slice", &WignerGrid::default_slice)
      .def_readonly("points", &WignerGrid::points)
      .def_readonly("values", &WignerGrid::values)
      .def_readonly("flagged", &WignerGrid::flagged)
      .def_readonly("nx", &WignerGrid::nx)
      .def_readonly("ny", &WignerGrid::ny)
      .def("__len__", &WignerGrid::size);
  m.def("wigner", py::overload_cast<const JointState&, WignerGrid>(&wigner));
  m.def("wigner_value", &wigner_value);
  m.def("integrate", &integrate);
  m.def("negativity", &negativity);
  m.def("decayed_css_wigner_value", &decayed_css_wigner_value, py::arg("alpha"), py::arg("eps"), py::arg("beta"),
        py::arg("vartheta") = 0.0);
  m.def("decayed_css_wigner", &decayed_css_wigner, py::arg("alpha"), py::arg("kappa"), py::arg("t"),
        py::arg("grid"), py::arg("vartheta") = 0.0);
  py::class_<NegativityDecayFit>(m, "NegativityDecayFit")
      .def_readonly("tau_cat", &NegativityDecayFit::tau_cat)
      .def_readonly("amplitude", &NegativityDecayFit::amplitude)
      .def_readonly("offset", &NegativityDecayFit::offset)
      .def_readonly("residual", &NegativityDecayFit::residual);
  m.def("fit_negativity_decay", &fit_negativity_decay);
  m.def("tau_cat_large_alpha", &tau_cat_large_alpha);

  // tomography
  py::class_<ReadoutModel>(m, "ReadoutModel")
      .def(py::init<>())
      .def_readwrite("contrast", &ReadoutModel::contrast)
      .def_readwrite("offset", &ReadoutModel::offset)
      .def_readwrite("shots", &ReadoutModel::shots)
      .def_readwrite("seed", &ReadoutModel::seed)
      .def_readwrite("phonon_decay", &ReadoutModel::phonon_decay);
  py::class_<ParityNormalization>(m, "ParityNormalization")
      .def(py::init<>())
      .def_readwrite("amplitude", &ParityNormalization::amplitude)
      .def_readwrite("offset", &ParityNormalization::offset)
      .def_readwrite("applied", &ParityNormalization::applied);
  py::class_<DriveCalibration>(m, "DriveCalibration")
      .def_readonly("B", &DriveCalibration::B)
      .def_readonly("C", &DriveCalibration::C)
      .def_readonly("residual", &DriveCalibration::residual)
      .def_readonly("nonmonotone_warning", &DriveCalibration::nonmonotone_warning)
      .def("beta_abs", &DriveCalibration::beta_abs);
  py::class_<WignerSampleSet>(m, "WignerSampleSet")
      .def_readonly("betas", &WignerSampleSet::betas)
      .def_readonly("measured_parities", &WignerSampleSet::measured_parities)
      .def_readonly("shots_per_point", &WignerSampleSet::shots_per_point);
  py::class_<FockFit>(m, "FockFit")
      .def_readonly("populations", &FockFit::populations)
      .def_readonly("gamma_d", &FockFit::gamma_d)
      .def_readonly("beta_abs", &FockFit::beta_abs)
      .def_readonly("residual", &FockFit::residual);
  py::class_<MleOptions>(m, "MleOptions")
      .def(py::init<>())
      .def_readwrite("max_iters", &MleOptions::max_iters)
      .def_readwrite("tol", &MleOptions::tol)
      .def_readwrite("contrast", &MleOptions::contrast);
  py::class_<MleResult>(m, "MleResult")
      .def_readonly("state", &MleResult::state)
      .def_readonly("log_likelihood", &MleResult::log_likelihood)
      .def_readonly("iterations", &MleResult::iterations)
      .def_readonly("converged", &MleResult::converged);

  m.def("simulate_parity_readout", &simulate_parity_readout, py::arg("state"), py::arg("beta"), py::arg("model"),
        py::arg("point_index") = 0);
  m.def("calibrate_parity", &calibrate_parity, py::arg("model"), py::arg("n_phases") = 32,
        py::arg("noiseless") = false);
  m.def("sample_wigner", &sample_wigner);
  m.def("square_grid", &square_grid);
  m.def("calibrate_drive", &calibrate_drive);
  m.def("fock_rabi_trace", &fock_rabi_trace);
  m.def("extract_fock_populations", &extract_fock_populations);
  m.def("mle_reconstruct", &mle_reconstruct, py::arg("samples"), py::arg("space"),
        py::arg("options") = MleOptions{});

  // catfit
  py::class_<AnalyticalFit>(m, "AnalyticalFit")
      .def_readonly("alpha_fit", &AnalyticalFit::alpha_fit)
      .def_readonly("theta", &AnalyticalFit::theta)
      .def_readonly("fidelity", &AnalyticalFit::fidelity)
      .def_readonly("converged", &AnalyticalFit::converged);
  py::class_<CssFit>(m, "CssFit")
      .def_readonly("alpha1", &CssFit::alpha1)
      .def_readonly("alpha2", &CssFit::alpha2)
      .def_readonly("vartheta", &CssFit::vartheta)
      .def_readonly("fidelity", &CssFit::fidelity)
      .def_readonly("D", &CssFit::D)
      .def_readonly("converged", &CssFit::converged);
  m.def("fit_analytical", py::overload_cast<const JointState&, cplx, cplx, double, double>(&fit_analytical),
        py::arg("rho"), py::arg("c_g"), py::arg("c_e"), py::arg("t_C"), py::arg("g0"));
  m.def("fit_css", &fit_css);
  m.def("css_vector", &css_vector);

  // acoustics
  py::class_<AcousticMode>(m, "AcousticMode")
      .def(py::init<>())
      .def_readwrite("w0_um", &AcousticMode::w0_um)
      .def_readwrite("L_um", &AcousticMode::L_um)
      .def_readwrite("lambda_um", &AcousticMode::lambda_um)
      .def_readwrite("m", &AcousticMode::m)
      .def_readwrite("p", &AcousticMode::p)
      .def_readwrite("l", &AcousticMode::l)
      .def_readwrite("c33", &AcousticMode::c33)
      .def_readwrite("density", &AcousticMode::density)
      .def("normalized", &AcousticMode::normalized)
      .def("rayleigh_length_um", &AcousticMode::rayleigh_length_um);
  py::class_<MassModel>(m, "MassModel")
      .def_readonly("S0", &MassModel::S0)
      .def_readonly("M0_ug", &MassModel::M0_ug)
      .def_readonly("M_eff_ug", &MassModel::M_eff_ug)
      .def_readonly("x_zpf_m", &MassModel::x_zpf_m)
      .def_readonly("omega_p", &MassModel::omega_p);
  py::class_<Delocalization>(m, "Delocalization")
      .def_readonly("x_eff_m", &Delocalization::x_eff_m)
      .def_readonly("separation_m", &Delocalization::separation_m);
  m.def("mass_model", [](const AcousticMode& mode, const std::string& conv) {
    if (conv != "max" && conv != "rms") throw std::invalid_argument("convention must be 'max' or 'rms'");
    return mass_model(mode, conv == "max" ? MassConvention::max : MassConvention::rms);
  }, py::arg("mode"), py::arg("convention") = "rms");
  m.def("delocalization", &delocalization);
  m.def("lg_profile", &lg_profile);

  // command line
  m.def("run_cli", [](const std::vector<std::string>& args) { return cli::run(args); });
}
