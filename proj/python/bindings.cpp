// Copyright 2026 The adiatherm Authors
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

#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "adiatherm/cli.hpp"
#include "adiatherm/estimators.hpp"
#include "adiatherm/models.hpp"
#include "adiatherm/protocol.hpp"
#include "adiatherm/schedules.hpp"

namespace py = pybind11;
using namespace adiatherm;

namespace {

std::string run_cli_command(const std::string& name, const std::string& config_text, const std::string& out_dir,
                            std::optional<std::uint64_t> seed, std::optional<std::string> backend,
                            std::optional<int> trajectories, std::optional<int> shots) {
    cli::RunOptions opts;
    opts.config_text = config_text;
    opts.out_dir = out_dir;
    opts.seed = seed;
    opts.backend = std::move(backend);
    opts.trajectories = trajectories;
    opts.shots = shots;
    return cli::run_command(cli::find_command(name), opts).values().dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Adiabatic thermal-state preparation on simulated qubits.";

    // ConfigError derives from InvalidArgument, so register it first.
    py::register_exception<cli::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_MemoryError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<PauliSum>(m, "PauliSum")
        .def(py::init<int>(), py::arg("n_qubits"))
        .def_property_readonly("n_qubits", &PauliSum::n_qubits)
        .def("add", py::overload_cast<double, std::string_view>(&PauliSum::add), py::arg("coefficient"),
             py::arg("letters"))
        .def("__len__", &PauliSum::size)
        .def("to_text", &PauliSum::to_text)
        .def_static("from_text", &PauliSum::from_text)
        .def("__add__", &PauliSum::operator+)
        .def("__mul__", &PauliSum::operator*);

    py::class_<Lattice>(m, "Lattice")
        .def_static("chain", &Lattice::chain)
        .def_static("ring", &Lattice::ring)
        .def_static("torus", &Lattice::torus)
        .def_property_readonly("sites", &Lattice::sites)
        .def_property_readonly("edges", [](const Lattice& l) {
            std::vector<std::pair<int, int>> out;
            for (const auto& e : l.edges()) out.emplace_back(e.a, e.b);
            return out;
        });

    m.def("ising_1d", &ising_1d, py::arg("n"), py::arg("j"), py::arg("h_x"), py::arg("h_z"), py::arg("periodic"));
    m.def("ising_2d_torus", &ising_2d_torus, py::arg("lx"), py::arg("ly"), py::arg("h_x"));
    m.def("h0_transverse", &h0_transverse, py::arg("n"), py::arg("sign"));
    m.def("lowest_eigenvalues", &lowest_eigenvalues, py::arg("h"), py::arg("k"));

    py::class_<ThermalReference>(m, "ThermalReference")
        .def_readonly("beta", &ThermalReference::beta)
        .def_readonly("energy_density", &ThermalReference::energy_density)
        .def_readonly("entropy_density", &ThermalReference::entropy_density);
    m.def(
        "thermal_reference_curve",
        [](const PauliSum& h, const std::vector<double>& betas) { return thermal_reference_curve(h, betas); },
        py::arg("h"), py::arg("betas"));

    m.def("s0_of_beta0", &s0_of_beta0);
    m.def("entropy_from_x", &entropy_from_x);
    m.def("predicted_noisy_entropy", &predicted_noisy_entropy, py::arg("beta0"), py::arg("r"));
    m.def("d_noisy_entropy_d_beta0", &d_noisy_entropy_d_beta0, py::arg("beta0"), py::arg("r"));
    m.def("beta_max_scaling", &beta_max_scaling, py::arg("r"), py::arg("c"));
    m.def("beta_closed_form", &beta_closed_form, py::arg("beta0"), py::arg("de_dbeta0"));
    m.def("decay_model", &decay_model, py::arg("t"), py::arg("alpha"), py::arg("beta0"));

    py::class_<CurveRecord>(m, "CurveRecord")
        .def(py::init<>())
        .def_readwrite("beta0", &CurveRecord::beta0)
        .def_readwrite("E", &CurveRecord::E)
        .def_readwrite("S", &CurveRecord::S)
        .def_readwrite("beta_f", &CurveRecord::beta_f)
        .def_readwrite("p", &CurveRecord::p)
        .def_readwrite("M", &CurveRecord::M)
        .def_readwrite("dt", &CurveRecord::dt)
        .def_readwrite("N", &CurveRecord::N)
        .def_readwrite("flat", &CurveRecord::flat);
    m.def(
        "estimate_beta_curve",
        [](const std::vector<CurveRecord>& records, double flat_threshold) {
            return estimate_beta_curve(records, flat_threshold);
        },
        py::arg("records"), py::arg("flat_threshold") = 1e-6);

    py::class_<Measured>(m, "Measured")
        .def(py::init<double, double>(), py::arg("value") = 0.0, py::arg("error") = 0.0)
        .def_readwrite("value", &Measured::value)
        .def_readwrite("error", &Measured::error);
    py::class_<BetaEstimate>(m, "BetaEstimate")
        .def_readonly("beta", &BetaEstimate::beta)
        .def_readonly("beta_error", &BetaEstimate::beta_error)
        .def_readonly("temperature", &BetaEstimate::temperature)
        .def_readonly("temperature_error", &BetaEstimate::temperature_error)
        .def_readonly("overflow", &BetaEstimate::overflow);
    m.def("beta_from_observables", &beta_from_observables, py::arg("e"), py::arg("e_prime"), py::arg("m"),
          py::arg("m_prime"));

    py::enum_<SeriesKind>(m, "SeriesKind").value("Entropy", SeriesKind::Entropy).value("Energy", SeriesKind::Energy);
    py::class_<TimeSeries>(m, "TimeSeries")
        .def(py::init<>())
        .def_readwrite("times", &TimeSeries::times)
        .def_readwrite("values", &TimeSeries::values)
        .def_readwrite("kind", &TimeSeries::kind);
    py::class_<DecayFit>(m, "DecayFit")
        .def_readonly("alpha", &DecayFit::alpha)
        .def_readonly("r", &DecayFit::r)
        .def_readonly("rms", &DecayFit::rms);
    m.def("fit_decay", &fit_decay, py::arg("series"), py::arg("beta0"));

    py::class_<IsingParams>(m, "IsingParams")
        .def(py::init([](double j, double h_x, double h_z) { return IsingParams{j, h_x, h_z}; }), py::arg("j") = -1.0,
             py::arg("h_x") = 1.0, py::arg("h_z") = 1.0)
        .def_readwrite("j", &IsingParams::j)
        .def_readwrite("h_x", &IsingParams::h_x)
        .def_readwrite("h_z", &IsingParams::h_z);
    py::class_<LinearSchedule>(m, "LinearSchedule")
        .def(py::init<>())
        .def_readwrite("steps", &LinearSchedule::steps)
        .def_readwrite("dt", &LinearSchedule::dt)
        .def_readwrite("h0_sign", &LinearSchedule::h0_sign)
        .def_readwrite("target", &LinearSchedule::target)
        .def("total_time", &LinearSchedule::total_time);
    py::class_<PowerLawSchedule>(m, "PowerLawSchedule")
        .def(py::init<>())
        .def_readwrite("steps", &PowerLawSchedule::steps)
        .def_readwrite("a", &PowerLawSchedule::a)
        .def_readwrite("b", &PowerLawSchedule::b)
        .def_readwrite("c", &PowerLawSchedule::c)
        .def_readwrite("d", &PowerLawSchedule::d)
        .def_readwrite("h_x", &PowerLawSchedule::h_x);
    m.def("aligned_h0_sign", &aligned_h0_sign, py::arg("h_x"));
    m.def("hardware_schedule", &hardware_schedule, py::arg("schedule"));

    py::enum_<NoisePlacement>(m, "NoisePlacement")
        .value("PerTrotterStep", NoisePlacement::PerTrotterStep)
        .value("PerTwoQubitGate", NoisePlacement::PerTwoQubitGate);
    py::enum_<Backend>(m, "Backend")
        .value("DensityMatrix", Backend::DensityMatrix)
        .value("DensityMatrixForward", Backend::DensityMatrixForward)
        .value("Trajectories", Backend::Trajectories);

    py::class_<AdiabaticSetup>(m, "AdiabaticSetup")
        .def(py::init<>())
        .def_readwrite("lattice", &AdiabaticSetup::lattice)
        .def_readwrite("schedule", &AdiabaticSetup::schedule)
        .def_readwrite("p", &AdiabaticSetup::p)
        .def_readwrite("placement", &AdiabaticSetup::placement)
        .def("final_hamiltonian", &AdiabaticSetup::final_hamiltonian);

    py::class_<ThermalPrepConfig>(m, "ThermalPrepConfig")
        .def(py::init<>())
        .def_readwrite("setup", &ThermalPrepConfig::setup)
        .def_readwrite("beta0_grid", &ThermalPrepConfig::beta0_grid)
        .def_readwrite("backend", &ThermalPrepConfig::backend)
        .def_readwrite("trajectories", &ThermalPrepConfig::trajectories)
        .def_readwrite("seed", &ThermalPrepConfig::seed)
        .def_readwrite("shortcut_beta0", &ThermalPrepConfig::shortcut_beta0)
        .def_readwrite("flat_threshold", &ThermalPrepConfig::flat_threshold);
    py::class_<ThermalPrepResult>(m, "ThermalPrepResult")
        .def_readonly("records", &ThermalPrepResult::records)
        .def_readonly("mirror_x", &ThermalPrepResult::mirror_x)
        .def_readonly("shortcut_r", &ThermalPrepResult::shortcut_r);
    m.def("run_thermal_prep", &run_thermal_prep, py::arg("config"), py::call_guard<py::gil_scoped_release>());

    py::enum_<EvolutionSetting>(m, "EvolutionSetting")
        .value("Adiabatic", EvolutionSetting::Adiabatic)
        .value("Quench", EvolutionSetting::Quench)
        .value("Mirror", EvolutionSetting::Mirror);
    py::class_<TimeSeriesConfig>(m, "TimeSeriesConfig")
        .def(py::init<>())
        .def_readwrite("setup", &TimeSeriesConfig::setup)
        .def_readwrite("setting", &TimeSeriesConfig::setting)
        .def_readwrite("beta0", &TimeSeriesConfig::beta0);
    py::class_<EntropyTimeSeries>(m, "EntropyTimeSeries")
        .def_readonly("exact", &EntropyTimeSeries::exact)
        .def_readonly("x_estimate", &EntropyTimeSeries::x_estimate);
    m.def("run_entropy_timeseries", &run_entropy_timeseries, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<AdiabaticityRow>(m, "AdiabaticityRow")
        .def_readonly("M", &AdiabaticityRow::M)
        .def_readonly("k", &AdiabaticityRow::k)
        .def_readonly("S_estimated", &AdiabaticityRow::S_estimated)
        .def_readonly("S_exact", &AdiabaticityRow::S_exact)
        .def_readonly("k_shift", &AdiabaticityRow::k_shift)
        .def_readonly("adiabatic", &AdiabaticityRow::adiabatic);
    py::class_<AdiabaticityConfig>(m, "AdiabaticityConfig")
        .def(py::init<>())
        .def_readwrite("setup", &AdiabaticityConfig::setup)
        .def_readwrite("beta0", &AdiabaticityConfig::beta0)
        .def_readwrite("dt_probe", &AdiabaticityConfig::dt_probe)
        .def_readwrite("m_list", &AdiabaticityConfig::m_list)
        .def_readwrite("k_list", &AdiabaticityConfig::k_list)
        .def_readwrite("threshold", &AdiabaticityConfig::threshold);
    m.def("run_adiabaticity_diagnostic", &run_adiabaticity_diagnostic, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<HardwareConfig>(m, "HardwareConfig")
        .def(py::init<>())
        .def_readwrite("lx", &HardwareConfig::lx)
        .def_readwrite("ly", &HardwareConfig::ly)
        .def_readwrite("schedule", &HardwareConfig::schedule)
        .def_readwrite("p", &HardwareConfig::p)
        .def_readwrite("beta0", &HardwareConfig::beta0)
        .def_readwrite("trajectories", &HardwareConfig::trajectories)
        .def_readwrite("shots_energy", &HardwareConfig::shots_energy)
        .def_readwrite("shots_mirror", &HardwareConfig::shots_mirror)
        .def_readwrite("seed", &HardwareConfig::seed);
    py::class_<HardwareObservables>(m, "HardwareObservables")
        .def_readonly("zz", &HardwareObservables::zz)
        .def_readonly("x", &HardwareObservables::x)
        .def_readonly("e", &HardwareObservables::e)
        .def_readonly("zz_prime", &HardwareObservables::zz_prime)
        .def_readonly("x_prime", &HardwareObservables::x_prime)
        .def_readonly("e_prime", &HardwareObservables::e_prime)
        .def_readonly("m", &HardwareObservables::m)
        .def_readonly("m_prime", &HardwareObservables::m_prime)
        .def_readonly("entropy", &HardwareObservables::entropy)
        .def_readonly("entropy_error", &HardwareObservables::entropy_error)
        .def_readonly("beta", &HardwareObservables::beta);
    m.def("run_hardware_table", &run_hardware_table, py::arg("config"), py::call_guard<py::gil_scoped_release>());

    py::class_<PerturbationConfig>(m, "PerturbationConfig")
        .def(py::init<>())
        .def_readwrite("h", &PerturbationConfig::h)
        .def_readwrite("delta_h", &PerturbationConfig::delta_h)
        .def_readwrite("beta", &PerturbationConfig::beta)
        .def_readwrite("epsilon", &PerturbationConfig::epsilon)
        .def_readwrite("times", &PerturbationConfig::times)
        .def_readwrite("lambdas", &PerturbationConfig::lambdas)
        .def_readwrite("fit_t_min", &PerturbationConfig::fit_t_min)
        .def_readwrite("fit_t_max", &PerturbationConfig::fit_t_max);
    py::class_<PerturbationResult>(m, "PerturbationResult")
        .def_readonly("times", &PerturbationResult::times)
        .def_readonly("ds_full", &PerturbationResult::ds_full)
        .def_readonly("ds_half", &PerturbationResult::ds_half)
        .def_readonly("ds_second", &PerturbationResult::ds_second)
        .def_readonly("slope", &PerturbationResult::slope)
        .def_readonly("lambdas", &PerturbationResult::lambdas)
        .def_readonly("lambda_second", &PerturbationResult::lambda_second);
    m.def("run_perturbation_scaling", &run_perturbation_scaling, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    m.def("command_names", [] {
        std::vector<std::string> names;
        for (const auto& c : cli::commands()) names.push_back(c.name);
        return names;
    });
    m.def("run_command", &run_cli_command, py::arg("name"), py::arg("config_text") = "", py::arg("out_dir") = ".",
          py::arg("seed") = std::nullopt, py::arg("backend") = std::nullopt, py::arg("trajectories") = std::nullopt,
          py::arg("shots") = std::nullopt, py::call_guard<py::gil_scoped_release>(),
          "Runs a CLI command, writes its outputs to out_dir and returns the resolved config as JSON text.");
}
