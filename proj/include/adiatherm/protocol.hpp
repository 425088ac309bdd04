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

#ifndef ADIATHERM_PROTOCOL_HPP
#define ADIATHERM_PROTOCOL_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adiatherm/estimators.hpp"
#include "adiatherm/models.hpp"
#include "adiatherm/pauli_sum.hpp"
#include "adiatherm/schedules.hpp"

namespace adiatherm {

enum class Backend {
    /// Exact density matrix, observables pulled back through the adjoint
    /// channel so that a whole beta0 grid costs two circuit passes.
    DensityMatrix,
    /// Exact density matrix evolved forward once per beta0.
    DensityMatrixForward,
    /// Pure-state trajectories over sampled product states and Pauli errors.
    Trajectories,
};

/// Linear-schedule model shared by the 1D experiments.
struct AdiabaticSetup {
    Lattice lattice = Lattice::ring(8);
    LinearSchedule schedule;
    double p = 0.0;
    NoisePlacement placement = NoisePlacement::PerTrotterStep;

    /// sum_edges J ZZ + h_x sum X + h_z sum Z on the lattice.
    PauliSum final_hamiltonian() const;
    Circuit forward_circuit() const;
    /// Noisy mirror of the forward circuit (first half, then its inverse).
    Circuit mirror() const;
};

struct ThermalPrepConfig {
    AdiabaticSetup setup;
    std::vector<double> beta0_grid;
    Backend backend = Backend::DensityMatrix;
    int trajectories = 200;
    std::uint64_t seed = 1;
    /// Fit r from one mirror run at this beta0 and extend S through
    /// predicted_noisy_entropy instead of mirroring every grid point.
    std::optional<double> shortcut_beta0;
    double flat_threshold = 1e-6;
};

struct ThermalPrepResult {
    std::vector<CurveRecord> records;
    /// Mean X after the mirror circuit, one per grid point.
    std::vector<double> mirror_x;
    /// Fitted noise amplitude when the shortcut is active.
    std::optional<double> shortcut_r;
};

/// Three steps: prepare and measure E, mirror and convert <X> to S,
/// differentiate to beta_f.
ThermalPrepResult run_thermal_prep(const ThermalPrepConfig& config);

enum class EvolutionSetting { Adiabatic, Quench, Mirror };

struct TimeSeriesConfig {
    AdiabaticSetup setup;
    EvolutionSetting setting = EvolutionSetting::Adiabatic;
    double beta0 = 1.0;
};

struct EntropyTimeSeries {
    /// Half-system entropy density after every Trotter step, t = 0 included.
    TimeSeries exact;
    /// entropy_from_x of the site-averaged X along the same path.
    TimeSeries x_estimate;
};

/// Density-matrix evolution recording S(t). Quench runs the static final
/// Hamiltonian for the same number of steps; mirror runs the noisy mirror.
EntropyTimeSeries run_entropy_timeseries(const TimeSeriesConfig& config);

struct AdiabaticityRow {
    int M = 0;
    int k = 0;
    double S_estimated = 0.0;
    double S_exact = 0.0;
    /// |S_est(k) - S_est(k = 0)| for the same M.
    double k_shift = 0.0;
    bool adiabatic = false;
};

struct AdiabaticityConfig {
    AdiabaticSetup setup;  // schedule.steps is overridden by each M
    double beta0 = 2.0;
    double dt_probe = 0.1;
    std::vector<int> m_list;
    std::vector<int> k_list{0, 1, 2, 4};
    double threshold = 0.01;
};

/// For each (M, k): U_M, k probe steps of the final Hamiltonian, U_M^dagger,
/// per-step noise; reports the X-based and exact entropy densities. An M is
/// adiabatic when every k >= 1 estimate stays within threshold of k = 0.
std::vector<AdiabaticityRow> run_adiabaticity_diagnostic(const AdiabaticityConfig& config);

struct HardwareConfig {
    int lx = 5;
    int ly = 4;
    PowerLawSchedule schedule;
    /// Depolarizing amplitude after every two-qubit gate (trajectories).
    double p = 0.0;
    /// Start from the product thermal state of sum X at this beta0 instead of
    /// the basis states |-...-> and |+-...->.
    std::optional<double> beta0;
    int trajectories = 1;
    /// Emulated shots; zero means exact expectation values.
    int shots_energy = 0;
    int shots_mirror = 0;
    std::uint64_t seed = 1;
};

struct HardwareObservables {
    Measured zz, x, e;
    Measured zz_prime, x_prime, e_prime;
    Measured m, m_prime;
    double entropy = 0.0;
    double entropy_error = 0.0;
    BetaEstimate beta;
};

/// Energies e, e' of U|-...-> and U|+-...-> and mean X after the mirror,
/// with standard errors from shots and/or trajectories.
HardwareObservables run_hardware_table(const HardwareConfig& config);

/// Table-I arithmetic from four measured values.
HardwareObservables derive_hardware_quantities(Measured e, Measured e_prime, Measured m, Measured m_prime);

struct PerturbationConfig {
    PauliSum h{2};
    PauliSum delta_h{2};
    double beta = 1.0;
    /// Base perturbation strength epsilon; delta H enters as epsilon * delta_h.
    double epsilon = 1e-3;
    std::vector<double> times;
    std::vector<double> lambdas{1.0, 2.0, 4.0};
    /// Time window (inclusive) for the log-log slope.
    double fit_t_min = 0.0;
    double fit_t_max = 0.0;
};

struct PerturbationResult {
    std::vector<double> times;
    /// delta S at epsilon and epsilon/2.
    std::vector<double> ds_full, ds_half;
    /// Second-order part 2 (dS(eps) - 2 dS(eps/2)).
    std::vector<double> ds_second;
    double slope = 0.0;
    /// Mean |second-order part| over the fit window after t -> lambda t,
    /// epsilon -> epsilon / lambda.
    std::vector<double> lambdas;
    std::vector<double> lambda_second;
};

/// Gibbs state of H evolved under exp(-i t (H + eps dH)); half-system
/// entropy changes, Richardson second-order extraction and slope fit.
PerturbationResult run_perturbation_scaling(const PerturbationConfig& config);

/// Richardson pair isolating the quadratic coefficient: for
/// f(e) = a e + b e^2 + O(e^3), returns 2 (f(e) - 2 f(e/2)) = b e^2 + O(e^3).
double second_order_part(double f_full, double f_half);

// ---------------------------------------------------------------------------
// Curve analysis shared by the runner and the acceptance checks.

/// Trapezoidal integral of |S(t) - s0| over the series.
double drift_area(const TimeSeries& series, double s0);

/// Mean of the second half of the series (the saturated plateau of a quench).
double plateau_mean(const TimeSeries& series);

/// Per-time linear fit of S_N(t) against 1/N; series must share their times.
struct Extrapolation {
    std::vector<double> times;
    std::vector<double> intercept;
};
Extrapolation extrapolate_inverse_n(std::span<const int> sizes, std::span<const TimeSeries> series);

/// Leading stretch of a curve on which beta_f is finite and strictly
/// increasing, as (beta_f, E) pairs.
struct EnergyTemperatureCurve {
    std::vector<double> beta;
    std::vector<double> energy;
};
EnergyTemperatureCurve monotone_branch(std::span<const CurveRecord> records);

struct CollapseMetrics {
    double beta_lo = 0.0;
    double beta_hi = 0.0;
    /// Largest vertical spread of E(beta) across curves on [beta_lo, beta_hi].
    double e_of_beta_spread = 0.0;
    /// Largest spread of E(beta0) across curves on the shared beta0 grid.
    double e_of_beta0_spread = 0.0;
    /// Largest beta_f reached on each curve's monotone branch.
    std::vector<double> beta_max;
};

/// Largest |E_prep - E_ref(beta_f)| over records whose beta_f lies in
/// [beta_lo, beta_hi], with E_ref interpolated on the reference curve.
/// Throws when no record falls in the window.
double max_reference_deviation(std::span<const CurveRecord> records, const ThermalReference& reference,
                               double beta_lo, double beta_hi);

/// Curves must share one beta0 grid. The E(beta) spread is sampled at
/// `samples` evenly spaced temperatures inside the common range.
CollapseMetrics collapse_metrics(std::span<const std::vector<CurveRecord>> curves, int samples = 200);

}  // namespace adiatherm

#endif  // ADIATHERM_PROTOCOL_HPP
