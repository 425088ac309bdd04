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

#ifndef ADIATHERM_SCHEDULES_HPP
#define ADIATHERM_SCHEDULES_HPP

#include <utility>
#include <vector>

#include "adiatherm/circuit.hpp"
#include "adiatherm/models.hpp"

namespace adiatherm {

/// Couplings of J sum ZZ + h_x sum X + h_z sum Z.
struct IsingParams {
    double j = -1.0;
    double h_x = 1.0;
    double h_z = 1.0;
};

/// H(t) = (1 - t) H0 + t H_f sampled at step midpoints t_n = (n + 1/2) / M,
/// with H0 = h0_sign * (-sum X).
struct LinearSchedule {
    int steps = 60;
    double dt = 0.1;
    int h0_sign = 1;
    IsingParams target;

    double total_time() const { return steps * dt; }
    /// Argument for product_gibbs_x giving the Gibbs state of H0 at beta0;
    /// H0 = +sum X flips the sign of <X>.
    double x_beta(double beta0) const { return h0_sign * beta0; }
    void validate() const;
};

/// H0 sign whose X field points the same way as the target's, so that the
/// path never reverses the transverse field: -1 (H0 = +sum X) for h_x > 0,
/// +1 otherwise.
int aligned_h0_sign(double h_x);

/// f_n = (a + b n)^-c, J_n = -(f_n / h_x) ((n + 1/2) / M)^d.
struct PowerLawSchedule {
    int steps = 16;
    double a = 1.186;
    double b = 0.077;
    double c = 2.181;
    double d = 0.469;
    double h_x = 2.0;

    void validate() const;
};

/// k first-order Trotter steps of the final Hamiltonian inserted between a
/// circuit and its inverse.
struct ProbeSpec {
    int k = 0;
    double dt_probe = 0.1;
};

enum class NoisePlacement { PerTrotterStep, PerTwoQubitGate };

/// One first-order step exp(i dt H) of a static Ising Hamiltonian, ZZ first.
TrotterStep ising_trotter_step(const Lattice& lattice, const IsingParams& params, double dt);

Circuit linear_trotter_circuit(const LinearSchedule& schedule, const Lattice& lattice);

/// `steps` repetitions of a static Ising step (the quench setting).
Circuit quench_circuit(const Lattice& lattice, const IsingParams& params, int steps, double dt);

/// (J_n, f_n) for n = 0..M-1.
std::vector<std::pair<double, double>> hardware_schedule(const PowerLawSchedule& spec);

/// prod_n V(J_n, f_n) with V(J, f) = exp(i f sum X) exp(i J sum ZZ).
Circuit hardware_circuit(const PowerLawSchedule& spec, const Lattice& lattice);

/// First half of `base` (or all of it when halve is false) followed by its
/// exact inverse. The result is noiseless; attach noise afterwards.
Circuit mirror_circuit(const Circuit& base, bool halve);

/// U, then probe.k copies of `final_step` (built with dt_probe), then U^dagger.
Circuit adiabaticity_probe_circuit(const Circuit& base, const ProbeSpec& probe, const TrotterStep& final_step);

/// Inserts depolarizing layers of strength p, either on every qubit after
/// each Trotter step or on both qubits after each ZZ edge rotation.
Circuit attach_noise(const Circuit& circuit, double p, NoisePlacement placement);

}  // namespace adiatherm

#endif  // ADIATHERM_SCHEDULES_HPP
