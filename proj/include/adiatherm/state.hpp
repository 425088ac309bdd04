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

#ifndef ADIATHERM_STATE_HPP
#define ADIATHERM_STATE_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "adiatherm/circuit.hpp"
#include "adiatherm/pauli_sum.hpp"
#include "adiatherm/types.hpp"

namespace adiatherm {

using Rng = std::mt19937_64;

/// Independent, reproducible stream for (master seed, stream id).
Rng make_stream(std::uint64_t master_seed, std::uint64_t stream_id);

/// Pure state on N qubits. Qubit j is bit j of the basis index.
class StateVector {
  public:
    /// |0...0>.
    explicit StateVector(int n_qubits);
    StateVector(int n_qubits, std::vector<Complex> amplitudes);

    int n_qubits() const { return n_qubits_; }
    Index dimension() const { return amps_.size(); }
    std::span<Complex> amplitudes() { return amps_; }
    std::span<const Complex> amplitudes() const { return amps_; }
    Complex operator[](Index i) const { return amps_[i]; }

    double norm_squared() const;

  private:
    int n_qubits_;
    std::vector<Complex> amps_;
};

/// Operator on N qubits stored vectorized: the (row, col) entry lives at the
/// index whose even bits are the row and odd bits the column, so that qubit j
/// owns bits 2j and 2j+1. A state built through the factories below is
/// Hermitian, unit-trace and PSD; the same container also carries
/// Heisenberg-picture observables, which need not satisfy those invariants.
class DensityMatrix {
  public:
    /// |0...0><0...0|.
    explicit DensityMatrix(int n_qubits);

    static DensityMatrix maximally_mixed(int n_qubits);
    static DensityMatrix from_pure(const StateVector& psi);
    static DensityMatrix from_dense(const Eigen::MatrixXcd& matrix);
    /// Matrix of a Pauli sum; a general Hermitian operator, not a state.
    static DensityMatrix from_observable(const PauliSum& op);

    int n_qubits() const { return n_qubits_; }
    Index dimension() const { return pow2(n_qubits_); }

    Complex at(Index row, Index col) const;
    void set(Index row, Index col, Complex value);

    std::span<Complex> vectorized() { return data_; }
    std::span<const Complex> vectorized() const { return data_; }

    Eigen::MatrixXcd to_dense() const;

    Complex trace() const;
    double purity() const;

    struct Check {
        double trace_error = 0.0;
        double hermiticity_error = 0.0;
        double min_eigenvalue = 0.0;
        bool ok(double tol = 1e-10, double psd_tol = 1e-9) const {
            return trace_error <= tol && hermiticity_error <= tol && min_eigenvalue >= -psd_tol;
        }
    };
    /// Measures trace, Hermiticity and PSD deviations (dense eigensolve).
    Check check() const;

  private:
    DensityMatrix(int n_qubits, std::vector<Complex> data);

    int n_qubits_;
    std::vector<Complex> data_;
};

/// Tensor product of X eigenstates; signs[j] = +1 gives |+>, -1 gives |->.
StateVector new_basis_product_state(int n_qubits, std::span<const int> x_signs);

/// Unitary layers. Noise layers are rejected for statevectors (use the
/// trajectory overloads) and applied as channels to density matrices.
void apply_gate_layer(StateVector& psi, const Layer& layer);
void apply_gate_layer(DensityMatrix& rho, const Layer& layer);

/// rho <- (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z) on `qubit`.
void apply_depolarizing(DensityMatrix& rho, int qubit, double p);

/// With probability p applies X, Y or Z (each p/3) to `qubit`.
void sample_depolarizing_trajectory(StateVector& psi, int qubit, double p, Rng& rng);

/// Called after each Trotter step with the zero-based step index.
template <class State>
using StepObserver = std::function<void(std::size_t, const State&)>;

/// Applies every layer of the circuit in order. Per-qubit layers between two
/// ZZ layers are fused into a single pass over the amplitudes.
void apply_circuit(DensityMatrix& rho, const Circuit& circuit,
                   const StepObserver<DensityMatrix>& observer = {});
/// Noiseless circuits only.
void apply_circuit(StateVector& psi, const Circuit& circuit,
                   const StepObserver<StateVector>& observer = {});
/// Noise layers are unravelled into sampled Pauli errors.
void apply_circuit_trajectory(StateVector& psi, const Circuit& circuit, Rng& rng,
                              const StepObserver<StateVector>& observer = {});

/// Heisenberg picture: replaces op by C^dagger(op), the adjoint channel of the
/// circuit, so that tr(C(rho) op) = tr(rho C^dagger(op)).
void apply_circuit_adjoint(DensityMatrix& op, const Circuit& circuit);

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// -sum l ln l over eigenvalues (nats); eigenvalues below kEntropyClamp are dropped.
double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const Eigen::MatrixXcd& rho);

/// Entropy of qubits 0..N/2-1 divided by N/2.
double entropy_density_half(const DensityMatrix& rho);
double entropy_density_half(const StateVector& psi);

double expectation(const StateVector& psi, const PauliSum& op);
double expectation(const DensityMatrix& rho, const PauliSum& op);

/// |<a|b>|^2.
double fidelity(const StateVector& a, const StateVector& b);

enum class Basis { Z, X };

/// Born-rule samples after rotating into `basis`. Bit j of each outcome is
/// 1 when qubit j was found in the -1 eigenstate.
std::vector<Index> sample_measurements(const StateVector& psi, Basis basis, std::size_t shots,
                                       Rng& rng);

}  // namespace adiatherm

#endif  // ADIATHERM_STATE_HPP
