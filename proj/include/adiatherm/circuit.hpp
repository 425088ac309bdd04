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

#ifndef ADIATHERM_CIRCUIT_HPP
#define ADIATHERM_CIRCUIT_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "adiatherm/types.hpp"

namespace adiatherm {

struct Edge {
    int a = 0;
    int b = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// prod_j exp(i angle X_j) over every qubit.
struct XRotationAll {
    double angle = 0.0;
    friend bool operator==(const XRotationAll&, const XRotationAll&) = default;
};

/// prod_j exp(i angle Z_j) over every qubit (longitudinal field term).
struct ZRotationAll {
    double angle = 0.0;
    friend bool operator==(const ZRotationAll&, const ZRotationAll&) = default;
};

/// prod_{(a,b) in edges} exp(i angle Z_a Z_b).
struct ZZRotation {
    std::vector<Edge> edges;
    double angle = 0.0;
    friend bool operator==(const ZZRotation&, const ZZRotation&) = default;
};

/// Single-qubit depolarizing channel of strength p on each listed qubit:
/// rho -> (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z).
struct NoiseLayer {
    double p = 0.0;
    std::vector<int> qubits;
    friend bool operator==(const NoiseLayer&, const NoiseLayer&) = default;
};

using Layer = std::variant<XRotationAll, ZRotationAll, ZZRotation, NoiseLayer>;

bool is_noise(const Layer& layer);

/// Exact inverse of a unitary layer (negated angle). Throws on noise layers.
Layer inverse_layer(const Layer& layer);

/// One Trotter step; the unit that noise attachment and mirroring count in.
struct TrotterStep {
    std::vector<Layer> layers;
    friend bool operator==(const TrotterStep&, const TrotterStep&) = default;
};

/// Ordered product of Trotter steps acting on a fixed register. Layers are
/// applied first-to-last, so steps[0].layers[0] acts first on the state.
class Circuit {
  public:
    Circuit() = default;
    explicit Circuit(int n_qubits) : n_qubits_(n_qubits) {}
    Circuit(int n_qubits, std::vector<TrotterStep> steps);

    int n_qubits() const { return n_qubits_; }
    const std::vector<TrotterStep>& steps() const { return steps_; }
    std::size_t step_count() const { return steps_.size(); }

    void push_step(TrotterStep step);
    void append(const Circuit& other);

    /// Layer-wise inverse: reversed order, negated angles, noise dropped.
    Circuit inverse() const;
    Circuit without_noise() const;
    /// First `count` steps.
    Circuit prefix(std::size_t count) const;

    /// Number of single-edge ZZ rotations.
    std::size_t two_qubit_gate_count() const;
    /// Number of NoiseLayer entries.
    std::size_t noise_layer_count() const;
    bool has_noise() const { return noise_layer_count() > 0; }

    /// Throws InvalidArgument when a layer references an out-of-range qubit,
    /// an edge has equal endpoints, an angle is not finite, or p is outside [0,1].
    void validate() const;

    /// Line-oriented text form:
    ///   qubits <n>
    ///   step
    ///   zz <angle> <a>-<b>,<a>-<b>,...
    ///   xall <angle>
    ///   zall <angle>
    ///   depol <p> <q>,<q>,...
    std::string to_text() const;
    static Circuit from_text(std::string_view text);

    friend bool operator==(const Circuit&, const Circuit&) = default;

  private:
    int n_qubits_ = 0;
    std::vector<TrotterStep> steps_;
};

}  // namespace adiatherm

#endif  // ADIATHERM_CIRCUIT_HPP
