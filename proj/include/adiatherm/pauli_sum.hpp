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

#ifndef ADIATHERM_PAULI_SUM_HPP
#define ADIATHERM_PAULI_SUM_HPP

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "adiatherm/types.hpp"

namespace adiatherm {

/// Tensor product of single-qubit Paulis in X/Z bitmask form. Qubit j is
/// bit j. A Y on qubit j sets both bits.
struct PauliString {
    Index x_mask = 0;
    Index z_mask = 0;

    static PauliString from_letters(std::string_view letters);
    std::string letters(int n_qubits) const;
    int y_count() const;
    bool is_identity() const { return x_mask == 0 && z_mask == 0; }

    /// P|basis> = phase(basis) |basis ^ x_mask>.
    Complex phase(Index basis) const;

    friend bool operator==(const PauliString&, const PauliString&) = default;
    friend auto operator<=>(const PauliString&, const PauliString&) = default;
};

struct PauliTerm {
    double coefficient = 0.0;
    PauliString pauli;
};

/// Real linear combination of Pauli strings (a Hermitian operator). Terms with
/// identical strings are merged on construction; zero-weight terms are kept so
/// term counts stay predictable for lattice builders.
class PauliSum {
  public:
    PauliSum() = default;
    explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}

    int n_qubits() const { return n_qubits_; }
    const std::vector<PauliTerm>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    void add(double coefficient, PauliString pauli);
    void add(double coefficient, std::string_view letters) {
        add(coefficient, PauliString::from_letters(letters));
    }

    PauliSum operator+(const PauliSum& other) const;
    PauliSum operator*(double factor) const;

    /// Sum of identity-term coefficients (trace / 2^N).
    double identity_coefficient() const;

    /// Dense 2^N x 2^N matrix. Only for oracles; never on the evolution path.
    Eigen::MatrixXcd to_dense() const;
    /// Real dense matrix; valid when every term has an even number of Y.
    Eigen::MatrixXd to_dense_real() const;
    bool is_real() const;

    /// One "coeff letters" line per term, e.g. "-1 ZZII".
    std::string to_text() const;
    static PauliSum from_text(std::string_view text);

  private:
    int n_qubits_ = 0;
    std::vector<PauliTerm> terms_;
};

}  // namespace adiatherm

#endif  // ADIATHERM_PAULI_SUM_HPP
