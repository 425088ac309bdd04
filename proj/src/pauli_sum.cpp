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

#include "adiatherm/pauli_sum.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

namespace adiatherm {

PauliString PauliString::from_letters(std::string_view letters) {
    if (letters.size() > 63) throw InvalidArgument("pauli string longer than 63 qubits");
    PauliString p;
    for (std::size_t j = 0; j < letters.size(); ++j) {
        const Index bit = Index{1} << j;
        switch (letters[j]) {
            case 'I': break;
            case 'X': p.x_mask |= bit; break;
            case 'Y': p.x_mask |= bit; p.z_mask |= bit; break;
            case 'Z': p.z_mask |= bit; break;
            default:
                throw InvalidArgument(fmt::format("bad pauli letter '{}'", letters[j]));
        }
    }
    return p;
}

std::string PauliString::letters(int n_qubits) const {
    std::string out(static_cast<std::size_t>(n_qubits), 'I');
    for (int j = 0; j < n_qubits; ++j) {
        const bool x = (x_mask >> j) & 1U;
        const bool z = (z_mask >> j) & 1U;
        out[j] = x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
    }
    return out;
}

int PauliString::y_count() const { return std::popcount(x_mask & z_mask); }

Complex PauliString::phase(Index basis) const {
    // Y = i X Z, so each Y contributes i and every Z-type bit contributes (-1)^b.
    static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const int sign_flips = std::popcount(basis & z_mask);
    const int power = (y_count() + 2 * sign_flips) & 3;
    return kIPow[power];
}

void PauliSum::add(double coefficient, PauliString pauli) {
    if (!std::isfinite(coefficient)) throw InvalidArgument("pauli coefficient must be finite");
    if (n_qubits_ < 64 && ((pauli.x_mask | pauli.z_mask) >> n_qubits_) != 0) {
        throw InvalidArgument("pauli string acts outside the register");
    }
    for (auto& term : terms_) {
        if (term.pauli == pauli) {
            term.coefficient += coefficient;
            return;
        }
    }
    terms_.push_back({coefficient, pauli});
}

PauliSum PauliSum::operator+(const PauliSum& other) const {
    if (other.n_qubits_ != n_qubits_) throw InvalidArgument("pauli sums on different registers");
    PauliSum out = *this;
    for (const auto& t : other.terms_) out.add(t.coefficient, t.pauli);
    return out;
}

PauliSum PauliSum::operator*(double factor) const {
    PauliSum out = *this;
    for (auto& t : out.terms_) t.coefficient *= factor;
    return out;
}

double PauliSum::identity_coefficient() const {
    double total = 0.0;
    for (const auto& t : terms_) {
        if (t.pauli.is_identity()) total += t.coefficient;
    }
    return total;
}

bool PauliSum::is_real() const {
    for (const auto& t : terms_) {
        if (t.pauli.y_count() % 2 != 0) return false;
    }
    return true;
}

Eigen::MatrixXcd PauliSum::to_dense() const {
    if (n_qubits_ > 14) throw CapacityError("dense Hamiltonian limited to 14 qubits");
    const Index dim = pow2(n_qubits_);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& t : terms_) {
        for (Index col = 0; col < dim; ++col) {
            h(col ^ t.pauli.x_mask, col) += t.coefficient * t.pauli.phase(col);
        }
    }
    return h;
}

Eigen::MatrixXd PauliSum::to_dense_real() const {
    if (!is_real()) throw InvalidArgument("pauli sum has complex matrix elements");
    if (n_qubits_ > 14) throw CapacityError("dense Hamiltonian limited to 14 qubits");
    const Index dim = pow2(n_qubits_);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& t : terms_) {
        for (Index col = 0; col < dim; ++col) {
            h(col ^ t.pauli.x_mask, col) += t.coefficient * t.pauli.phase(col).real();
        }
    }
    return h;
}

std::string PauliSum::to_text() const {
    std::string out;
    for (const auto& t : terms_) {
        out += fmt::format("{} {}\n", t.coefficient, t.pauli.letters(n_qubits_));
    }
    return out;
}

PauliSum PauliSum::from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    PauliSum out;
    bool sized = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        double coefficient = 0.0;
        std::string letters;
        if (!(fields >> coefficient >> letters)) {
            throw InvalidArgument(fmt::format("bad hamiltonian line '{}'", line));
        }
        if (!sized) {
            out.n_qubits_ = static_cast<int>(letters.size());
            sized = true;
        } else if (static_cast<int>(letters.size()) != out.n_qubits_) {
            throw InvalidArgument("hamiltonian lines disagree on qubit count");
        }
        out.add(coefficient, letters);
    }
    return out;
}

}  // namespace adiatherm
