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

#ifndef ADIATHERM_TYPES_HPP
#define ADIATHERM_TYPES_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace adiatherm {

using Complex = std::complex<double>;
using Index = std::uint64_t;

/// Largest register held as a dense density matrix (4^N amplitudes).
inline constexpr int kMaxDensityQubits = 12;
/// Largest register held as a statevector.
inline constexpr int kMaxStateVectorQubits = 24;
/// Eigenvalues below this contribute nothing to -sum(l log l).
inline constexpr double kEntropyClamp = 1e-12;

/// Precondition or configuration violation.
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Register too large for the requested backend.
class CapacityError : public std::length_error {
  public:
    using std::length_error::length_error;
};

/// Numerical breakdown (NaN, failed eigensolve, diverging estimator).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr Index pow2(int n) { return Index{1} << n; }

}  // namespace adiatherm

#endif  // ADIATHERM_TYPES_HPP
