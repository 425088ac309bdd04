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

#include "adiatherm/models.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace adiatherm {

namespace {

constexpr int kMaxDenseHamiltonianQubits = 14;

PauliString single(int q, char letter) {
    PauliString p;
    const Index bit = Index{1} << q;
    if (letter == 'X' || letter == 'Y') p.x_mask |= bit;
    if (letter == 'Z' || letter == 'Y') p.z_mask |= bit;
    return p;
}

PauliString zz(int a, int b) {
    PauliString p;
    p.z_mask = (Index{1} << a) | (Index{1} << b);
    return p;
}

/// Boltzmann weights shifted by the ground energy.
Eigen::VectorXd boltzmann(const Eigen::VectorXd& energies, double beta) {
    const double e0 = energies.minCoeff();
    Eigen::VectorXd w = (-beta * (energies.array() - e0)).exp();
    return w / w.sum();
}

}  // namespace

// ---------------------------------------------------------------------------
// Lattices

Lattice Lattice::chain(int n) {
    if (n < 2) throw InvalidArgument("chain needs at least two sites");
    Lattice l;
    l.kind_ = Kind::Chain;
    l.sites_ = n;
    l.lx_ = n;
    for (int j = 0; j + 1 < n; ++j) l.edges_.push_back({j, j + 1});
    return l;
}

Lattice Lattice::ring(int n) {
    if (n < 2) throw InvalidArgument("ring needs at least two sites");
    Lattice l;
    l.kind_ = Kind::Ring;
    l.sites_ = n;
    l.lx_ = n;
    for (int j = 0; j < n; ++j) l.edges_.push_back({j, (j + 1) % n});
    return l;
}

Lattice Lattice::torus(int lx, int ly) {
    if (lx < 2 || ly < 2) throw InvalidArgument("torus dimensions must be at least 2");
    Lattice l;
    l.kind_ = Kind::Torus;
    l.sites_ = lx * ly;
    l.lx_ = lx;
    l.ly_ = ly;
    for (int y = 0; y < ly; ++y) {
        for (int x = 0; x < lx; ++x) {
            const int site = x + lx * y;
            l.edges_.push_back({site, (x + 1) % lx + lx * y});
            l.edges_.push_back({site, x + lx * ((y + 1) % ly)});
        }
    }
    return l;
}

int Lattice::translate(int site, int dx, int dy) const {
    if (kind_ == Kind::Torus) {
        const int x = ((site % lx_) + dx % lx_ + lx_) % lx_;
        const int y = ((site / lx_) + dy % ly_ + ly_) % ly_;
        return x + lx_ * y;
    }
    return ((site + dx) % sites_ + sites_) % sites_;
}

// ---------------------------------------------------------------------------
// Hamiltonians

PauliSum ising_on(const Lattice& lattice, double j, double h_x, double h_z) {
    const int n = lattice.sites();
    PauliSum h(n);
    for (const auto& e : lattice.edges()) h.add(j, zz(e.a, e.b));
    if (h_x != 0.0) {
        for (int q = 0; q < n; ++q) h.add(h_x, single(q, 'X'));
    }
    if (h_z != 0.0) {
        for (int q = 0; q < n; ++q) h.add(h_z, single(q, 'Z'));
    }
    return h;
}

PauliSum ising_1d(int n, double j, double h_x, double h_z, bool periodic) {
    if (n < 2) throw InvalidArgument("1D Ising needs at least two sites");
    return ising_on(periodic ? Lattice::ring(n) : Lattice::chain(n), j, h_x, h_z);
}

PauliSum ising_2d_torus(int lx, int ly, double h_x) {
    // A width-2 direction doubles its bonds; PauliSum merges them into one
    // term of weight -2.
    return ising_on(Lattice::torus(lx, ly), -1.0, h_x, 0.0);
}

PauliSum h0_transverse(int n, int sign) {
    if (n < 1) throw InvalidArgument("need at least one qubit");
    if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
    PauliSum h(n);
    for (int q = 0; q < n; ++q) h.add(-static_cast<double>(sign), single(q, 'X'));
    return h;
}

// ---------------------------------------------------------------------------
// Dense oracles

Spectrum diagonalize(const PauliSum& h, bool with_vectors) {
    if (h.n_qubits() > kMaxDenseHamiltonianQubits || (with_vectors && h.n_qubits() > kMaxDensityQubits)) {
        throw CapacityError(fmt::format("dense diagonalization not supported for {} qubits", h.n_qubits()));
    }
    const auto options = with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
    Spectrum out;
    if (h.is_real()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.to_dense_real(), options);
        if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolve failed");
        out.energies = solver.eigenvalues();
        if (with_vectors) out.vectors = solver.eigenvectors().cast<Complex>();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.to_dense(), options);
        if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolve failed");
        out.energies = solver.eigenvalues();
        if (with_vectors) out.vectors = solver.eigenvectors();
    }
    return out;
}

DensityMatrix gibbs_from_spectrum(const Spectrum& spectrum, double beta) {
    if (!std::isfinite(beta)) throw InvalidArgument("beta must be finite");
    if (spectrum.vectors.size() == 0) throw InvalidArgument("spectrum lacks eigenvectors");
    const Eigen::VectorXd w = boltzmann(spectrum.energies, beta);
    const Eigen::MatrixXcd rho = spectrum.vectors * w.cast<Complex>().asDiagonal() * spectrum.vectors.adjoint();
    return DensityMatrix::from_dense(rho);
}

DensityMatrix gibbs_exact(const PauliSum& h, double beta) {
    if (h.n_qubits() > kMaxDensityQubits) {
        throw CapacityError(fmt::format("Gibbs state limited to {} qubits", kMaxDensityQubits));
    }
    return gibbs_from_spectrum(diagonalize(h, true), beta);
}

ThermalReference thermal_reference_curve(const Eigen::VectorXd& energies, int n_sites,
                                         std::span<const double> betas) {
    ThermalReference ref;
    for (double beta : betas) {
        if (!std::isfinite(beta)) throw InvalidArgument("beta grid must be finite");
        const Eigen::VectorXd p = boltzmann(energies, beta);
        double e = 0.0;
        double s = 0.0;
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            e += p[i] * energies[i];
            if (p[i] > 0.0) s -= p[i] * std::log(p[i]);
        }
        ref.beta.push_back(beta);
        ref.energy_density.push_back(e / n_sites);
        ref.entropy_density.push_back(s / n_sites);
    }
    return ref;
}

ThermalReference thermal_reference_curve(const PauliSum& h, std::span<const double> betas) {
    if (h.n_qubits() > kMaxDensityQubits) {
        throw CapacityError(fmt::format("thermal reference limited to {} qubits", kMaxDensityQubits));
    }
    return thermal_reference_curve(diagonalize(h, false).energies, h.n_qubits(), betas);
}

DensityMatrix product_gibbs_x(int n, double beta0) {
    if (std::isnan(beta0)) throw InvalidArgument("beta0 is NaN");
    DensityMatrix rho = DensityMatrix::maximally_mixed(n);
    const double t = std::tanh(beta0);
    std::vector<double> weight(n + 1);
    for (int k = 0; k <= n; ++k) weight[k] = std::pow(t, k) / static_cast<double>(pow2(n));
    // Entry (r, c) is 2^-N tanh^{|r xor c|}; row/col bits are interleaved.
    constexpr Index kEven = 0x5555555555555555ULL;
    auto data = rho.vectorized();
    for (Index v = 0; v < data.size(); ++v) {
        data[v] = weight[std::popcount((v ^ (v >> 1)) & kEven)];
    }
    return rho;
}

StateVector sample_product_gibbs_x(int n, double beta0, Rng& rng) {
    const double p_plus = 0.5 * (1.0 + std::tanh(beta0));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<int> signs(n);
    for (auto& s : signs) s = uniform(rng) < p_plus ? 1 : -1;
    return new_basis_product_state(n, signs);
}

double free_energy(const DensityMatrix& rho, const PauliSum& h, double beta) {
    if (beta == 0.0) throw InvalidArgument("free energy undefined at beta = 0");
    return expectation(rho, h) - von_neumann_entropy(rho) / beta;
}

std::vector<double> lowest_eigenvalues(const PauliSum& h, int k) {
    if (k < 1 || static_cast<Index>(k) > pow2(h.n_qubits())) {
        throw InvalidArgument(fmt::format("cannot take {} eigenvalues of a {}-qubit operator", k, h.n_qubits()));
    }
    const auto spectrum = diagonalize(h, false);
    return {spectrum.energies.data(), spectrum.energies.data() + k};
}

}  // namespace adiatherm
