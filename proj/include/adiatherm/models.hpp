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

#ifndef ADIATHERM_MODELS_HPP
#define ADIATHERM_MODELS_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "adiatherm/circuit.hpp"
#include "adiatherm/pauli_sum.hpp"
#include "adiatherm/state.hpp"

namespace adiatherm {

/// Sites and nearest-neighbour bonds. Torus site (x, y) has index x + Lx * y.
class Lattice {
  public:
    enum class Kind { Chain, Ring, Torus };

    static Lattice chain(int n);
    static Lattice ring(int n);
    /// Each site contributes its +x and +y bond, so a torus always has
    /// 2 Lx Ly bonds (width-2 directions carry doubled bonds).
    static Lattice torus(int lx, int ly);

    Kind kind() const { return kind_; }
    int sites() const { return sites_; }
    int lx() const { return lx_; }
    int ly() const { return ly_; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// Site index after translating by (dx, dy); chain/ring use dx only.
    int translate(int site, int dx, int dy = 0) const;

  private:
    Kind kind_ = Kind::Chain;
    int sites_ = 0;
    int lx_ = 0;
    int ly_ = 1;
    std::vector<Edge> edges_;
};

/// J sum Z_j Z_{j+1} + h_x sum X_j + h_z sum Z_j.
PauliSum ising_1d(int n, double j, double h_x, double h_z, bool periodic);

/// -sum_<ij> Z_i Z_j + h_x sum X_j on the periodic Lx x Ly torus.
PauliSum ising_2d_torus(int lx, int ly, double h_x);

/// J sum_edges ZZ + h_x sum X + h_z sum Z on an arbitrary lattice.
PauliSum ising_on(const Lattice& lattice, double j, double h_x, double h_z);

/// sign * (-sum_j X_j).
PauliSum h0_transverse(int n, int sign);

/// Eigenvalues (ascending) of a dense Hamiltonian; eigenvectors optional.
struct Spectrum {
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;  // empty unless requested
};
Spectrum diagonalize(const PauliSum& h, bool with_vectors);

/// exp(-beta H) / tr exp(-beta H).
DensityMatrix gibbs_exact(const PauliSum& h, double beta);
/// Same, from a precomputed spectrum with eigenvectors.
DensityMatrix gibbs_from_spectrum(const Spectrum& spectrum, double beta);

struct ThermalReference {
    std::vector<double> beta;
    std::vector<double> energy_density;
    std::vector<double> entropy_density;
};

/// Exact Gibbs energy and full-system entropy per site on a beta grid.
ThermalReference thermal_reference_curve(const PauliSum& h, std::span<const double> betas);
ThermalReference thermal_reference_curve(const Eigen::VectorXd& energies, int n_sites,
                                         std::span<const double> betas);

/// tensor_j (I/2 + tanh(beta0)/2 X_j), the Gibbs state of -sum X.
DensityMatrix product_gibbs_x(int n, double beta0);

/// One member of the product Gibbs ensemble: each qubit |+> with probability
/// (1 + tanh beta0)/2, otherwise |->.
StateVector sample_product_gibbs_x(int n, double beta0, Rng& rng);

/// tr(rho H) - S(rho)/beta with the full-system entropy.
double free_energy(const DensityMatrix& rho, const PauliSum& h, double beta);

/// k smallest eigenvalues, ascending.
std::vector<double> lowest_eigenvalues(const PauliSum& h, int k);

}  // namespace adiatherm

#endif  // ADIATHERM_MODELS_HPP
