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

#include "adiatherm/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include <fmt/format.h>

#include "kernels.hpp"

namespace adiatherm {

namespace kernels {
const BitInterleave& interleave() {
    static const BitInterleave table;
    return table;
}
}  // namespace kernels

namespace {

using kernels::Op1;
using kernels::Op2;

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

constexpr Complex kI{0.0, 1.0};

void require_statevector_size(int n) {
    if (n < 1) throw InvalidArgument("register needs at least one qubit");
    if (n > kMaxStateVectorQubits) {
        throw CapacityError(fmt::format("statevector limited to {} qubits, got {}",
                                        kMaxStateVectorQubits, n));
    }
}

void require_density_size(int n) {
    if (n < 1) throw InvalidArgument("register needs at least one qubit");
    if (n > kMaxDensityQubits) {
        throw CapacityError(fmt::format("density matrix limited to {} qubits, got {}",
                                        kMaxDensityQubits, n));
    }
}

void require_qubit(int q, int n) {
    if (q < 0 || q >= n) throw InvalidArgument(fmt::format("qubit {} out of range for {} qubits", q, n));
}

void require_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(fmt::format("depolarizing p={} outside [0,1]", p));
}

using Mat2 = std::array<Complex, 4>;

Mat2 x_rotation(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {Complex{c, 0}, Complex{0, s}, Complex{0, s}, Complex{c, 0}};
}

Mat2 z_rotation(double angle) {
    return {std::polar(1.0, angle), 0.0, 0.0, std::polar(1.0, -angle)};
}

const Mat2& pauli_matrix(int which) {
    static const std::array<Mat2, 4> kPaulis = {{
        {1.0, 0.0, 0.0, 1.0},
        {0.0, 1.0, 1.0, 0.0},
        {0.0, -kI, kI, 0.0},
        {1.0, 0.0, 0.0, -1.0},
    }};
    return kPaulis[which];
}

Op1 as_op1(int pos, const Mat2& g) {
    Op1 op;
    op.pos = pos;
    op.m = g;
    return op;
}

/// Superoperator of rho -> G rho G^dagger on the (row, col) bit pair.
Op2 unitary_superop(int qubit, const Mat2& g) {
    Op2 op;
    op.pos = 2 * qubit;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            for (int rp = 0; rp < 2; ++rp) {
                for (int cp = 0; cp < 2; ++cp) {
                    op.m[(r + 2 * c) * 4 + (rp + 2 * cp)] = g[r * 2 + rp] * std::conj(g[c * 2 + cp]);
                }
            }
        }
    }
    return op;
}

Op2 depolarizing_superop(int qubit, double p) {
    Op2 op;
    op.pos = 2 * qubit;
    const double keep_diag = 1.0 - 2.0 * p / 3.0;
    const double swap_diag = 2.0 * p / 3.0;
    const double coherence = 1.0 - 4.0 * p / 3.0;
    op.m[0 * 4 + 0] = keep_diag;
    op.m[0 * 4 + 3] = swap_diag;
    op.m[3 * 4 + 3] = keep_diag;
    op.m[3 * 4 + 0] = swap_diag;
    op.m[1 * 4 + 1] = coherence;
    op.m[2 * 4 + 2] = coherence;
    return op;
}

/// 0 = no error, 1/2/3 = X/Y/Z. One uniform draw per call.
int draw_pauli(double p, Rng& rng) {
    if (p <= 0.0) {
        (void)std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        return 0;
    }
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (u >= p) return 0;
    return 1 + std::min(2, static_cast<int>(3.0 * u / p));
}

std::vector<std::pair<int, int>> edge_pairs(const std::vector<Edge>& edges) {
    std::vector<std::pair<int, int>> out;
    out.reserve(edges.size());
    for (const auto& e : edges) out.emplace_back(e.a, e.b);
    return out;
}

/// Unsatisfied-edge count for every basis index of an n-qubit register.
std::vector<std::uint8_t> unsatisfied_table(int n, const std::vector<Edge>& edges) {
    if (edges.size() > 255) throw InvalidArgument("too many edges in one ZZ layer");
    const auto pairs = edge_pairs(edges);
    std::vector<std::uint8_t> table(pow2(n));
    for (Index i = 0; i < table.size(); ++i) {
        table[i] = static_cast<std::uint8_t>(kernels::unsatisfied_edges(i, pairs));
    }
    return table;
}

void validate_edges(const std::vector<Edge>& edges, int n) {
    for (const auto& e : edges) {
        require_qubit(e.a, n);
        require_qubit(e.b, n);
        if (e.a == e.b) throw InvalidArgument("edge endpoints coincide");
    }
}

/// exp(i angle sum Z_a Z_b): each satisfied edge contributes +angle, each
/// unsatisfied one -angle.
void apply_zz(StateVector& psi, const ZZRotation& g, const std::vector<std::uint8_t>* cached) {
    const int n_edges = static_cast<int>(g.edges.size());
    std::vector<Complex> phases(n_edges + 1);
    for (int u = 0; u <= n_edges; ++u) phases[u] = std::polar(1.0, g.angle * (n_edges - 2 * u));
    auto amps = psi.amplitudes();
    if (cached) {
        kernels::apply_diagonal(amps, phases, [&](Index i) { return (*cached)[i]; });
    } else {
        const auto pairs = edge_pairs(g.edges);
        kernels::apply_diagonal(amps, phases,
                                [&](Index i) { return kernels::unsatisfied_edges(i, pairs); });
    }
}

/// Entry (r, c) picks up exp(-2 i angle (u(r) - u(c))).
void apply_zz(DensityMatrix& rho, const ZZRotation& g, const std::vector<std::uint8_t>& unsat) {
    const int n_edges = static_cast<int>(g.edges.size());
    std::vector<Complex> phases(2 * n_edges + 1);
    for (int d = -n_edges; d <= n_edges; ++d) phases[d + n_edges] = std::polar(1.0, -2.0 * g.angle * d);
    const auto& il = kernels::interleave();
    auto amps = rho.vectorized();
    const Index n = amps.size();
    const Index chunk = std::min<Index>(n, 4096);
    for (Index hi = 0; hi * chunk < n; ++hi) {
        // rho.n_qubits() <= 12 so the high part holds at most 12 bits.
        const Index r_hi = Index{il.compact[hi & 0xFFF]} << 6;
        const Index c_hi = Index{il.compact[(hi >> 1) & 0x7FF]} << 6;
        Complex* base = amps.data() + hi * chunk;
        for (Index lo = 0; lo < chunk; ++lo) {
            const Index r = r_hi | il.compact[lo];
            const Index c = c_hi | il.compact[lo >> 1];
            base[lo] *= phases[unsat[r] - unsat[c] + n_edges];
        }
    }
}

/// Accumulates per-qubit operations between ZZ layers.
template <class Op>
class PendingLocal {
  public:
    explicit PendingLocal(int n) : ops_(n), active_(n, false) {}

    void push(int qubit, const Op& op) {
        if (active_[qubit]) {
            ops_[qubit] = kernels::compose(op, ops_[qubit]);
        } else {
            ops_[qubit] = op;
            active_[qubit] = true;
        }
    }

    template <int W>
    void flush(std::span<Complex> amps, int nbits) {
        std::vector<Op> batch;
        for (std::size_t q = 0; q < ops_.size(); ++q) {
            if (active_[q]) batch.push_back(ops_[q]);
            active_[q] = false;
        }
        if (!batch.empty()) kernels::apply_local_ops<W>(amps, nbits, batch);
    }

  private:
    std::vector<Op> ops_;
    std::vector<bool> active_;
};

/// Cache of the unsatisfied-edge table for the most recent edge list.
class EdgeTableCache {
  public:
    explicit EdgeTableCache(int n) : n_(n) {}
    const std::vector<std::uint8_t>& get(const std::vector<Edge>& edges) {
        if (!table_ || edges != edges_) {
            edges_ = edges;
            table_ = unsatisfied_table(n_, edges);
        }
        return *table_;
    }

  private:
    int n_;
    std::vector<Edge> edges_;
    std::optional<std::vector<std::uint8_t>> table_;
};

void dm_push_layer(DensityMatrix& rho, const Layer& layer, PendingLocal<Op2>& pending,
                   EdgeTableCache& cache) {
    const int n = rho.n_qubits();
    std::visit(Overloaded{
                   [&](const XRotationAll& g) {
                       const auto m = x_rotation(g.angle);
                       for (int q = 0; q < n; ++q) pending.push(q, unitary_superop(q, m));
                   },
                   [&](const ZRotationAll& g) {
                       const auto m = z_rotation(g.angle);
                       for (int q = 0; q < n; ++q) pending.push(q, unitary_superop(q, m));
                   },
                   [&](const NoiseLayer& noise) {
                       require_probability(noise.p);
                       for (int q : noise.qubits) {
                           require_qubit(q, n);
                           pending.push(q, depolarizing_superop(q, noise.p));
                       }
                   },
                   [&](const ZZRotation& g) {
                       validate_edges(g.edges, n);
                       pending.flush<2>(rho.vectorized(), 2 * n);
                       apply_zz(rho, g, cache.get(g.edges));
                   },
               },
               layer);
}

void sv_push_layer(StateVector& psi, const Layer& layer, PendingLocal<Op1>& pending,
                   EdgeTableCache* cache, Rng* rng) {
    const int n = psi.n_qubits();
    std::visit(Overloaded{
                   [&](const XRotationAll& g) {
                       const auto m = x_rotation(g.angle);
                       for (int q = 0; q < n; ++q) pending.push(q, as_op1(q, m));
                   },
                   [&](const ZRotationAll& g) {
                       const auto m = z_rotation(g.angle);
                       for (int q = 0; q < n; ++q) pending.push(q, as_op1(q, m));
                   },
                   [&](const NoiseLayer& noise) {
                       if (rng == nullptr) {
                           throw InvalidArgument("noise layers on a statevector need the trajectory backend");
                       }
                       require_probability(noise.p);
                       for (int q : noise.qubits) {
                           require_qubit(q, n);
                           const int which = draw_pauli(noise.p, *rng);
                           if (which != 0) pending.push(q, as_op1(q, pauli_matrix(which)));
                       }
                   },
                   [&](const ZZRotation& g) {
                       validate_edges(g.edges, n);
                       pending.flush<1>(psi.amplitudes(), n);
                       apply_zz(psi, g, cache ? &cache->get(g.edges) : nullptr);
                   },
               },
               layer);
}

template <class State, class PushFn, class FlushFn>
void run_steps(State& state, const Circuit& circuit, const StepObserver<State>& observer, PushFn push,
               FlushFn flush) {
    if (circuit.n_qubits() != state.n_qubits()) {
        throw InvalidArgument(fmt::format("circuit on {} qubits applied to {}-qubit state",
                                          circuit.n_qubits(), state.n_qubits()));
    }
    const auto& steps = circuit.steps();
    for (std::size_t s = 0; s < steps.size(); ++s) {
        for (const auto& layer : steps[s].layers) push(layer);
        flush();
        if (observer) observer(s, state);
    }
}

}  // namespace

Rng make_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                      0x9e3779b9U};
    return Rng(seq);
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    require_statevector_size(n_qubits);
    amps_.assign(pow2(n_qubits), Complex{});
    amps_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    require_statevector_size(n_qubits);
    if (amps_.size() != pow2(n_qubits)) throw InvalidArgument("amplitude count is not 2^n");
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const auto& a : amps_) total += std::norm(a);
    return total;
}

StateVector new_basis_product_state(int n_qubits, std::span<const int> x_signs) {
    require_statevector_size(n_qubits);
    if (x_signs.size() != static_cast<std::size_t>(n_qubits)) {
        throw InvalidArgument("need one X sign per qubit");
    }
    Index minus_mask = 0;
    for (int j = 0; j < n_qubits; ++j) {
        if (x_signs[j] == -1) {
            minus_mask |= Index{1} << j;
        } else if (x_signs[j] != 1) {
            throw InvalidArgument("X signs must be +1 or -1");
        }
    }
    const double scale = std::pow(2.0, -0.5 * n_qubits);
    std::vector<Complex> amps(pow2(n_qubits));
    for (Index i = 0; i < amps.size(); ++i) {
        amps[i] = (std::popcount(i & minus_mask) & 1) ? -scale : scale;
    }
    return StateVector(n_qubits, std::move(amps));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(int n_qubits) : n_qubits_(n_qubits) {
    require_density_size(n_qubits);
    data_.assign(pow2(2 * n_qubits), Complex{});
    data_[0] = 1.0;
}

DensityMatrix::DensityMatrix(int n_qubits, std::vector<Complex> data)
    : n_qubits_(n_qubits), data_(std::move(data)) {}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
    require_density_size(n_qubits);
    DensityMatrix rho(n_qubits, std::vector<Complex>(pow2(2 * n_qubits)));
    const double w = 1.0 / static_cast<double>(pow2(n_qubits));
    for (Index r = 0; r < rho.dimension(); ++r) rho.set(r, r, w);
    return rho;
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
    require_density_size(psi.n_qubits());
    DensityMatrix rho(psi.n_qubits(), std::vector<Complex>(pow2(2 * psi.n_qubits())));
    const Index dim = psi.dimension();
    for (Index r = 0; r < dim; ++r) {
        for (Index c = 0; c < dim; ++c) rho.set(r, c, psi[r] * std::conj(psi[c]));
    }
    return rho;
}

DensityMatrix DensityMatrix::from_dense(const Eigen::MatrixXcd& matrix) {
    const Index dim = static_cast<Index>(matrix.rows());
    if (matrix.cols() != matrix.rows() || dim == 0 || (dim & (dim - 1)) != 0) {
        throw InvalidArgument("density matrix must be square with power-of-two dimension");
    }
    const int n = std::countr_zero(dim);
    require_density_size(n);
    DensityMatrix rho(n, std::vector<Complex>(dim * dim));
    for (Index r = 0; r < dim; ++r) {
        for (Index c = 0; c < dim; ++c) rho.set(r, c, matrix(r, c));
    }
    return rho;
}

DensityMatrix DensityMatrix::from_observable(const PauliSum& op) {
    require_density_size(op.n_qubits());
    DensityMatrix out(op.n_qubits(), std::vector<Complex>(pow2(2 * op.n_qubits())));
    const Index dim = out.dimension();
    const auto& il = kernels::interleave();
    for (const auto& t : op.terms()) {
        for (Index col = 0; col < dim; ++col) {
            out.data_[il.join(col ^ t.pauli.x_mask, col)] += t.coefficient * t.pauli.phase(col);
        }
    }
    return out;
}

Complex DensityMatrix::at(Index row, Index col) const { return data_[kernels::interleave().join(row, col)]; }

void DensityMatrix::set(Index row, Index col, Complex value) {
    data_[kernels::interleave().join(row, col)] = value;
}

Eigen::MatrixXcd DensityMatrix::to_dense() const {
    const Index dim = dimension();
    Eigen::MatrixXcd m(dim, dim);
    for (Index r = 0; r < dim; ++r) {
        for (Index c = 0; c < dim; ++c) m(r, c) = at(r, c);
    }
    return m;
}

Complex DensityMatrix::trace() const {
    Complex total = 0.0;
    for (Index r = 0; r < dimension(); ++r) total += at(r, r);
    return total;
}

double DensityMatrix::purity() const {
    // tr(rho^2) = sum |rho_rc|^2 for Hermitian rho.
    double total = 0.0;
    for (const auto& v : data_) total += std::norm(v);
    return total;
}

DensityMatrix::Check DensityMatrix::check() const {
    Check out;
    out.trace_error = std::abs(trace() - 1.0);
    const auto m = to_dense();
    out.hermiticity_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
    const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolve failed in density check");
    out.min_eigenvalue = solver.eigenvalues().minCoeff();
    return out;
}

// ---------------------------------------------------------------------------
// Layers and circuits

void apply_gate_layer(StateVector& psi, const Layer& layer) {
    PendingLocal<Op1> pending(psi.n_qubits());
    sv_push_layer(psi, layer, pending, nullptr, nullptr);
    pending.flush<1>(psi.amplitudes(), psi.n_qubits());
}

void apply_gate_layer(DensityMatrix& rho, const Layer& layer) {
    PendingLocal<Op2> pending(rho.n_qubits());
    EdgeTableCache cache(rho.n_qubits());
    dm_push_layer(rho, layer, pending, cache);
    pending.flush<2>(rho.vectorized(), 2 * rho.n_qubits());
}

void apply_depolarizing(DensityMatrix& rho, int qubit, double p) {
    require_probability(p);
    require_qubit(qubit, rho.n_qubits());
    const Op2 op = depolarizing_superop(qubit, p);
    kernels::apply_local_ops<2>(rho.vectorized(), 2 * rho.n_qubits(), std::span(&op, 1));
}

void sample_depolarizing_trajectory(StateVector& psi, int qubit, double p, Rng& rng) {
    require_probability(p);
    require_qubit(qubit, psi.n_qubits());
    const int which = draw_pauli(p, rng);
    if (which == 0) return;
    const Op1 op = as_op1(qubit, pauli_matrix(which));
    kernels::apply_local_ops<1>(psi.amplitudes(), psi.n_qubits(), std::span(&op, 1));
}

void apply_circuit(DensityMatrix& rho, const Circuit& circuit, const StepObserver<DensityMatrix>& observer) {
    PendingLocal<Op2> pending(rho.n_qubits());
    EdgeTableCache cache(rho.n_qubits());
    run_steps(
        rho, circuit, observer, [&](const Layer& layer) { dm_push_layer(rho, layer, pending, cache); },
        [&] { pending.flush<2>(rho.vectorized(), 2 * rho.n_qubits()); });
}

void apply_circuit(StateVector& psi, const Circuit& circuit, const StepObserver<StateVector>& observer) {
    PendingLocal<Op1> pending(psi.n_qubits());
    EdgeTableCache cache(psi.n_qubits());
    run_steps(
        psi, circuit, observer, [&](const Layer& layer) { sv_push_layer(psi, layer, pending, &cache, nullptr); },
        [&] { pending.flush<1>(psi.amplitudes(), psi.n_qubits()); });
}

void apply_circuit_trajectory(StateVector& psi, const Circuit& circuit, Rng& rng,
                              const StepObserver<StateVector>& observer) {
    PendingLocal<Op1> pending(psi.n_qubits());
    EdgeTableCache cache(psi.n_qubits());
    run_steps(
        psi, circuit, observer, [&](const Layer& layer) { sv_push_layer(psi, layer, pending, &cache, &rng); },
        [&] { pending.flush<1>(psi.amplitudes(), psi.n_qubits()); });
}

void apply_circuit_adjoint(DensityMatrix& op, const Circuit& circuit) {
    // Unitary layers invert; depolarizing channels are self-adjoint.
    Circuit adjoint(circuit.n_qubits());
    for (auto step = circuit.steps().rbegin(); step != circuit.steps().rend(); ++step) {
        TrotterStep s;
        for (auto layer = step->layers.rbegin(); layer != step->layers.rend(); ++layer) {
            s.layers.push_back(is_noise(*layer) ? *layer : inverse_layer(*layer));
        }
        adjoint.push_step(std::move(s));
    }
    apply_circuit(op, adjoint);
}

// ---------------------------------------------------------------------------
// Reduced states, entropy, observables

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
    const int n = rho.n_qubits();
    if (keep.empty()) throw InvalidArgument("partial trace needs a nonempty keep set");
    std::vector<int> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
        throw InvalidArgument("partial trace keep set has duplicates");
    }
    for (int q : kept) require_qubit(q, n);
    std::vector<int> traced;
    for (int q = 0; q < n; ++q) {
        if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
    }
    auto scatter = [](const std::vector<int>& qubits) {
        std::vector<Index> map(pow2(static_cast<int>(qubits.size())));
        for (Index x = 0; x < map.size(); ++x) {
            Index full = 0;
            for (std::size_t k = 0; k < qubits.size(); ++k) full |= ((x >> k) & 1U) << qubits[k];
            map[x] = full;
        }
        return map;
    };
    const auto kept_map = scatter(kept);
    const auto traced_map = scatter(traced);
    const int nk = static_cast<int>(kept.size());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(pow2(nk), pow2(nk));
    for (Index r = 0; r < kept_map.size(); ++r) {
        for (Index c = 0; c < kept_map.size(); ++c) {
            Complex acc = 0.0;
            for (Index t : traced_map) acc += rho.at(kept_map[r] | t, kept_map[c] | t);
            out(r, c) = acc;
        }
    }
    return DensityMatrix::from_dense(out);
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
    const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed in entropy");
    double s = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double l = solver.eigenvalues()[i];
        if (!std::isfinite(l)) throw NumericalError("non-finite eigenvalue in entropy");
        if (l >= kEntropyClamp) s -= l * std::log(l);
    }
    return s;
}

double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.to_dense()); }

double entropy_density_half(const DensityMatrix& rho) {
    const int n = rho.n_qubits();
    if (n % 2 != 0) throw InvalidArgument("half-system entropy needs an even qubit count");
    std::vector<int> half(n / 2);
    std::iota(half.begin(), half.end(), 0);
    return von_neumann_entropy(partial_trace(rho, half)) / (n / 2);
}

double entropy_density_half(const StateVector& psi) {
    const int n = psi.n_qubits();
    if (n % 2 != 0) throw InvalidArgument("half-system entropy needs an even qubit count");
    const Index dim_a = pow2(n / 2);
    // Column-major view: row index = qubits of A (low bits), column = rest.
    Eigen::Map<const Eigen::MatrixXcd> m(psi.amplitudes().data(), dim_a, dim_a);
    const Eigen::MatrixXcd rho_a = m * m.adjoint();
    return von_neumann_entropy(rho_a) / (n / 2);
}

double expectation(const StateVector& psi, const PauliSum& op) {
    if (op.n_qubits() != psi.n_qubits()) throw InvalidArgument("observable and state sizes differ");
    const auto amps = psi.amplitudes();
    Complex total = 0.0;
    for (const auto& t : op.terms()) {
        Complex acc = 0.0;
        const int y = t.pauli.y_count();
        const Complex base = std::array<Complex, 4>{1.0, kI, -1.0, -kI}[y & 3];
        for (Index i = 0; i < amps.size(); ++i) {
            const double sign = (std::popcount(i & t.pauli.z_mask) & 1) ? -1.0 : 1.0;
            acc += std::conj(amps[i ^ t.pauli.x_mask]) * amps[i] * sign;
        }
        total += t.coefficient * base * acc;
    }
    if (std::abs(total.imag()) > 1e-9 * std::max(1.0, std::abs(total.real()))) {
        throw NumericalError("expectation value has a large imaginary part");
    }
    return total.real();
}

double expectation(const DensityMatrix& rho, const PauliSum& op) {
    if (op.n_qubits() != rho.n_qubits()) throw InvalidArgument("observable and state sizes differ");
    const Index dim = rho.dimension();
    const auto& il = kernels::interleave();
    const auto data = rho.vectorized();
    Complex total = 0.0;
    for (const auto& t : op.terms()) {
        Complex acc = 0.0;
        // P(r ^ x, r) = phase(r), so tr(rho P) = sum_r rho(r, r ^ x) phase(r).
        for (Index r = 0; r < dim; ++r) acc += data[il.join(r, r ^ t.pauli.x_mask)] * t.pauli.phase(r);
        total += t.coefficient * acc;
    }
    if (std::abs(total.imag()) > 1e-9 * std::max(1.0, std::abs(total.real()))) {
        throw NumericalError("expectation value has a large imaginary part");
    }
    return total.real();
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits()) throw InvalidArgument("fidelity of states on different registers");
    Complex overlap = 0.0;
    for (Index i = 0; i < a.dimension(); ++i) overlap += std::conj(a[i]) * b[i];
    return std::norm(overlap);
}

std::vector<Index> sample_measurements(const StateVector& psi, Basis basis, std::size_t shots, Rng& rng) {
    if (shots < 1) throw InvalidArgument("need at least one shot");
    StateVector rotated = psi;
    if (basis == Basis::X) {
        const double h = 1.0 / std::sqrt(2.0);
        std::vector<Op1> ops;
        for (int q = 0; q < psi.n_qubits(); ++q) ops.push_back(as_op1(q, {h, h, h, -h}));
        kernels::apply_local_ops<1>(rotated.amplitudes(), psi.n_qubits(), ops);
    }
    std::vector<double> cumulative(rotated.dimension());
    double running = 0.0;
    for (Index i = 0; i < rotated.dimension(); ++i) {
        running += std::norm(rotated[i]);
        cumulative[i] = running;
    }
    std::uniform_real_distribution<double> uniform(0.0, running);
    std::vector<Index> out(shots);
    for (auto& outcome : out) {
        const double u = uniform(rng);
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) --it;
        outcome = static_cast<Index>(it - cumulative.begin());
    }
    return out;
}

}  // namespace adiatherm
