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

#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "adiatherm/state.hpp"
#include "oracle.hpp"

using namespace adiatherm;

namespace {

constexpr int kN = 5;

StateVector to_state(const oracle::Vec& v) {
    return StateVector(static_cast<int>(std::log2(v.size())), std::vector<Complex>(v.begin(), v.end()));
}

oracle::Vec to_vec(const StateVector& psi) {
    oracle::Vec v(static_cast<Eigen::Index>(psi.dimension()));
    for (Index i = 0; i < psi.dimension(); ++i) v(static_cast<Eigen::Index>(i)) = psi[i];
    return v;
}

/// Oracle unitary of one gate layer.
oracle::Mat layer_unitary(int n, const Layer& layer) {
    const auto dim = Eigen::Index{1} << n;
    oracle::Mat u = oracle::Mat::Identity(dim, dim);
    if (const auto* x = std::get_if<XRotationAll>(&layer)) {
        for (int q = 0; q < n; ++q) u = oracle::expi(oracle::string_matrix(oracle::single(n, q, 'X')), x->angle) * u;
    } else if (const auto* z = std::get_if<ZRotationAll>(&layer)) {
        for (int q = 0; q < n; ++q) u = oracle::expi(oracle::string_matrix(oracle::single(n, q, 'Z')), z->angle) * u;
    } else if (const auto* zz = std::get_if<ZZRotation>(&layer)) {
        for (const auto& e : zz->edges) {
            u = oracle::expi(oracle::string_matrix(oracle::pair(n, e.a, e.b, 'Z')), zz->angle) * u;
        }
    }
    return u;
}

std::vector<Layer> sample_layers() {
    return {XRotationAll{0.37}, ZRotationAll{-1.1}, ZZRotation{{{0, 1}, {1, 2}, {4, 0}, {0, 1}}, 0.23},
            ZZRotation{{{3, 1}}, -2.0}};
}

PauliSum random_observable(int n, std::mt19937_64& rng) {
    static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
    std::uniform_int_distribution<int> pick(0, 3);
    std::normal_distribution<double> g;
    PauliSum op(n);
    for (int t = 0; t < 6; ++t) {
        std::string s;
        for (int q = 0; q < n; ++q) s.push_back(kLetters[pick(rng)]);
        op.add(g(rng), s);
    }
    return op;
}

oracle::Mat random_density(int n, std::mt19937_64& rng) {
    oracle::Mat rho = oracle::Mat::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
    for (int k = 0; k < 3; ++k) {
        const auto v = oracle::random_state(n, rng);
        rho += (k + 1) / 6.0 * v * v.adjoint();
    }
    return rho;
}

}  // namespace

TEST_CASE("registers enforce size limits") {
    CHECK_THROWS_AS(StateVector(0), InvalidArgument);
    CHECK_THROWS_AS(StateVector(kMaxStateVectorQubits + 1), CapacityError);
    CHECK_THROWS_AS(DensityMatrix(kMaxDensityQubits + 1), CapacityError);
    CHECK_THROWS_AS(StateVector(2, std::vector<Complex>(3)), InvalidArgument);
}

TEST_CASE("statevector gate layers match the dense oracle") {
    std::mt19937_64 rng(5);
    for (const auto& layer : sample_layers()) {
        const auto v = oracle::random_state(kN, rng);
        auto psi = to_state(v);
        apply_gate_layer(psi, layer);
        CHECK((to_vec(psi) - layer_unitary(kN, layer) * v).norm() < 1e-12);
    }
    auto psi = to_state(oracle::random_state(kN, rng));
    CHECK_THROWS_AS(apply_gate_layer(psi, NoiseLayer{0.1, {0}}), InvalidArgument);
}

TEST_CASE("density-matrix gate layers conjugate by the oracle unitary") {
    std::mt19937_64 rng(6);
    for (const auto& layer : sample_layers()) {
        const auto rho0 = random_density(kN, rng);
        auto rho = DensityMatrix::from_dense(rho0);
        apply_gate_layer(rho, layer);
        const auto u = layer_unitary(kN, layer);
        CHECK((rho.to_dense() - u * rho0 * u.adjoint()).norm() < 1e-12);
    }
}

TEST_CASE("depolarizing channel matches the Kraus oracle") {
    std::mt19937_64 rng(7);
    const auto rho0 = random_density(kN, rng);
    for (int q : {0, 2, 4}) {
        auto rho = DensityMatrix::from_dense(rho0);
        apply_depolarizing(rho, q, 0.3);
        CHECK((rho.to_dense() - oracle::depolarize(rho0, kN, q, 0.3)).norm() < 1e-12);
        CHECK(rho.check().ok());
    }
    auto rho = DensityMatrix::from_dense(rho0);
    apply_gate_layer(rho, NoiseLayer{0.05, {1, 3}});
    const auto ref = oracle::depolarize(oracle::depolarize(rho0, kN, 1, 0.05), kN, 3, 0.05);
    CHECK((rho.to_dense() - ref).norm() < 1e-12);
    CHECK_THROWS_AS(apply_depolarizing(rho, 0, 1.5), InvalidArgument);
    CHECK_THROWS_AS(apply_depolarizing(rho, 7, 0.1), InvalidArgument);
}

TEST_CASE("full depolarizing at p = 3/4 erases a qubit") {
    auto rho = DensityMatrix::from_pure(new_basis_product_state(2, std::vector<int>{1, -1}));
    apply_depolarizing(rho, 0, 0.75);
    const std::vector<int> keep{0};
    const auto reduced = partial_trace(rho, keep).to_dense();
    CHECK((reduced - 0.5 * oracle::Mat::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("dense conversions, trace, purity and checks") {
    std::mt19937_64 rng(8);
    const auto rho0 = random_density(4, rng);
    const auto rho = DensityMatrix::from_dense(rho0);
    CHECK((rho.to_dense() - rho0).norm() < 1e-15);
    CHECK(std::abs(rho.trace() - Complex(1.0)) < 1e-12);
    CHECK(rho.purity() == doctest::Approx((rho0 * rho0).trace().real()).epsilon(1e-12));
    CHECK(rho.check().ok());
    CHECK(DensityMatrix::maximally_mixed(3).purity() == doctest::Approx(0.125));
    CHECK_THROWS_AS(DensityMatrix::from_dense(oracle::Mat::Zero(3, 3)), InvalidArgument);

    oracle::Mat bad = rho0;
    bad(0, 1) += 0.1;
    CHECK_FALSE(DensityMatrix::from_dense(bad).check().ok());
    for (Index r = 0; r < 16; ++r) {
        for (Index c = 0; c < 16; ++c) {
            CHECK(rho.at(r, c) == rho0(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
        }
    }
}

TEST_CASE("product X states") {
    const std::vector<int> signs{1, -1, -1};
    const auto psi = new_basis_product_state(3, signs);
    PauliSum x0(3);
    x0.add(1.0, "XII");
    PauliSum x1(3);
    x1.add(1.0, "IXI");
    CHECK(expectation(psi, x0) == doctest::Approx(1.0));
    CHECK(expectation(psi, x1) == doctest::Approx(-1.0));
    CHECK(psi.norm_squared() == doctest::Approx(1.0));
    CHECK_THROWS_AS(new_basis_product_state(3, std::vector<int>{1, 0, 1}), InvalidArgument);
    CHECK_THROWS_AS(new_basis_product_state(3, std::vector<int>{1, 1}), InvalidArgument);
}

TEST_CASE("expectations agree with the oracle for states and density matrices") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        const auto op = random_observable(kN, rng);
        oracle::Mat dense = oracle::Mat::Zero(32, 32);
        for (const auto& t : op.terms()) dense += t.coefficient * oracle::string_matrix(t.pauli.letters(kN));
        const auto v = oracle::random_state(kN, rng);
        CHECK(expectation(to_state(v), op) == doctest::Approx((v.adjoint() * dense * v)(0).real()).epsilon(1e-12));
        const auto rho0 = random_density(kN, rng);
        CHECK(expectation(DensityMatrix::from_dense(rho0), op) ==
              doctest::Approx((rho0 * dense).trace().real()).epsilon(1e-12));
        CHECK((DensityMatrix::from_observable(op).to_dense() - dense).norm() < 1e-12);
    }
}

TEST_CASE("partial trace and entropies match the oracle") {
    std::mt19937_64 rng(10);
    const auto rho0 = random_density(4, rng);
    const auto rho = DensityMatrix::from_dense(rho0);
    const std::vector<int> keep{0, 1};
    const auto reduced = oracle::trace_high(rho0, 4, 2);
    CHECK((partial_trace(rho, keep).to_dense() - reduced).norm() < 1e-13);
    CHECK(entropy_density_half(rho) == doctest::Approx(oracle::entropy(reduced) / 2.0).epsilon(1e-12));
    CHECK(von_neumann_entropy(rho) == doctest::Approx(oracle::entropy(rho0)).epsilon(1e-12));

    const auto v = oracle::random_state(4, rng);
    const oracle::Mat pure = v * v.adjoint();
    CHECK(entropy_density_half(to_state(v)) == doctest::Approx(oracle::entropy(oracle::trace_high(pure, 4, 2)) / 2.0).epsilon(1e-12));
    CHECK(von_neumann_entropy(DensityMatrix::from_pure(to_state(v))) == doctest::Approx(0.0));
    CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(3)) == doctest::Approx(3.0 * std::log(2.0)));

    CHECK_THROWS_AS(entropy_density_half(DensityMatrix(3)), InvalidArgument);
    CHECK_THROWS_AS(partial_trace(rho, std::vector<int>{}), InvalidArgument);
    CHECK_THROWS_AS(partial_trace(rho, std::vector<int>{1, 1}), InvalidArgument);
}

TEST_CASE("partial trace over a non-contiguous keep set") {
    // Product of distinct single-qubit states: keeping {0, 2} must return their product.
    std::mt19937_64 rng(12);
    std::vector<oracle::Mat> single;
    for (int q = 0; q < 3; ++q) single.push_back(random_density(1, rng));
    const oracle::Mat full = Eigen::kroneckerProduct(single[2], Eigen::kroneckerProduct(single[1], single[0]).eval());
    const oracle::Mat expect = Eigen::kroneckerProduct(single[2], single[0]);
    const std::vector<int> keep{0, 2};
    CHECK((partial_trace(DensityMatrix::from_dense(full), keep).to_dense() - expect).norm() < 1e-13);
}

TEST_CASE("fidelity") {
    std::mt19937_64 rng(13);
    const auto a = oracle::random_state(3, rng);
    const auto b = oracle::random_state(3, rng);
    CHECK(fidelity(to_state(a), to_state(b)) == doctest::Approx(std::norm(a.dot(b))));
    CHECK(fidelity(to_state(a), to_state(a)) == doctest::Approx(1.0));
}

TEST_CASE("noisy circuit: density matrix against the Kraus oracle") {
    Circuit c(4);
    for (int s = 0; s < 3; ++s) {
        TrotterStep step;
        step.layers.emplace_back(ZZRotation{{{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 0.2 + 0.1 * s});
        step.layers.emplace_back(ZRotationAll{0.3});
        step.layers.emplace_back(XRotationAll{-0.4});
        step.layers.emplace_back(NoiseLayer{0.02, {0, 1, 2, 3}});
        c.push_step(step);
    }
    std::mt19937_64 rng(14);
    const auto rho0 = random_density(4, rng);
    oracle::Mat ref = rho0;
    for (const auto& step : c.steps()) {
        for (const auto& layer : step.layers) {
            if (const auto* n = std::get_if<NoiseLayer>(&layer)) {
                for (int q : n->qubits) ref = oracle::depolarize(ref, 4, q, n->p);
            } else {
                const auto u = layer_unitary(4, layer);
                ref = u * ref * u.adjoint();
            }
        }
    }
    auto rho = DensityMatrix::from_dense(rho0);
    int observed = 0;
    apply_circuit(rho, c, [&](std::size_t step, const DensityMatrix&) { CHECK(step == static_cast<std::size_t>(observed++)); });
    CHECK(observed == 3);
    CHECK((rho.to_dense() - ref).norm() < 1e-12);

    auto psi = StateVector(4);
    CHECK_THROWS_AS(apply_circuit(psi, c), InvalidArgument);
    auto wrong = DensityMatrix(3);
    CHECK_THROWS_AS(apply_circuit(wrong, c), InvalidArgument);
}

TEST_CASE("adjoint channel satisfies tr(C(rho) O) = tr(rho C^dagger(O))") {
    Circuit c(4);
    TrotterStep step;
    step.layers.emplace_back(ZZRotation{{{0, 1}, {2, 3}, {1, 2}}, 0.7});
    step.layers.emplace_back(NoiseLayer{0.1, {0, 2}});
    step.layers.emplace_back(XRotationAll{0.5});
    step.layers.emplace_back(ZRotationAll{-0.2});
    step.layers.emplace_back(NoiseLayer{0.03, {1, 3}});
    c.push_step(step);
    c.push_step(step);
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 4; ++trial) {
        const auto rho0 = random_density(4, rng);
        const auto op = random_observable(4, rng);
        auto rho = DensityMatrix::from_dense(rho0);
        apply_circuit(rho, c);
        auto pulled = DensityMatrix::from_observable(op);
        apply_circuit_adjoint(pulled, c);
        const double heisenberg = (rho0 * pulled.to_dense()).trace().real();
        CHECK(expectation(rho, op) == doctest::Approx(heisenberg).epsilon(1e-12));
    }
}

TEST_CASE("noiseless statevector and density-matrix paths agree") {
    Circuit c(kN);
    for (int s = 0; s < 4; ++s) {
        TrotterStep step;
        step.layers.emplace_back(ZZRotation{{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}, 0.1 * (s + 1)});
        step.layers.emplace_back(ZRotationAll{0.2});
        step.layers.emplace_back(XRotationAll{0.3});
        c.push_step(step);
    }
    std::mt19937_64 rng(16);
    const auto v = oracle::random_state(kN, rng);
    auto psi = to_state(v);
    apply_circuit(psi, c);
    auto rho = DensityMatrix::from_pure(to_state(v));
    apply_circuit(rho, c);
    const auto out = to_vec(psi);
    CHECK((rho.to_dense() - out * out.adjoint()).norm() < 1e-12);
    auto traj = to_state(v);
    Rng r = make_stream(1, 0);
    apply_circuit_trajectory(traj, c, r);
    CHECK((to_vec(traj) - out).norm() < 1e-12);
}

TEST_CASE("trajectory average converges to the density matrix") {
    Circuit c(3);
    TrotterStep step;
    step.layers.emplace_back(ZZRotation{{{0, 1}, {1, 2}}, 0.4});
    step.layers.emplace_back(XRotationAll{0.6});
    step.layers.emplace_back(NoiseLayer{0.2, {0, 1, 2}});
    c.push_step(step);
    c.push_step(step);
    const auto start = new_basis_product_state(3, std::vector<int>{1, 1, -1});
    auto rho = DensityMatrix::from_pure(start);
    apply_circuit(rho, c);
    constexpr int kShots = 20000;
    oracle::Mat mean = oracle::Mat::Zero(8, 8);
    for (int k = 0; k < kShots; ++k) {
        Rng r = make_stream(99, static_cast<std::uint64_t>(k));
        auto psi = start;
        apply_circuit_trajectory(psi, c, r);
        const auto v = to_vec(psi);
        mean += v * v.adjoint();
    }
    mean /= kShots;
    // Each entry is a bounded average; 5/sqrt(K) is a loose per-entry bound.
    CHECK((mean - rho.to_dense()).cwiseAbs().maxCoeff() < 5.0 / std::sqrt(kShots));
}

TEST_CASE("depolarizing trajectory statistics") {
    constexpr int kShots = 30000;
    Rng rng = make_stream(3, 0);
    int flipped = 0;
    for (int k = 0; k < kShots; ++k) {
        auto psi = new_basis_product_state(1, std::vector<int>{1});
        sample_depolarizing_trajectory(psi, 0, 0.3, rng);
        // |+> is flipped by Y and Z, so <X> = -1 with probability 2p/3.
        PauliSum x(1);
        x.add(1.0, "X");
        if (expectation(psi, x) < 0) ++flipped;
    }
    CHECK(std::abs(flipped / double(kShots) - 0.2) < 5.0 * std::sqrt(0.2 * 0.8 / kShots));
}

TEST_CASE("streams are reproducible and distinct") {
    Rng a = make_stream(42, 7);
    Rng b = make_stream(42, 7);
    Rng c = make_stream(42, 8);
    Rng d = make_stream(43, 7);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
}

TEST_CASE("Born-rule sampling in both bases") {
    constexpr std::size_t kShots = 40000;
    Rng rng = make_stream(5, 0);
    // cos(t)|0> + i sin(t)|1> on qubit 0, |+> on qubit 1.
    const double t = 0.4;
    oracle::Vec v(4);
    const double s = 1.0 / std::sqrt(2.0);
    v << std::cos(t) * s, Complex(0, std::sin(t)) * s, std::cos(t) * s, Complex(0, std::sin(t)) * s;
    const auto psi = to_state(v);
    const auto z = sample_measurements(psi, Basis::Z, kShots, rng);
    const auto x = sample_measurements(psi, Basis::X, kShots, rng);
    REQUIRE(z.size() == kShots);
    double z0 = 0;
    double x1 = 0;
    for (auto b : z) z0 += (b & 1U) ? 1 : 0;
    for (auto b : x) x1 += (b & 2U) ? 1 : 0;
    const double p1 = std::sin(t) * std::sin(t);
    CHECK(std::abs(z0 / kShots - p1) < 5.0 * std::sqrt(p1 * (1 - p1) / kShots));
    CHECK(x1 == 0.0);  // qubit 1 is |+>
    CHECK_THROWS_AS(sample_measurements(psi, Basis::Z, 0, rng), InvalidArgument);
}
