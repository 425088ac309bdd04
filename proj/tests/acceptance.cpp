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

// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Tolerances are the constants in each block and are not configurable.
// Usage: acceptance [criterion ...]   (default: all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "adiatherm/models.hpp"
#include "adiatherm/protocol.hpp"
#include "adiatherm/schedules.hpp"
#include "adiatherm/state.hpp"

using namespace adiatherm;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;

    void check(bool ok, std::string what) {
        details.push_back(fmt::format("{} {}", ok ? "ok  " : "MISS", std::move(what)));
        pass = pass && ok;
    }
    void note(std::string what) { details.push_back("     " + std::move(what)); }
};

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

PauliSum mean_x(int n) {
    PauliSum op(n);
    for (int q = 0; q < n; ++q) op.add(1.0 / n, PauliString{Index{1} << q, 0});
    return op;
}

AdiabaticSetup ring_setup(int n, int steps, double dt, IsingParams target, double p) {
    AdiabaticSetup s;
    s.lattice = Lattice::ring(n);
    s.schedule.steps = steps;
    s.schedule.dt = dt;
    s.schedule.target = target;
    s.schedule.h0_sign = aligned_h0_sign(target.h_x);
    s.p = p;
    return s;
}

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> g;
    const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) g.push_back(lo + step * i);
    return g;
}

// 1. Noiseless column of the 5x4 hardware run.
Outcome table1_noiseless() {
    constexpr double kTol = 0.002;
    constexpr double kTolM = 1e-9;
    Outcome o;
    HardwareConfig cfg;  // 5x4 torus, M = 16, (a, b, c, d) = (1.186, 0.077, 2.181, 0.469), h_x = 2
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_hardware_table(cfg);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    o.check(within(r.e.value, -2.465, kTol), fmt::format("e = {:.5f} vs -2.465 +- {}", r.e.value, kTol));
    o.check(within(r.zz.value, 1.417, kTol), fmt::format("<ZZ> = {:.5f} vs 1.417 +- {}", r.zz.value, kTol));
    o.check(within(r.x.value, -0.524, kTol), fmt::format("<X> = {:.5f} vs -0.524 +- {}", r.x.value, kTol));
    o.check(within(r.e_prime.value, -2.132, kTol), fmt::format("e' = {:.5f} vs -2.132 +- {}", r.e_prime.value, kTol));
    o.check(within(r.m.value, -1.0, kTolM), fmt::format("m = {:.12f} vs -1 +- {}", r.m.value, kTolM));
    o.check(within(r.m_prime.value, -0.9, kTolM), fmt::format("m' = {:.12f} vs -0.9 +- {}", r.m_prime.value, kTolM));
    o.check(dt.count() <= 120.0, fmt::format("runtime {:.1f} s <= 120 s", dt.count()));
    o.note(fmt::format("<ZZ>' = {:.5f} (table 0.886), <X>' = {:.5f} (table -0.623)", r.zz_prime.value, r.x_prime.value));
    return o;
}

// 2. Hardware-column arithmetic.
Outcome hardware_fixture() {
    Outcome o;
    const auto b = beta_from_observables({-2.334, 0.0186}, {-2.0279, 0.0161}, {-0.921, 0.0028}, {-0.846, 0.0026});
    o.check(within(b.temperature, 2.562, 0.03), fmt::format("T = {:.5f} vs 2.562 +- 0.03", b.temperature));
    o.check(within(b.temperature_error, 0.256, 0.05), fmt::format("sigma_T = {:.5f} vs 0.256 +- 0.05", b.temperature_error));
    const double s = entropy_from_x(-0.921);
    o.check(within(s, 0.1665, 0.0005), fmt::format("S(-0.921) = {:.6f} vs 0.1665 +- 0.0005", s));
    return o;
}

// 3. Two-qubit rotation counts.
Outcome gate_counts() {
    Outcome o;
    const auto c = hardware_circuit(PowerLawSchedule{}, Lattice::torus(5, 4));
    const auto m = mirror_circuit(c, true);
    o.check(c.two_qubit_gate_count() == 640, fmt::format("forward count {}", c.two_qubit_gate_count()));
    o.check(m.two_qubit_gate_count() == 640, fmt::format("mirror count {}", m.two_qubit_gate_count()));
    return o;
}

// 4. E(beta_f) against the Gibbs curve at N = 12.
Outcome gibbs_agreement() {
    constexpr double kTol = 0.05;
    constexpr double kBetaLo = 0.2;
    constexpr double kBetaHi = 1.5;
    Outcome o;
    const std::vector<IsingParams> sets{{-1.0, 1.0, 1.0}, {-1.0, -1.0, 1.0}};
    for (const auto& target : sets) {
        const auto setup = ring_setup(12, 60, 0.1, target, 0.0);
        ThermalPrepConfig prep;
        prep.setup = setup;
        prep.beta0_grid = grid(0.0, 3.0, 0.1);
        const auto result = run_thermal_prep(prep);
        const auto reference = thermal_reference_curve(setup.final_hamiltonian(), grid(0.0, 3.0, 0.005));
        const double worst = max_reference_deviation(result.records, reference, kBetaLo, kBetaHi);
        o.check(worst <= kTol, fmt::format("(h_x,h_z,J) = ({},{},{}): max |E_prep - E_Gibbs| on [{}, {}] = {:.4f} <= {}",
                                           target.h_x, target.h_z, target.j, kBetaLo, kBetaHi, worst, kTol));
    }
    return o;
}

// 5. Isentropicity of the adiabatic path.
Outcome isentropicity() {
    constexpr double kInterceptTol = 0.02;
    constexpr double kPlateauRelTol = 0.10;
    Outcome o;
    const std::vector<int> sizes{6, 8, 10, 12};
    const double beta0 = 1.0;
    const double s0 = s0_of_beta0(beta0);
    std::vector<TimeSeries> adiabatic;
    std::vector<double> areas;
    std::vector<double> plateaus;
    for (int n : sizes) {
        const auto setup = ring_setup(n, 120, 0.05, {-1.0, 1.0, 1.0}, 0.0);
        adiabatic.push_back(run_entropy_timeseries({setup, EvolutionSetting::Adiabatic, beta0}).exact);
        areas.push_back(drift_area(adiabatic.back(), s0));
        plateaus.push_back(plateau_mean(run_entropy_timeseries({setup, EvolutionSetting::Quench, beta0}).exact));
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < areas.size(); ++i) decreasing = decreasing && areas[i] < areas[i - 1];
    o.check(decreasing, fmt::format("drift areas {:.5f} {:.5f} {:.5f} {:.5f} strictly decreasing", areas[0], areas[1],
                                    areas[2], areas[3]));
    const auto ext = extrapolate_inverse_n(sizes, adiabatic);
    double worst = 0.0;
    for (double v : ext.intercept) worst = std::max(worst, std::abs(v - s0));
    o.check(worst <= kInterceptTol, fmt::format("max_t |S_inf(t) - S0| = {:.5f} <= {}", worst, kInterceptTol));
    std::vector<double> inv_n;
    for (int n : sizes) inv_n.push_back(1.0 / n);
    o.note(fmt::format("drift area at 1/N -> 0: {:.5f}", fit_line(inv_n, areas).intercept));
    const double rel = std::abs(plateaus[3] - plateaus[2]) / plateaus[2];
    o.check(rel <= kPlateauRelTol, fmt::format("quench plateau N=10 {:.4f}, N=12 {:.4f}, relative change {:.3f} <= {}",
                                               plateaus[2], plateaus[3], rel, kPlateauRelTol));
    return o;
}

// 6. Noise model of S(t) and the mirror X estimate.
Outcome noise_model() {
    constexpr double kRms = 0.02;
    constexpr double kMirror = 0.01;
    Outcome o;
    for (double p : {5e-4, 1e-3}) {
        const auto setup = ring_setup(10, 200, 0.1, {-1.0, 1.0, 1.0}, p);
        const auto forward = run_entropy_timeseries({setup, EvolutionSetting::Adiabatic, 2.0});
        const auto fit = fit_decay(forward.exact, 2.0);
        o.check(fit.rms <= kRms, fmt::format("p = {}: alpha = {:.5f}, RMS = {:.5f} <= {}", p, fit.alpha, fit.rms, kRms));
        const auto mirror = run_entropy_timeseries({setup, EvolutionSetting::Mirror, 2.0});
        const double gap = std::abs(mirror.x_estimate.values.back() - mirror.exact.values.back());
        o.check(gap <= kMirror, fmt::format("p = {}: mirror endpoint |S_X - S_exact| = {:.2e} <= {}", p, gap, kMirror));
    }
    return o;
}

// 7. Collapse of E(beta) across noise levels.
Outcome collapse() {
    constexpr double kSpread = 0.02;
    constexpr double kContrast = 5.0;
    Outcome o;
    for (int n : {10, 12}) {
        std::vector<std::vector<CurveRecord>> curves;
        for (double p : {0.0, 5e-4, 1e-3}) {
            ThermalPrepConfig prep;
            prep.setup = ring_setup(n, 60, 0.1, {-1.0, -1.0, 1.0}, p);
            prep.beta0_grid = grid(0.0, 3.0, 0.1);
            curves.push_back(run_thermal_prep(prep).records);
        }
        const auto m = collapse_metrics(curves);
        o.check(m.e_of_beta_spread <= kSpread, fmt::format("N={}: E(beta) spread on [{:.3f}, {:.3f}] = {:.4f} <= {}", n,
                                                           m.beta_lo, m.beta_hi, m.e_of_beta_spread, kSpread));
        o.check(m.e_of_beta0_spread >= kContrast * m.e_of_beta_spread,
                fmt::format("N={}: E(beta0) spread {:.4f} >= {} x {:.4f}", n, m.e_of_beta0_spread, kContrast,
                            m.e_of_beta_spread));
        o.check(m.beta_max[0] > m.beta_max[1] && m.beta_max[1] > m.beta_max[2],
                fmt::format("N={}: beta_max {:.3f} > {:.3f} > {:.3f}", n, m.beta_max[0], m.beta_max[1], m.beta_max[2]));
    }
    return o;
}

// 8. Adiabaticity probe.
Outcome adiabaticity() {
    constexpr double kAdiabatic = 0.01;
    constexpr double kNonAdiabatic = 0.05;
    Outcome o;
    AdiabaticityConfig cfg;
    cfg.setup = ring_setup(10, 20, 0.1, {-1.0, -1.0, 1.0}, 5e-4);
    cfg.beta0 = 2.0;
    cfg.dt_probe = 0.1;
    cfg.m_list = {20, 40, 60, 80, 100};
    cfg.k_list = {0, 1};
    const auto rows = run_adiabaticity_diagnostic(cfg);
    std::vector<double> shift;
    std::vector<double> discrepancy;
    for (const auto& r : rows) {
        if (r.k != 1) continue;
        shift.push_back(r.k_shift);
        discrepancy.push_back(std::abs(r.S_estimated - r.S_exact));
    }
    o.check(shift.back() <= kAdiabatic, fmt::format("M=100: |S(k=1) - S(k=0)| = {:.5f} <= {}", shift.back(), kAdiabatic));
    o.check(shift.front() >= kNonAdiabatic, fmt::format("M=20: |S(k=1) - S(k=0)| = {:.5f} >= {}", shift.front(), kNonAdiabatic));
    bool decreasing = true;
    for (std::size_t i = 1; i < discrepancy.size(); ++i) decreasing = decreasing && discrepancy[i] < discrepancy[i - 1];
    o.check(decreasing, fmt::format("k=1 |S_X - S_exact| over M: {:.4f} {:.4f} {:.4f} {:.4f} {:.4f} decreasing",
                                    discrepancy[0], discrepancy[1], discrepancy[2], discrepancy[3], discrepancy[4]));
    return o;
}

// 9. Second-order entropy response grows linearly in t.
Outcome perturbation() {
    constexpr double kSlopeLo = 0.7;
    constexpr double kSlopeHi = 1.3;
    Outcome o;
    std::vector<double> times;
    for (int i = 0; i <= 40; ++i) times.push_back(std::pow(10.0, 2.0 * i / 40.0));
    for (int n : {6, 8}) {
        const Lattice lattice = Lattice::ring(n);
        PerturbationConfig cfg;
        cfg.h = ising_on(lattice, -1.0, 1.0, 1.0);
        cfg.delta_h = ising_on(lattice, 0.0, 1.0, 0.0);
        cfg.beta = 1.0;
        cfg.epsilon = 1e-3;
        cfg.times = times;
        cfg.fit_t_min = 10.0;
        cfg.fit_t_max = 100.0;
        const auto r = run_perturbation_scaling(cfg);
        o.check(r.slope >= kSlopeLo && r.slope <= kSlopeHi,
                fmt::format("N={}: log-log slope {:.3f} in [{}, {}]", n, r.slope, kSlopeLo, kSlopeHi));
        const bool decreasing = r.lambda_second[1] < r.lambda_second[0] && r.lambda_second[2] < r.lambda_second[1];
        o.check(decreasing, fmt::format("N={}: second-order part at lambda 1,2,4: {:.3e} {:.3e} {:.3e} decreasing", n,
                                        r.lambda_second[0], r.lambda_second[1], r.lambda_second[2]));
    }
    return o;
}

/// Random six-qubit circuit mixing every layer kind.
Circuit random_circuit(Rng& rng, bool noisy) {
    constexpr int n = 6;
    std::uniform_real_distribution<double> angle(-1.0, 1.0);
    std::uniform_int_distribution<int> qubit(0, n - 1);
    Circuit c(n);
    for (int s = 0; s < 6; ++s) {
        TrotterStep step;
        std::vector<Edge> edges;
        for (int e = 0; e < 3; ++e) {
            const int a = qubit(rng);
            int b = qubit(rng);
            while (b == a) b = qubit(rng);
            edges.push_back({a, b});
        }
        step.layers.emplace_back(ZZRotation{edges, angle(rng)});
        step.layers.emplace_back(ZRotationAll{angle(rng)});
        step.layers.emplace_back(XRotationAll{angle(rng)});
        if (noisy) step.layers.emplace_back(NoiseLayer{0.02, {0, 1, 2, 3, 4, 5}});
        c.push_step(std::move(step));
    }
    return c;
}

// 10. Trajectory and statevector backends against the density matrix.
Outcome backend_equivalence() {
    constexpr int kTrajectories = 4000;
    const double kTol = 5.0 / std::sqrt(static_cast<double>(kTrajectories));
    constexpr double kExact = 1e-9;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng = make_stream(2026, 0);
    PauliSum zz(6);
    for (int q = 0; q < 6; ++q) zz.add(1.0 / 6, PauliString{0, (Index{1} << q) | (Index{1} << ((q + 1) % 6))});
    const std::vector<PauliSum> observables{mean_x(6), zz, PauliSum::from_text("0.5 XYZIZX\n-0.25 ZZIIYY")};
    double worst_noisy = 0.0;
    double worst_exact = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const Circuit noisy = random_circuit(rng, true);
        const Circuit clean = random_circuit(rng, false);
        std::vector<int> signs(6);
        for (auto& s : signs) s = (rng() & 1U) ? 1 : -1;
        const StateVector start = new_basis_product_state(6, signs);

        DensityMatrix rho = DensityMatrix::from_pure(start);
        apply_circuit(rho, noisy);
        std::vector<double> mean(observables.size(), 0.0);
        for (int k = 0; k < kTrajectories; ++k) {
            Rng traj = make_stream(7 + trial, static_cast<std::uint64_t>(k));
            StateVector psi = start;
            apply_circuit_trajectory(psi, noisy, traj);
            for (std::size_t i = 0; i < observables.size(); ++i) mean[i] += expectation(psi, observables[i]);
        }
        for (std::size_t i = 0; i < observables.size(); ++i) {
            worst_noisy = std::max(worst_noisy, std::abs(mean[i] / kTrajectories - expectation(rho, observables[i])));
        }

        DensityMatrix rho_clean = DensityMatrix::from_pure(start);
        apply_circuit(rho_clean, clean);
        StateVector psi = start;
        apply_circuit(psi, clean);
        for (const auto& op : observables) {
            worst_exact = std::max(worst_exact, std::abs(expectation(psi, op) - expectation(rho_clean, op)));
        }
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    o.check(worst_noisy <= kTol, fmt::format("noisy: max |traj - dm| = {:.4f} <= 5/sqrt(K) = {:.4f}", worst_noisy, kTol));
    o.check(worst_exact <= kExact, fmt::format("noiseless: max |sv - dm| = {:.2e} <= {}", worst_exact, kExact));
    o.check(dt.count() <= 600.0, fmt::format("runtime {:.1f} s <= 600 s", dt.count()));
    return o;
}

struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "noiseless 5x4 hardware column", table1_noiseless},
        {2, "hardware-column arithmetic fixture", hardware_fixture},
        {3, "two-qubit gate counts", gate_counts},
        {4, "E(beta) agrees with the Gibbs curve", gibbs_agreement},
        {5, "isentropic adiabatic evolution", isentropicity},
        {6, "noisy entropy growth model", noise_model},
        {7, "E(beta) collapse across noise levels", collapse},
        {8, "adiabaticity probe", adiabaticity},
        {9, "second-order entropy response scaling", perturbation},
        {10, "backend equivalence", backend_equivalence},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.check(false, fmt::format("threw: {}", e.what()));
        }
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        std::printf("%s criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, dt.count());
        for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
