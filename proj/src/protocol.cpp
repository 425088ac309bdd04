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

#include "adiatherm/protocol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "adiatherm/types.hpp"

namespace adiatherm {

namespace {

constexpr int kMaxPerturbationQubits = 8;

PauliSum mean_x(int n) {
    PauliSum op(n);
    for (int q = 0; q < n; ++q) op.add(1.0 / n, PauliString{Index{1} << q, 0});
    return op;
}

void require_finite(double v, const char* what, double beta0) {
    if (!std::isfinite(v)) throw NumericalError(fmt::format("{} is not finite at beta0 = {}", what, beta0));
}

/// Coefficients g_k of tr(rho0(beta0) O) = 2^-N sum_k tanh(beta0)^k g_k, where
/// rho0 is the product Gibbs state of -sum X and g_k sums the entries of O
/// whose row and column differ in exactly k bits.
std::vector<double> gibbs_moments(const DensityMatrix& op) {
    constexpr Index kEven = 0x5555555555555555ULL;
    std::vector<double> g(op.n_qubits() + 1, 0.0);
    const auto data = op.vectorized();
    for (Index v = 0; v < data.size(); ++v) g[std::popcount((v ^ (v >> 1)) & kEven)] += data[v].real();
    return g;
}

double product_gibbs_average(const std::vector<double>& g, double beta0) {
    const int n = static_cast<int>(g.size()) - 1;
    const double t = std::tanh(beta0);
    // Horner in t; 2^-N applied last.
    double acc = 0.0;
    for (int k = n; k >= 0; --k) acc = acc * t + g[k];
    return std::ldexp(acc, -n);
}

void require_density_backend(int n) {
    if (n > kMaxDensityQubits) {
        throw CapacityError(fmt::format("density-matrix backend limited to {} qubits, got {}", kMaxDensityQubits, n));
    }
}

double site_mean_x(const DensityMatrix& rho) { return expectation(rho, mean_x(rho.n_qubits())); }

}  // namespace

// ---------------------------------------------------------------------------
// Adiabatic setup

PauliSum AdiabaticSetup::final_hamiltonian() const {
    return ising_on(lattice, schedule.target.j, schedule.target.h_x, schedule.target.h_z);
}

Circuit AdiabaticSetup::forward_circuit() const {
    return attach_noise(linear_trotter_circuit(schedule, lattice), p, placement);
}

Circuit AdiabaticSetup::mirror() const {
    return attach_noise(mirror_circuit(linear_trotter_circuit(schedule, lattice), true), p, placement);
}

// ---------------------------------------------------------------------------
// Thermal preparation

ThermalPrepResult run_thermal_prep(const ThermalPrepConfig& config) {
    const auto& setup = config.setup;
    const auto& schedule = setup.schedule;
    const int n = setup.lattice.sites();
    if (config.beta0_grid.size() < 3) throw InvalidArgument("thermal preparation needs at least three beta0 points");
    for (std::size_t i = 1; i < config.beta0_grid.size(); ++i) {
        if (!(config.beta0_grid[i] > config.beta0_grid[i - 1])) {
            throw InvalidArgument("beta0 grid must be strictly increasing");
        }
    }
    const PauliSum h_density = setup.final_hamiltonian() * (1.0 / n);
    const Circuit forward = setup.forward_circuit();
    const Circuit mirror = setup.mirror();
    const PauliSum x_bar = mean_x(n);

    std::vector<double> energies;
    std::vector<double> xs;
    auto mirror_beta0s = config.shortcut_beta0 ? std::vector<double>{*config.shortcut_beta0} : config.beta0_grid;

    switch (config.backend) {
        case Backend::DensityMatrix: {
            require_density_backend(n);
            DensityMatrix op_e = DensityMatrix::from_observable(h_density);
            apply_circuit_adjoint(op_e, forward);
            const auto g_e = gibbs_moments(op_e);
            op_e = DensityMatrix(1);  // release before the second pass
            DensityMatrix op_x = DensityMatrix::from_observable(x_bar);
            apply_circuit_adjoint(op_x, mirror);
            const auto g_x = gibbs_moments(op_x);
            for (double b : config.beta0_grid) energies.push_back(product_gibbs_average(g_e, schedule.x_beta(b)));
            for (double b : mirror_beta0s) xs.push_back(product_gibbs_average(g_x, schedule.x_beta(b)));
            break;
        }
        case Backend::DensityMatrixForward: {
            require_density_backend(n);
            for (double b : config.beta0_grid) {
                DensityMatrix rho = product_gibbs_x(n, schedule.x_beta(b));
                apply_circuit(rho, forward);
                energies.push_back(expectation(rho, h_density));
            }
            for (double b : mirror_beta0s) {
                DensityMatrix rho = product_gibbs_x(n, schedule.x_beta(b));
                apply_circuit(rho, mirror);
                xs.push_back(expectation(rho, x_bar));
            }
            break;
        }
        case Backend::Trajectories: {
            if (n > kMaxStateVectorQubits) {
                throw CapacityError(fmt::format("statevector backend limited to {} qubits", kMaxStateVectorQubits));
            }
            if (config.trajectories < 1) throw InvalidArgument("need at least one trajectory");
            auto average = [&](const Circuit& circuit, const PauliSum& op, double b, std::uint64_t stream_base) {
                double sum = 0.0;
                for (int k = 0; k < config.trajectories; ++k) {
                    Rng rng = make_stream(config.seed, stream_base + static_cast<std::uint64_t>(k));
                    StateVector psi = sample_product_gibbs_x(n, schedule.x_beta(b), rng);
                    apply_circuit_trajectory(psi, circuit, rng);
                    sum += expectation(psi, op);
                }
                return sum / config.trajectories;
            };
            const auto k_count = static_cast<std::uint64_t>(config.trajectories);
            for (std::size_t i = 0; i < config.beta0_grid.size(); ++i) {
                energies.push_back(average(forward, h_density, config.beta0_grid[i], 2 * i * k_count));
            }
            for (std::size_t i = 0; i < mirror_beta0s.size(); ++i) {
                xs.push_back(average(mirror, x_bar, mirror_beta0s[i], (2 * i + 1) * k_count));
            }
            break;
        }
    }

    ThermalPrepResult result;
    if (config.shortcut_beta0) {
        const double t = std::tanh(schedule.x_beta(*config.shortcut_beta0));
        if (t == 0.0) throw InvalidArgument("shortcut beta0 must be nonzero");
        const double r = std::clamp(xs.front() / t, 1e-300, 1.0);
        result.shortcut_r = r;
        xs.clear();
        for (double b : config.beta0_grid) xs.push_back(r * std::tanh(schedule.x_beta(b)));
    }

    std::vector<CurveRecord> records;
    for (std::size_t i = 0; i < config.beta0_grid.size(); ++i) {
        const double b = config.beta0_grid[i];
        require_finite(energies[i], "energy", b);
        require_finite(xs[i], "mirror <X>", b);
        CurveRecord rec;
        rec.beta0 = b;
        rec.E = energies[i];
        rec.S = entropy_from_x(std::clamp(xs[i], -1.0, 1.0));
        rec.p = setup.p;
        rec.M = setup.schedule.steps;
        rec.dt = setup.schedule.dt;
        rec.N = n;
        records.push_back(rec);
    }
    result.records = estimate_beta_curve(records, config.flat_threshold);
    result.mirror_x = std::move(xs);
    return result;
}

// ---------------------------------------------------------------------------
// Entropy along a path

EntropyTimeSeries run_entropy_timeseries(const TimeSeriesConfig& config) {
    const auto& setup = config.setup;
    const int n = setup.lattice.sites();
    require_density_backend(n);
    Circuit circuit;
    switch (config.setting) {
        case EvolutionSetting::Adiabatic:
            circuit = setup.forward_circuit();
            break;
        case EvolutionSetting::Quench:
            circuit = attach_noise(
                quench_circuit(setup.lattice, setup.schedule.target, setup.schedule.steps, setup.schedule.dt),
                setup.p, setup.placement);
            break;
        case EvolutionSetting::Mirror:
            circuit = setup.mirror();
            break;
    }
    EntropyTimeSeries out;
    out.exact.kind = SeriesKind::Entropy;
    out.x_estimate.kind = SeriesKind::Entropy;
    auto record = [&](double t, const DensityMatrix& rho) {
        out.exact.times.push_back(t);
        out.exact.values.push_back(entropy_density_half(rho));
        out.x_estimate.times.push_back(t);
        out.x_estimate.values.push_back(entropy_from_x(std::clamp(site_mean_x(rho), -1.0, 1.0)));
    };
    DensityMatrix rho = product_gibbs_x(n, setup.schedule.x_beta(config.beta0));
    record(0.0, rho);
    apply_circuit(rho, circuit, [&](std::size_t step, const DensityMatrix& state) {
        record(static_cast<double>(step + 1) * setup.schedule.dt, state);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Adiabaticity probe

std::vector<AdiabaticityRow> run_adiabaticity_diagnostic(const AdiabaticityConfig& config) {
    const int n = config.setup.lattice.sites();
    require_density_backend(n);
    if (config.m_list.empty()) throw InvalidArgument("adiabaticity diagnostic needs at least one M");
    if (std::find(config.k_list.begin(), config.k_list.end(), 0) == config.k_list.end()) {
        throw InvalidArgument("k list must contain 0 as the reference");
    }
    for (int k : config.k_list) {
        if (k < 0) throw InvalidArgument("probe step count must be non-negative");
    }
    const TrotterStep final_step =
        ising_trotter_step(config.setup.lattice, config.setup.schedule.target, config.dt_probe);
    std::vector<AdiabaticityRow> rows;
    for (int m : config.m_list) {
        LinearSchedule schedule = config.setup.schedule;
        schedule.steps = m;
        const Circuit base = linear_trotter_circuit(schedule, config.setup.lattice);
        std::vector<AdiabaticityRow> block;
        double reference = 0.0;
        for (int k : config.k_list) {
            const Circuit circuit = attach_noise(adiabaticity_probe_circuit(base, ProbeSpec{k, config.dt_probe}, final_step),
                                                 config.setup.p, config.setup.placement);
            DensityMatrix rho = product_gibbs_x(n, config.setup.schedule.x_beta(config.beta0));
            apply_circuit(rho, circuit);
            AdiabaticityRow row;
            row.M = m;
            row.k = k;
            row.S_estimated = entropy_from_x(std::clamp(site_mean_x(rho), -1.0, 1.0));
            row.S_exact = entropy_density_half(rho);
            if (k == 0) reference = row.S_estimated;
            block.push_back(row);
        }
        bool adiabatic = true;
        for (auto& row : block) {
            row.k_shift = std::abs(row.S_estimated - reference);
            if (row.k > 0 && row.k_shift > config.threshold) adiabatic = false;
        }
        for (auto& row : block) {
            row.adiabatic = adiabatic;
            rows.push_back(row);
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Hardware observables

HardwareObservables derive_hardware_quantities(Measured e, Measured e_prime, Measured m, Measured m_prime) {
    HardwareObservables out;
    out.e = e;
    out.e_prime = e_prime;
    out.m = m;
    out.m_prime = m_prime;
    out.entropy = entropy_from_x(m.value);
    // |dS/dm| = |artanh(m)|.
    out.entropy_error = std::abs(m.value) < 1.0 ? std::abs(std::atanh(m.value)) * m.error : 0.0;
    out.beta = beta_from_observables(e, e_prime, m, m_prime);
    return out;
}

namespace {

/// Running mean and standard error of the mean.
class Tally {
  public:
    void add(double v) {
        ++n_;
        const double d = v - mean_;
        mean_ += d / n_;
        m2_ += d * (v - mean_);
    }
    double mean() const { return mean_; }
    double error() const { return n_ > 1 ? std::sqrt(m2_ / (n_ - 1) / n_) : 0.0; }
    Measured measured() const { return {mean(), error()}; }

  private:
    long n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace

HardwareObservables run_hardware_table(const HardwareConfig& config) {
    const Lattice lattice = Lattice::torus(config.lx, config.ly);
    const int n = lattice.sites();
    if (n > kMaxStateVectorQubits) {
        throw CapacityError(fmt::format("statevector backend limited to {} qubits", kMaxStateVectorQubits));
    }
    if (config.trajectories < 1) throw InvalidArgument("need at least one trajectory");
    if (config.shots_energy < 0 || config.shots_mirror < 0) throw InvalidArgument("shot counts must be non-negative");
    if (config.p > 0.0 && config.shots_energy == 0 && config.trajectories == 1) {
        // One noisy trajectory is a single sample, not an expectation value.
        throw InvalidArgument("noisy hardware emulation needs trajectories > 1 or shots");
    }

    Circuit forward = hardware_circuit(config.schedule, lattice);
    Circuit mirror = mirror_circuit(forward, true);
    if (config.p > 0.0) {
        forward = attach_noise(forward, config.p, NoisePlacement::PerTwoQubitGate);
        mirror = attach_noise(mirror, config.p, NoisePlacement::PerTwoQubitGate);
    }
    const double h_x = config.schedule.h_x;
    const PauliSum zz_op = ising_on(lattice, 1.0 / n, 0.0, 0.0);
    const PauliSum x_op = mean_x(n);

    // Trajectory k of variant v (0: |-...->, 1: |+-...->) starts from a basis
    // or sampled thermal product state.
    auto initial = [&](int variant, Rng& rng) {
        std::vector<int> signs(n, -1);
        if (config.beta0) {
            std::uniform_real_distribution<double> uniform(0.0, 1.0);
            const double p_minus = 0.5 * (1.0 + std::tanh(*config.beta0));
            for (auto& s : signs) s = uniform(rng) < p_minus ? -1 : 1;
        }
        if (variant == 1) signs[0] = 1;
        return new_basis_product_state(n, signs);
    };
    auto run = [&](const Circuit& circuit, StateVector psi, Rng& rng) {
        if (circuit.has_noise()) {
            apply_circuit_trajectory(psi, circuit, rng);
        } else {
            apply_circuit(psi, circuit);
        }
        return psi;
    };
    auto bit_sign = [](Index outcome, int q) { return ((outcome >> q) & 1U) ? -1.0 : 1.0; };

    struct Energies {
        Measured zz, x, e;
    };
    auto energy_block = [&](int variant) {
        Tally zz;
        Tally x;
        Tally e;
        if (config.shots_energy == 0) {
            for (int k = 0; k < config.trajectories; ++k) {
                Rng rng = make_stream(config.seed, 4 * static_cast<std::uint64_t>(k) + variant);
                const StateVector psi = run(forward, initial(variant, rng), rng);
                const double vzz = expectation(psi, zz_op);
                const double vx = expectation(psi, x_op);
                zz.add(vzz);
                x.add(vx);
                e.add(-vzz + h_x * vx);
            }
            return Energies{zz.measured(), x.measured(), e.measured()};
        }
        // Shots are dealt round-robin over trajectories; each basis gets the
        // full shot budget.
        for (int k = 0; k < config.trajectories; ++k) {
            Rng rng = make_stream(config.seed, 4 * static_cast<std::uint64_t>(k) + variant);
            const StateVector psi = run(forward, initial(variant, rng), rng);
            const int share = config.shots_energy / config.trajectories + (k < config.shots_energy % config.trajectories);
            if (share == 0) continue;
            for (Index outcome : sample_measurements(psi, Basis::Z, share, rng)) {
                double v = 0.0;
                for (const auto& edge : lattice.edges()) v += bit_sign(outcome, edge.a) * bit_sign(outcome, edge.b);
                zz.add(v / n);
            }
            for (Index outcome : sample_measurements(psi, Basis::X, share, rng)) {
                double v = 0.0;
                for (int q = 0; q < n; ++q) v += bit_sign(outcome, q);
                x.add(v / n);
            }
        }
        const Measured mzz = zz.measured();
        const Measured mx = x.measured();
        return Energies{mzz, mx, {-mzz.value + h_x * mx.value, std::hypot(mzz.error, h_x * mx.error)}};
    };
    auto mirror_block = [&](int variant) {
        Tally m;
        for (int k = 0; k < config.trajectories; ++k) {
            Rng rng = make_stream(config.seed, 4 * static_cast<std::uint64_t>(k) + 2 + variant);
            const StateVector psi = run(mirror, initial(variant, rng), rng);
            if (config.shots_mirror == 0) {
                m.add(expectation(psi, x_op));
                continue;
            }
            const int share = config.shots_mirror / config.trajectories + (k < config.shots_mirror % config.trajectories);
            if (share == 0) continue;
            for (Index outcome : sample_measurements(psi, Basis::X, share, rng)) {
                double v = 0.0;
                for (int q = 0; q < n; ++q) v += bit_sign(outcome, q);
                m.add(v / n);
            }
        }
        return m.measured();
    };

    const Energies plain = energy_block(0);
    const Energies primed = energy_block(1);
    HardwareObservables out = derive_hardware_quantities(plain.e, primed.e, mirror_block(0), mirror_block(1));
    out.zz = plain.zz;
    out.x = plain.x;
    out.zz_prime = primed.zz;
    out.x_prime = primed.x;
    return out;
}

// ---------------------------------------------------------------------------
// Perturbation scaling

double second_order_part(double f_full, double f_half) { return 2.0 * (f_full - 2.0 * f_half); }

namespace {

/// Half-system entropy density of a dense state with qubits 0..N/2-1 kept.
double dense_half_entropy(const Eigen::MatrixXcd& rho, int n) {
    const Eigen::Index dim_a = Eigen::Index{1} << (n / 2);
    const Eigen::Index dim_b = rho.rows() / dim_a;
    Eigen::MatrixXcd rho_a = Eigen::MatrixXcd::Zero(dim_a, dim_a);
    for (Eigen::Index b = 0; b < dim_b; ++b) rho_a += rho.block(b * dim_a, b * dim_a, dim_a, dim_a);
    return von_neumann_entropy(rho_a) / (n / 2);
}

/// Half-system entropy change of Gibbs(H) evolved under H + eps dH at each time.
std::vector<double> entropy_changes(const Eigen::MatrixXcd& rho, double s_ref, const Eigen::MatrixXcd& h,
                                    const Eigen::MatrixXcd& dh, double eps, std::span<const double> times,
                                    int n) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h + eps * dh);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolve of perturbed Hamiltonian failed");
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    const Eigen::VectorXd& d = solver.eigenvalues();
    const Eigen::MatrixXcd rho_eig = v.adjoint() * rho * v;
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        Eigen::VectorXcd phase(d.size());
        for (Eigen::Index i = 0; i < d.size(); ++i) phase[i] = std::polar(1.0, -t * d[i]);
        const Eigen::MatrixXcd evolved = phase.asDiagonal() * rho_eig * phase.conjugate().asDiagonal();
        out.push_back(dense_half_entropy(v * evolved * v.adjoint(), n) - s_ref);
    }
    return out;
}

}  // namespace

PerturbationResult run_perturbation_scaling(const PerturbationConfig& config) {
    const int n = config.h.n_qubits();
    if (n > kMaxPerturbationQubits) {
        throw CapacityError(fmt::format("perturbation experiment limited to {} qubits", kMaxPerturbationQubits));
    }
    if (config.delta_h.n_qubits() != n) throw InvalidArgument("perturbation acts on a different register");
    if (n % 2 != 0) throw InvalidArgument("half-system entropy needs an even qubit count");
    if (config.times.empty()) throw InvalidArgument("perturbation experiment needs a time grid");
    if (!(config.epsilon >= 0.0)) throw InvalidArgument("epsilon must be non-negative");
    for (double l : config.lambdas) {
        if (!(l > 0.0)) throw InvalidArgument("lambda values must be positive");
    }

    const Eigen::MatrixXcd h = config.h.to_dense();
    const Eigen::MatrixXcd dh = config.delta_h.to_dense();
    const Eigen::MatrixXcd rho = gibbs_exact(config.h, config.beta).to_dense();
    const double s_ref = dense_half_entropy(rho, n);

    PerturbationResult out;
    out.times = config.times;
    out.ds_full = entropy_changes(rho, s_ref, h, dh, config.epsilon, config.times, n);
    out.ds_half = entropy_changes(rho, s_ref, h, dh, 0.5 * config.epsilon, config.times, n);
    for (std::size_t i = 0; i < config.times.size(); ++i) {
        out.ds_second.push_back(second_order_part(out.ds_full[i], out.ds_half[i]));
    }

    std::vector<double> window;
    std::vector<double> log_t;
    std::vector<double> log_s;
    for (std::size_t i = 0; i < config.times.size(); ++i) {
        const double t = config.times[i];
        if (t < config.fit_t_min || t > config.fit_t_max || t <= 0.0) continue;
        window.push_back(t);
        if (out.ds_second[i] != 0.0) {
            log_t.push_back(std::log(t));
            log_s.push_back(std::log(std::abs(out.ds_second[i])));
        }
    }
    if (config.epsilon == 0.0) {
        out.slope = 0.0;
    } else {
        if (log_t.size() < 3) throw InvalidArgument("slope fit window holds fewer than three usable times");
        out.slope = fit_line(log_t, log_s).slope;
    }

    for (double lambda : config.lambdas) {
        std::vector<double> scaled(window.size());
        std::transform(window.begin(), window.end(), scaled.begin(), [&](double t) { return lambda * t; });
        const auto full = entropy_changes(rho, s_ref, h, dh, config.epsilon / lambda, scaled, n);
        const auto half = entropy_changes(rho, s_ref, h, dh, 0.5 * config.epsilon / lambda, scaled, n);
        double mean = 0.0;
        for (std::size_t i = 0; i < scaled.size(); ++i) mean += std::abs(second_order_part(full[i], half[i]));
        out.lambdas.push_back(lambda);
        out.lambda_second.push_back(scaled.empty() ? 0.0 : mean / scaled.size());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Curve analysis

double drift_area(const TimeSeries& series, double s0) {
    series.validate();
    double area = 0.0;
    for (std::size_t i = 1; i < series.times.size(); ++i) {
        const double dt = series.times[i] - series.times[i - 1];
        area += 0.5 * dt * (std::abs(series.values[i] - s0) + std::abs(series.values[i - 1] - s0));
    }
    return area;
}

double plateau_mean(const TimeSeries& series) {
    series.validate();
    if (series.values.empty()) throw InvalidArgument("plateau of an empty series");
    const std::size_t from = series.values.size() / 2;
    double sum = 0.0;
    for (std::size_t i = from; i < series.values.size(); ++i) sum += series.values[i];
    return sum / static_cast<double>(series.values.size() - from);
}

Extrapolation extrapolate_inverse_n(std::span<const int> sizes, std::span<const TimeSeries> series) {
    if (sizes.size() != series.size() || sizes.size() < 2) {
        throw InvalidArgument("extrapolation needs two or more sizes with one series each");
    }
    for (const auto& s : series) {
        if (s.times != series.front().times) throw InvalidArgument("extrapolated series must share their times");
    }
    std::vector<double> inv_n;
    for (int n : sizes) inv_n.push_back(1.0 / n);
    Extrapolation out;
    out.times = series.front().times;
    std::vector<double> column(sizes.size());
    for (std::size_t t = 0; t < out.times.size(); ++t) {
        for (std::size_t k = 0; k < series.size(); ++k) column[k] = series[k].values[t];
        out.intercept.push_back(fit_line(inv_n, column).intercept);
    }
    return out;
}

EnergyTemperatureCurve monotone_branch(std::span<const CurveRecord> records) {
    EnergyTemperatureCurve out;
    for (const auto& r : records) {
        if (!std::isfinite(r.beta_f)) {
            if (out.beta.empty()) continue;
            break;
        }
        if (!out.beta.empty() && !(r.beta_f > out.beta.back())) break;
        out.beta.push_back(r.beta_f);
        out.energy.push_back(r.E);
    }
    return out;
}

double max_reference_deviation(std::span<const CurveRecord> records, const ThermalReference& reference,
                               double beta_lo, double beta_hi) {
    double worst = -1.0;
    for (const auto& r : records) {
        if (!std::isfinite(r.beta_f) || r.beta_f < beta_lo || r.beta_f > beta_hi) continue;
        const double e_ref = interpolate(reference.beta, reference.energy_density, r.beta_f);
        if (std::isnan(e_ref)) throw InvalidArgument(fmt::format("beta_f = {} outside the reference grid", r.beta_f));
        worst = std::max(worst, std::abs(r.E - e_ref));
    }
    if (worst < 0.0) throw NumericalError("no prepared point falls in the comparison window");
    return worst;
}

CollapseMetrics collapse_metrics(std::span<const std::vector<CurveRecord>> curves, int samples) {
    if (curves.size() < 2) throw InvalidArgument("collapse needs at least two curves");
    if (samples < 2) throw InvalidArgument("collapse needs at least two samples");
    const std::size_t grid = curves.front().size();
    for (const auto& c : curves) {
        if (c.size() != grid) throw InvalidArgument("collapse curves must share the beta0 grid");
        for (std::size_t i = 0; i < grid; ++i) {
            if (c[i].beta0 != curves.front()[i].beta0) throw InvalidArgument("collapse curves must share the beta0 grid");
        }
    }
    CollapseMetrics out;
    std::vector<EnergyTemperatureCurve> branches;
    out.beta_lo = -std::numeric_limits<double>::infinity();
    out.beta_hi = std::numeric_limits<double>::infinity();
    for (const auto& c : curves) {
        branches.push_back(monotone_branch(c));
        const auto& b = branches.back();
        if (b.beta.size() < 2) throw NumericalError("a curve has no monotone E(beta) branch");
        out.beta_lo = std::max(out.beta_lo, b.beta.front());
        out.beta_hi = std::min(out.beta_hi, b.beta.back());
        out.beta_max.push_back(b.beta.back());
    }
    if (!(out.beta_hi > out.beta_lo)) throw NumericalError("curves share no beta range");
    for (int s = 0; s < samples; ++s) {
        const double beta = out.beta_lo + (out.beta_hi - out.beta_lo) * s / (samples - 1);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& b : branches) {
            const double e = interpolate(b.beta, b.energy, beta);
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
        out.e_of_beta_spread = std::max(out.e_of_beta_spread, hi - lo);
    }
    for (std::size_t i = 0; i < grid; ++i) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& c : curves) {
            lo = std::min(lo, c[i].E);
            hi = std::max(hi, c[i].E);
        }
        out.e_of_beta0_spread = std::max(out.e_of_beta0_spread, hi - lo);
    }
    return out;
}

}  // namespace adiatherm
