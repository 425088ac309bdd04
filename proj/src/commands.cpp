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

// Subcommands. Each builds its setups from a resolved Config, calls the
// protocol layer and renders CSV/JSON in memory; run_command writes them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "adiatherm/cli.hpp"
#include "adiatherm/models.hpp"
#include "adiatherm/protocol.hpp"
#include "adiatherm/schedules.hpp"

namespace adiatherm::cli {

namespace {

std::string num(double v) { return format_number(v); }
std::string num(int v) { return std::to_string(v); }

// ---------------------------------------------------------------------------
// Schema helpers

Field number(std::string name, double def, std::string help) {
    return {std::move(name), FieldKind::Number, Json(def), std::move(help)};
}
Field integer(std::string name, long long def, std::string help) {
    return {std::move(name), FieldKind::Integer, Json(def), std::move(help)};
}
Field text(std::string name, std::string def, std::string help) {
    return {std::move(name), FieldKind::String, Json(std::move(def)), std::move(help)};
}
Field boolean(std::string name, bool def, std::string help) {
    return {std::move(name), FieldKind::Boolean, Json(def), std::move(help)};
}
Field numbers(std::string name, std::vector<double> def, std::string help) {
    return {std::move(name), FieldKind::NumberList, Json(std::move(def)), std::move(help)};
}
Field integers(std::string name, std::vector<int> def, std::string help) {
    return {std::move(name), FieldKind::IntegerList, Json(std::move(def)), std::move(help)};
}

Schema with_common(std::string backend, Schema fields) {
    Schema s{integer("seed", 1, "master seed for every random stream"),
             text("backend", std::move(backend), "dm, sv or traj")};
    s.insert(s.end(), fields.begin(), fields.end());
    return s;
}

std::vector<Field> linear_fields(int n, int steps, double dt, double j, double h_x, double h_z) {
    return {integer("n", n, "number of sites"),
            boolean("periodic", true, "ring instead of open chain"),
            integer("steps", steps, "Trotter steps M"),
            number("dt", dt, "Trotter step size"),
            integer("h0_sign", 0, "H0 = -sign * sum X; 0 aligns it with h_x"),
            number("j", j, "ZZ coupling J"),
            number("h_x", h_x, "final transverse field"),
            number("h_z", h_z, "final longitudinal field")};
}

std::vector<Field> beta0_grid_fields(double lo, double hi, double step) {
    return {number("beta0_min", lo, "first beta0"), number("beta0_max", hi, "last beta0"),
            number("beta0_step", step, "beta0 spacing")};
}

// ---------------------------------------------------------------------------
// Config readers

std::vector<double> uniform_grid(double lo, double hi, double step, std::string_view what) {
    if (!(step > 0.0) || !(hi >= lo)) throw ConfigError(fmt::format("{} grid needs step > 0 and max >= min", what));
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 100000) throw ConfigError(fmt::format("{} grid is too large", what));
    std::vector<double> grid;
    for (long i = 0; i < count; ++i) grid.push_back(lo + step * static_cast<double>(i));
    return grid;
}

std::vector<double> beta0_grid(const Config& c) {
    return uniform_grid(c.number("beta0_min"), c.number("beta0_max"), c.number("beta0_step"), "beta0");
}

Lattice lattice_1d(const Config& c, int n) {
    if (n < 2) throw ConfigError("need at least two sites");
    if (n % 2 != 0) throw ConfigError(fmt::format("half-system entropy needs an even N, got {}", n));
    return c.boolean("periodic") ? Lattice::ring(n) : Lattice::chain(n);
}

int h0_sign(const Config& c, double h_x) {
    const int s = c.integer("h0_sign");
    if (s == 0) return aligned_h0_sign(h_x);
    if (s != 1 && s != -1) throw ConfigError("h0_sign must be -1, 0 (aligned with h_x) or 1");
    return s;
}

LinearSchedule linear_schedule(const Config& c, IsingParams target) {
    LinearSchedule s;
    s.steps = c.integer("steps");
    s.dt = c.number("dt");
    s.h0_sign = h0_sign(c, target.h_x);
    s.target = target;
    s.validate();
    return s;
}

LinearSchedule linear_schedule(const Config& c) {
    return linear_schedule(c, {c.number("j"), c.number("h_x"), c.number("h_z")});
}

double noise_level(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(fmt::format("noise level p = {} outside [0, 1]", p));
    return p;
}

enum class BackendName { Dm, Sv, Traj };

BackendName backend_name(const Config& c) {
    const auto b = c.text("backend");
    if (b == "dm") return BackendName::Dm;
    if (b == "sv") return BackendName::Sv;
    if (b == "traj") return BackendName::Traj;
    throw ConfigError(fmt::format("unknown backend '{}'; expected dm, sv or traj", b));
}

void require_dm(const Config& c, std::string_view command) {
    if (backend_name(c) != BackendName::Dm) {
        throw ConfigError(fmt::format("{} needs exact mixed-state entropies and runs only on the dm backend", command));
    }
}

/// Backend for run_thermal_prep. sv samples the thermal start but refuses noise.
Backend prep_backend(const Config& c, double p) {
    switch (backend_name(c)) {
        case BackendName::Dm: return Backend::DensityMatrix;
        case BackendName::Sv:
            if (p > 0.0) throw ConfigError("the sv backend is noiseless; use traj for p > 0");
            return Backend::Trajectories;
        case BackendName::Traj: return Backend::Trajectories;
    }
    return Backend::DensityMatrix;
}

int trajectories(const Config& c) {
    const int k = c.integer("trajectories");
    if (k < 1) throw ConfigError("trajectories must be at least 1");
    return k;
}

std::string curves_csv(std::span<const CurveRecord> records) {
    CsvTable t({"beta0", "E", "S", "beta_f", "p", "M", "dt", "N"});
    for (const auto& r : records) {
        t.row({num(r.beta0), num(r.E), num(r.S), num(r.beta_f), num(r.p), num(r.M), num(r.dt), num(r.N)});
    }
    return t.str();
}

std::string_view setting_name(EvolutionSetting s) {
    switch (s) {
        case EvolutionSetting::Adiabatic: return "adiabatic";
        case EvolutionSetting::Quench: return "quench";
        case EvolutionSetting::Mirror: return "mirror";
    }
    return "";
}

void timeseries_rows(CsvTable& t, const EntropyTimeSeries& s, EvolutionSetting setting, int n, double p) {
    for (std::size_t i = 0; i < s.exact.times.size(); ++i) {
        t.row({num(s.exact.times[i]), num(s.exact.values[i]), num(s.x_estimate.values[i]),
               std::string(setting_name(setting)), num(n), num(p)});
    }
}

CsvTable timeseries_table() { return CsvTable({"t", "S_exact", "S_xestimate", "setting", "N", "p"}); }

// ---------------------------------------------------------------------------
// quench-vs-adiabatic

Schema quench_schema() {
    auto fields = linear_fields(0, 120, 0.05, -1.0, 1.0, 1.0);
    fields.erase(fields.begin());  // sizes come from n_list
    fields.insert(fields.begin(), integers("n_list", {6, 8, 10, 12}, "system sizes"));
    fields.push_back(number("beta0", 1.0, "initial inverse temperature"));
    fields.push_back(number("p", 0.0, "depolarizing amplitude per qubit per step"));
    return with_common("dm", fields);
}

RunOutput run_quench(const Config& c, bool dump) {
    require_dm(c, "quench-vs-adiabatic");
    const auto sizes = c.integers("n_list");
    if (sizes.empty()) throw ConfigError("n_list must name at least one system size");
    const LinearSchedule schedule = linear_schedule(c);
    const double beta0 = c.number("beta0");
    const double p = noise_level(c.number("p"));
    const double s0 = s0_of_beta0(beta0);

    RunOutput out;
    std::vector<TimeSeries> adiabatic;
    std::vector<TimeSeries> quench;
    CsvTable drift({"N", "inv_N", "drift_area", "quench_plateau"});
    for (int n : sizes) {
        AdiabaticSetup setup{lattice_1d(c, n), schedule, p, NoisePlacement::PerTrotterStep};
        if (dump) out.add(fmt::format("circuit_adiabatic_N{}.txt", n), setup.forward_circuit().to_text());
        for (auto setting : {EvolutionSetting::Adiabatic, EvolutionSetting::Quench}) {
            const auto series = run_entropy_timeseries({setup, setting, beta0});
            CsvTable t = timeseries_table();
            timeseries_rows(t, series, setting, n, p);
            out.add(fmt::format("timeseries_{}_N{}.csv", setting_name(setting), n), t.str());
            (setting == EvolutionSetting::Adiabatic ? adiabatic : quench).push_back(series.exact);
        }
        drift.row({num(n), num(1.0 / n), num(drift_area(adiabatic.back(), s0)), num(plateau_mean(quench.back()))});
    }
    out.add("drift.csv", drift.str());
    if (sizes.size() >= 2) {
        const auto ad = extrapolate_inverse_n(sizes, adiabatic);
        const auto qu = extrapolate_inverse_n(sizes, quench);
        CsvTable t({"t", "S_adiabatic_extrapolated", "S_quench_extrapolated", "S0"});
        for (std::size_t i = 0; i < ad.times.size(); ++i) {
            t.row({num(ad.times[i]), num(ad.intercept[i]), num(qu.intercept[i]), num(s0)});
        }
        out.add("extrapolation.csv", t.str());
    }
    return out;
}

// ---------------------------------------------------------------------------
// gibbs-compare

Schema gibbs_schema() {
    auto fields = linear_fields(12, 60, 0.1, -1.0, 1.0, 1.0);
    fields.erase(fields.end() - 3, fields.end());  // couplings come from the lists
    for (auto& f : std::vector<Field>{
             numbers("h_x_list", {1.0, 1.0, 2.0}, "h_x per parameter set"),
             numbers("h_z_list", {1.0, 0.5, 1.0}, "h_z per parameter set"),
             numbers("j_list", {-1.0, -1.0, -1.0}, "J per parameter set"),
             number("p", 0.0, "depolarizing amplitude per qubit per step"),
             integer("trajectories", 200, "samples per beta0 on sv/traj"),
             number("beta_ref_max", 3.0, "largest beta of the Gibbs reference"),
             number("beta_ref_step", 0.01, "Gibbs reference spacing"),
             number("compare_beta_min", 0.2, "comparison window start"),
             number("compare_beta_max", 1.5, "comparison window end")}) {
        fields.push_back(f);
    }
    for (auto& f : beta0_grid_fields(0.0, 3.0, 0.1)) fields.push_back(f);
    return with_common("dm", fields);
}

RunOutput run_gibbs(const Config& c, bool dump) {
    const auto hx = c.numbers("h_x_list");
    const auto hz = c.numbers("h_z_list");
    const auto jj = c.numbers("j_list");
    if (hx.empty() || hx.size() != hz.size() || hx.size() != jj.size()) {
        throw ConfigError("h_x_list, h_z_list and j_list must be non-empty and equally long");
    }
    const double p = noise_level(c.number("p"));
    const Backend backend = prep_backend(c, p);
    const int n = c.integer("n");
    const Lattice lattice = lattice_1d(c, n);
    const auto grid = beta0_grid(c);
    if (grid.size() < 3) throw ConfigError("the beta0 grid needs at least three points to estimate beta_f");
    const auto ref_betas = uniform_grid(0.0, c.number("beta_ref_max"), c.number("beta_ref_step"), "reference beta");
    const double lo = c.number("compare_beta_min");
    const double hi = c.number("compare_beta_max");

    RunOutput out;
    CsvTable compare({"set", "h_x", "h_z", "J", "beta0", "beta_f", "E_prep", "E_gibbs"});
    CsvTable summary({"set", "h_x", "h_z", "J", "max_deviation"});
    for (std::size_t s = 0; s < hx.size(); ++s) {
        AdiabaticSetup setup{lattice, linear_schedule(c, {jj[s], hx[s], hz[s]}), p, NoisePlacement::PerTrotterStep};
        if (dump) out.add(fmt::format("circuit_set{}.txt", s), setup.forward_circuit().to_text());
        ThermalPrepConfig prep;
        prep.setup = setup;
        prep.beta0_grid = grid;
        prep.backend = backend;
        prep.trajectories = trajectories(c);
        prep.seed = c.seed() + s;
        const auto result = run_thermal_prep(prep);
        const auto reference = thermal_reference_curve(setup.final_hamiltonian(), ref_betas);
        out.add(fmt::format("curves_set{}.csv", s), curves_csv(result.records));
        CsvTable ref({"beta", "E", "S"});
        for (std::size_t i = 0; i < reference.beta.size(); ++i) {
            ref.row({num(reference.beta[i]), num(reference.energy_density[i]), num(reference.entropy_density[i])});
        }
        out.add(fmt::format("reference_set{}.csv", s), ref.str());
        for (const auto& r : result.records) {
            const double e_ref = std::isfinite(r.beta_f)
                                     ? interpolate(reference.beta, reference.energy_density, r.beta_f)
                                     : std::numeric_limits<double>::quiet_NaN();
            compare.row({num(static_cast<int>(s)), num(hx[s]), num(hz[s]), num(jj[s]), num(r.beta0), num(r.beta_f),
                         num(r.E), num(e_ref)});
        }
        double worst = std::numeric_limits<double>::quiet_NaN();
        try {
            worst = max_reference_deviation(result.records, reference, lo, hi);
        } catch (const NumericalError&) {
            // No point in the window; reported as nan.
        }
        summary.row({num(static_cast<int>(s)), num(hx[s]), num(hz[s]), num(jj[s]), num(worst)});
    }
    out.add("compare.csv", compare.str());
    out.add("agreement.csv", summary.str());
    return out;
}

// ---------------------------------------------------------------------------
// noise-curves

Schema noise_schema() {
    auto fields = linear_fields(12, 60, 0.1, -1.0, -1.0, 1.0);
    for (auto& f : std::vector<Field>{
             numbers("p_list", {0.0, 2.5e-4, 5e-4, 1e-3}, "depolarizing amplitudes per qubit per step"),
             integer("trajectories", 200, "samples per beta0 on traj"),
             integer("series_n", 12, "sites for S(t)"),
             integer("series_steps", 200, "Trotter steps for S(t)"),
             number("series_dt", 0.1, "step size for S(t)"),
             number("series_beta0", 2.0, "initial inverse temperature for S(t)"),
             number("series_j", -1.0, "J for S(t)"),
             number("series_h_x", 1.0, "h_x for S(t)"),
             number("series_h_z", 1.0, "h_z for S(t)"),
             boolean("series", true, "emit S(t) and decay fits")}) {
        fields.push_back(f);
    }
    for (auto& f : beta0_grid_fields(0.0, 3.0, 0.1)) fields.push_back(f);
    return with_common("dm", fields);
}

RunOutput run_noise(const Config& c, bool dump) {
    const auto p_list = c.numbers("p_list");
    if (p_list.empty()) throw ConfigError("p_list must not be empty");
    for (double p : p_list) noise_level(p);
    const auto grid = beta0_grid(c);
    if (grid.size() < 3) throw ConfigError("the beta0 grid needs at least three points to estimate beta_f");
    if (c.boolean("series")) require_dm(c, "noise-curves S(t)");

    RunOutput out;
    CsvTable fits({"p", "alpha", "r", "rms", "mirror_S_exact", "mirror_S_xestimate"});
    std::vector<std::vector<CurveRecord>> curves;
    for (std::size_t i = 0; i < p_list.size(); ++i) {
        const double p = p_list[i];
        if (c.boolean("series")) {
            LinearSchedule sched;
            sched.steps = c.integer("series_steps");
            sched.dt = c.number("series_dt");
            sched.target = {c.number("series_j"), c.number("series_h_x"), c.number("series_h_z")};
            sched.h0_sign = h0_sign(c, sched.target.h_x);
            sched.validate();
            const int n = c.integer("series_n");
            AdiabaticSetup setup{lattice_1d(c, n), sched, p, NoisePlacement::PerTrotterStep};
            const double beta0 = c.number("series_beta0");
            const auto forward = run_entropy_timeseries({setup, EvolutionSetting::Adiabatic, beta0});
            const auto mirror = run_entropy_timeseries({setup, EvolutionSetting::Mirror, beta0});
            CsvTable t = timeseries_table();
            timeseries_rows(t, forward, EvolutionSetting::Adiabatic, n, p);
            timeseries_rows(t, mirror, EvolutionSetting::Mirror, n, p);
            out.add(fmt::format("timeseries_p{}.csv", num(p)), t.str());
            const auto fit = fit_decay(forward.exact, beta0);
            fits.row({num(p), num(fit.alpha), num(fit.r), num(fit.rms), num(mirror.exact.values.back()),
                      num(mirror.x_estimate.values.back())});
        }
        AdiabaticSetup setup{lattice_1d(c, c.integer("n")), linear_schedule(c), p, NoisePlacement::PerTrotterStep};
        if (dump) out.add(fmt::format("circuit_p{}.txt", num(p)), setup.forward_circuit().to_text());
        ThermalPrepConfig prep;
        prep.setup = setup;
        prep.beta0_grid = grid;
        prep.backend = prep_backend(c, p);
        prep.trajectories = trajectories(c);
        prep.seed = c.seed() + i;
        curves.push_back(run_thermal_prep(prep).records);
        out.add(fmt::format("curves_p{}.csv", num(p)), curves_csv(curves.back()));
    }
    if (c.boolean("series")) out.add("decay_fits.csv", fits.str());
    if (curves.size() >= 2) {
        const auto m = collapse_metrics(curves);
        CsvTable t({"metric", "value"});
        t.row({"beta_lo", num(m.beta_lo)});
        t.row({"beta_hi", num(m.beta_hi)});
        t.row({"e_of_beta_spread", num(m.e_of_beta_spread)});
        t.row({"e_of_beta0_spread", num(m.e_of_beta0_spread)});
        for (std::size_t i = 0; i < p_list.size(); ++i) t.row({fmt::format("beta_max_p{}", num(p_list[i])), num(m.beta_max[i])});
        out.add("collapse.csv", t.str());
    }
    return out;
}

// ---------------------------------------------------------------------------
// adiabaticity

Schema adiabaticity_schema() {
    auto fields = linear_fields(10, 0, 0.1, -1.0, -1.0, 1.0);
    fields.erase(fields.begin() + 2);  // steps come from m_list
    for (auto& f : std::vector<Field>{integers("m_list", {20, 40, 60, 80, 100}, "Trotter step counts M"),
                                      integers("k_list", {0, 1, 2, 4}, "probe step counts, 0 included"),
                                      number("dt_probe", 0.1, "step size of the probe steps"),
                                      number("beta0", 2.0, "initial inverse temperature"),
                                      number("p", 5e-4, "depolarizing amplitude per qubit per step"),
                                      number("threshold", 0.01, "largest k-shift still called adiabatic"),
                                      boolean("curves", true, "emit E(beta) curves per M")}) {
        fields.push_back(f);
    }
    for (auto& f : beta0_grid_fields(0.0, 3.0, 0.1)) fields.push_back(f);
    return with_common("dm", fields);
}

RunOutput run_adiabaticity(const Config& c, bool dump) {
    require_dm(c, "adiabaticity");
    const auto m_list = c.integers("m_list");
    if (m_list.empty()) throw ConfigError("m_list must not be empty");
    const auto k_list = c.integers("k_list");
    for (int k : k_list) {
        if (k < 0) throw ConfigError(fmt::format("probe step count k = {} is negative", k));
    }
    AdiabaticityConfig cfg;
    cfg.setup.lattice = lattice_1d(c, c.integer("n"));
    cfg.setup.schedule.steps = m_list.front();
    cfg.setup.schedule.dt = c.number("dt");
    cfg.setup.schedule.target = {c.number("j"), c.number("h_x"), c.number("h_z")};
    cfg.setup.schedule.h0_sign = h0_sign(c, cfg.setup.schedule.target.h_x);
    cfg.setup.p = noise_level(c.number("p"));
    cfg.beta0 = c.number("beta0");
    cfg.dt_probe = c.number("dt_probe");
    cfg.m_list = m_list;
    cfg.k_list = k_list;
    cfg.threshold = c.number("threshold");
    for (int m : m_list) {
        auto s = cfg.setup.schedule;
        s.steps = m;
        s.validate();
    }

    RunOutput out;
    const auto rows = run_adiabaticity_diagnostic(cfg);
    CsvTable t({"M", "k", "S_estimated", "S_exact", "k_shift", "adiabatic"});
    for (const auto& r : rows) {
        t.row({num(r.M), num(r.k), num(r.S_estimated), num(r.S_exact), num(r.k_shift), r.adiabatic ? "1" : "0"});
    }
    out.add("adiabaticity.csv", t.str());

    if (c.boolean("curves")) {
        const auto grid = beta0_grid(c);
        if (grid.size() < 3) throw ConfigError("the beta0 grid needs at least three points to estimate beta_f");
        for (int m : m_list) {
            AdiabaticSetup setup = cfg.setup;
            setup.schedule.steps = m;
            ThermalPrepConfig prep;
            prep.setup = setup;
            prep.beta0_grid = grid;
            out.add(fmt::format("curves_M{}.csv", m), curves_csv(run_thermal_prep(prep).records));
        }
    }
    if (dump) {
        const auto base = linear_trotter_circuit(cfg.setup.schedule, cfg.setup.lattice);
        const auto probe = ising_trotter_step(cfg.setup.lattice, cfg.setup.schedule.target, cfg.dt_probe);
        out.add("circuit_probe_k1.txt",
                attach_noise(adiabaticity_probe_circuit(base, {1, cfg.dt_probe}, probe), cfg.setup.p,
                             cfg.setup.placement)
                    .to_text());
    }
    return out;
}

// ---------------------------------------------------------------------------
// table1

Schema table1_schema() {
    return with_common(
        "sv", {integer("lx", 5, "torus width"), integer("ly", 4, "torus height"),
               integer("steps", 16, "Trotter steps M"), number("a", 1.186, "f_n = (a + b n)^-c"),
               number("b", 0.077, "f_n = (a + b n)^-c"), number("c", 2.181, "exponent c in f_n"),
               number("d", 0.469, "J_n = -(f_n / h_x) ((n + 1/2) / M)^d"), number("h_x", 2.0, "final transverse field"),
               number("p", 0.0, "depolarizing amplitude after every two-qubit gate"),
               {"beta0", FieldKind::OptionalNumber, Json(nullptr), "thermal start instead of basis states"},
               integer("trajectories", 1, "noise or thermal-start samples"),
               integer("shots", 0, "shots per measured basis; 0 means exact expectations"),
               number("fixture_e", -2.334, "hardware e"), number("fixture_e_err", 0.0186, "hardware e error"),
               number("fixture_e_prime", -2.0279, "hardware e'"),
               number("fixture_e_prime_err", 0.0161, "hardware e' error"), number("fixture_m", -0.921, "hardware m"),
               number("fixture_m_err", 0.0028, "hardware m error"), number("fixture_m_prime", -0.846, "hardware m'"),
               number("fixture_m_prime_err", 0.0026, "hardware m' error")});
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

RunOutput run_table1(const Config& c, bool dump) {
    HardwareConfig hw;
    hw.lx = c.integer("lx");
    hw.ly = c.integer("ly");
    hw.schedule = {c.integer("steps"), c.number("a"), c.number("b"), c.number("c"), c.number("d"), c.number("h_x")};
    hw.schedule.validate();
    hw.p = noise_level(c.number("p"));
    hw.beta0 = c.optional_number("beta0");
    hw.trajectories = trajectories(c);
    const int shots = c.integer("shots");
    if (shots < 0) throw ConfigError("shots must be non-negative");
    hw.shots_energy = shots;
    hw.shots_mirror = shots;
    hw.seed = c.seed();
    switch (backend_name(c)) {
        case BackendName::Dm: {
            const int n = hw.lx * hw.ly;
            if (n > kMaxDensityQubits) {
                throw CapacityError(fmt::format("dm backend limited to {} qubits, table1 needs {}", kMaxDensityQubits, n));
            }
            throw ConfigError("table1 runs on the sv or traj backend");
        }
        case BackendName::Sv:
            if (hw.p > 0.0) throw ConfigError("the sv backend is noiseless; use traj for p > 0");
            break;
        case BackendName::Traj: break;
    }

    RunOutput out;
    if (dump) {
        const auto circuit = hardware_circuit(hw.schedule, Lattice::torus(hw.lx, hw.ly));
        out.add("circuit_forward.txt", circuit.to_text());
        out.add("circuit_mirror.txt", mirror_circuit(circuit, true).to_text());
    }
    const auto sim = run_hardware_table(hw);
    const auto fx = derive_hardware_quantities({c.number("fixture_e"), c.number("fixture_e_err")},
                                               {c.number("fixture_e_prime"), c.number("fixture_e_prime_err")},
                                               {c.number("fixture_m"), c.number("fixture_m_err")},
                                               {c.number("fixture_m_prime"), c.number("fixture_m_prime_err")});
    Json j = Json::object();
    auto put = [&](const std::string& key, Measured m) {
        j[key] = finite_or_null(m.value);
        j[key + " error"] = finite_or_null(m.error);
    };
    put("<ZZ>", sim.zz);
    put("<X>", sim.x);
    put("e", sim.e);
    put("<ZZ>'", sim.zz_prime);
    put("<X>'", sim.x_prime);
    put("e'", sim.e_prime);
    put("m", sim.m);
    put("m'", sim.m_prime);
    put("entropy density", {sim.entropy, sim.entropy_error});
    put("beta", {sim.beta.beta, sim.beta.beta_error});
    put("temperature", {sim.beta.temperature, sim.beta.temperature_error});
    j["temperature overflow"] = sim.beta.overflow;
    put("hardware entropy density", {fx.entropy, fx.entropy_error});
    put("hardware beta", {fx.beta.beta, fx.beta.beta_error});
    put("hardware temperature", {fx.beta.temperature, fx.beta.temperature_error});
    out.add("table1.json", j.dump(2) + "\n");
    return out;
}

// ---------------------------------------------------------------------------
// perturb-scaling

Schema perturb_schema() {
    return with_common(
        "dm", {integers("n_list", {6, 8}, "system sizes (at most 8)"), boolean("periodic", true, "ring instead of open chain"),
               number("j", -1.0, "ZZ coupling"), number("h_x", 1.0, "transverse field"), number("h_z", 1.0, "longitudinal field"),
               number("beta", 1.0, "Gibbs inverse temperature"),
               text("delta_h", "x", "perturbation: x (sum X), z (sum Z), zz (sum ZZ) or none"),
               number("epsilon", 1e-3, "perturbation strength"), number("t_min", 1.0, "first time"),
               number("t_max", 100.0, "last time"), integer("t_count", 41, "log-spaced times"),
               number("fit_t_min", 10.0, "slope window start"), number("fit_t_max", 100.0, "slope window end"),
               numbers("lambdas", {1.0, 2.0, 4.0}, "adiabatic rescalings")});
}

RunOutput run_perturb(const Config& c, bool) {
    require_dm(c, "perturb-scaling");
    const auto sizes = c.integers("n_list");
    if (sizes.empty()) throw ConfigError("n_list must not be empty");
    const double t_min = c.number("t_min");
    const double t_max = c.number("t_max");
    const int count = c.integer("t_count");
    if (!(t_min > 0.0) || !(t_max > t_min) || count < 2) throw ConfigError("time grid needs 0 < t_min < t_max and t_count >= 2");
    std::vector<double> times;
    for (int i = 0; i < count; ++i) times.push_back(t_min * std::pow(t_max / t_min, static_cast<double>(i) / (count - 1)));
    const auto kind = c.text("delta_h");
    if (kind != "x" && kind != "z" && kind != "zz" && kind != "none") {
        throw ConfigError(fmt::format("unknown delta_h '{}'", kind));
    }

    RunOutput out;
    CsvTable slopes({"N", "epsilon", "slope"});
    CsvTable lambdas({"N", "lambda", "second_order_mean"});
    for (int n : sizes) {
        if (n > 8) throw CapacityError(fmt::format("perturbation experiment limited to 8 qubits, got {}", n));
        const Lattice lattice = lattice_1d(c, n);
        PerturbationConfig cfg;
        cfg.h = ising_on(lattice, c.number("j"), c.number("h_x"), c.number("h_z"));
        if (kind == "x") cfg.delta_h = ising_on(lattice, 0.0, 1.0, 0.0);
        if (kind == "z") cfg.delta_h = ising_on(lattice, 0.0, 0.0, 1.0);
        if (kind == "zz") cfg.delta_h = ising_on(lattice, 1.0, 0.0, 0.0);
        if (kind == "none") cfg.delta_h = PauliSum(n);
        cfg.beta = c.number("beta");
        cfg.epsilon = kind == "none" ? 0.0 : c.number("epsilon");
        cfg.times = times;
        cfg.lambdas = c.numbers("lambdas");
        cfg.fit_t_min = c.number("fit_t_min");
        cfg.fit_t_max = c.number("fit_t_max");
        const auto r = run_perturbation_scaling(cfg);
        CsvTable t({"t", "dS_full", "dS_half", "dS_second"});
        for (std::size_t i = 0; i < r.times.size(); ++i) {
            t.row({num(r.times[i]), num(r.ds_full[i]), num(r.ds_half[i]), num(r.ds_second[i])});
        }
        out.add(fmt::format("perturb_N{}.csv", n), t.str());
        slopes.row({num(n), num(cfg.epsilon), num(r.slope)});
        for (std::size_t i = 0; i < r.lambdas.size(); ++i) lambdas.row({num(n), num(r.lambdas[i]), num(r.lambda_second[i])});
    }
    out.add("slopes.csv", slopes.str());
    out.add("lambda.csv", lambdas.str());
    return out;
}

}  // namespace

const std::vector<Command>& commands() {
    static const std::vector<Command> table{
        {"quench-vs-adiabatic", "entropy density along quench and adiabatic paths, 1/N extrapolation", quench_schema(),
         run_quench},
        {"gibbs-compare", "noiseless thermal preparation against exact Gibbs curves", gibbs_schema(), run_gibbs},
        {"noise-curves", "S(t) under noise, decay fits and noisy E/S/beta_f curves", noise_schema(), run_noise},
        {"adiabaticity", "probe-step adiabaticity diagnostic over M", adiabaticity_schema(), run_adiabaticity},
        {"table1", "2D hardware-style run plus the measured-value fixture", table1_schema(), run_table1},
        {"perturb-scaling", "second-order entropy response to a weak quench", perturb_schema(), run_perturb},
    };
    return table;
}

const Command& find_command(std::string_view name) {
    for (const auto& c : commands()) {
        if (c.name == name) return c;
    }
    throw ConfigError(fmt::format("unknown command '{}'", name));
}

Config run_command(const Command& command, const RunOptions& options) {
    Config cfg = Config::parse(command.schema, options.config_text);
    auto override_key = [&](std::string_view key, std::string_view flag, const Json& v) {
        const bool known = std::any_of(command.schema.begin(), command.schema.end(), [&](const Field& f) { return f.name == key; });
        if (!known) throw ConfigError(fmt::format("{} does not apply to {}", flag, command.name));
        cfg.set(key, v);
    };
    if (options.seed) override_key("seed", "--seed", Json(*options.seed));
    if (options.backend) override_key("backend", "--backend", Json(*options.backend));
    if (options.trajectories) override_key("trajectories", "--trajectories", Json(*options.trajectories));
    if (options.shots) override_key("shots", "--shots", Json(*options.shots));

    const auto start = std::chrono::steady_clock::now();
    RunOutput out = command.run(cfg, options.dump_circuit);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    Json manifest = Json::object();
    manifest["command"] = command.name;
    manifest["seed"] = cfg.seed();
    manifest["backend"] = cfg.text("backend");
    manifest["config"] = cfg.values();
    Json files = Json::array();
    for (const auto& [name, contents] : out.files) files.push_back(name);
    manifest["outputs"] = files;
    if (options.record_wall_time) manifest["wall_time_s"] = elapsed.count();

    std::filesystem::create_directories(options.out_dir);
    for (const auto& [name, contents] : out.files) write_file_atomic(options.out_dir / name, contents);
    write_file_atomic(options.out_dir / "manifest.json", manifest.dump(2) + "\n");
    return cfg;
}

int run_command_safely(const Command& command, const RunOptions& options, std::ostream& err) {
    try {
        run_command(command, options);
        return kExitOk;
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const InvalidArgument& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace adiatherm::cli
