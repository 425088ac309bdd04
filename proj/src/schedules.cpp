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

#include "adiatherm/schedules.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "adiatherm/types.hpp"

namespace adiatherm {

namespace {

std::vector<int> all_qubits(int n) {
    std::vector<int> q(n);
    std::iota(q.begin(), q.end(), 0);
    return q;
}

void push_field_layers(TrotterStep& step, double zz, double z, double x, const Lattice& lattice) {
    if (!lattice.edges().empty()) step.layers.emplace_back(ZZRotation{lattice.edges(), zz});
    if (z != 0.0) step.layers.emplace_back(ZRotationAll{z});
    step.layers.emplace_back(XRotationAll{x});
}

}  // namespace

void LinearSchedule::validate() const {
    if (steps < 1) throw InvalidArgument("linear schedule needs M >= 1");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("linear schedule needs dt > 0");
    if (h0_sign != 1 && h0_sign != -1) throw InvalidArgument("h0 sign must be +1 or -1");
    if (!std::isfinite(target.j) || !std::isfinite(target.h_x) || !std::isfinite(target.h_z)) {
        throw InvalidArgument("schedule couplings must be finite");
    }
}

int aligned_h0_sign(double h_x) { return h_x > 0.0 ? -1 : 1; }

void PowerLawSchedule::validate() const {
    if (steps < 0) throw InvalidArgument("power-law schedule needs M >= 0");
    if (steps % 2 != 0) throw InvalidArgument("power-law schedule needs an even M");
    if (h_x == 0.0 || !std::isfinite(h_x)) throw InvalidArgument("power-law schedule needs a nonzero finite h_x");
    for (int n = 0; n < steps; ++n) {
        if (!(a + b * n > 0.0)) {
            throw InvalidArgument(fmt::format("a + b n = {} is not positive at n = {}", a + b * n, n));
        }
    }
}

TrotterStep ising_trotter_step(const Lattice& lattice, const IsingParams& params, double dt) {
    TrotterStep step;
    push_field_layers(step, dt * params.j, dt * params.h_z, dt * params.h_x, lattice);
    return step;
}

Circuit linear_trotter_circuit(const LinearSchedule& schedule, const Lattice& lattice) {
    schedule.validate();
    Circuit circuit(lattice.sites());
    const double h0_x = -static_cast<double>(schedule.h0_sign);
    for (int n = 0; n < schedule.steps; ++n) {
        const double t = (n + 0.5) / schedule.steps;
        TrotterStep step;
        push_field_layers(step, schedule.dt * t * schedule.target.j, schedule.dt * t * schedule.target.h_z,
                          schedule.dt * ((1.0 - t) * h0_x + t * schedule.target.h_x), lattice);
        circuit.push_step(std::move(step));
    }
    return circuit;
}

Circuit quench_circuit(const Lattice& lattice, const IsingParams& params, int steps, double dt) {
    if (steps < 0) throw InvalidArgument("step count must be non-negative");
    Circuit circuit(lattice.sites());
    const TrotterStep step = ising_trotter_step(lattice, params, dt);
    for (int n = 0; n < steps; ++n) circuit.push_step(step);
    return circuit;
}

std::vector<std::pair<double, double>> hardware_schedule(const PowerLawSchedule& spec) {
    spec.validate();
    std::vector<std::pair<double, double>> out;
    out.reserve(spec.steps);
    for (int n = 0; n < spec.steps; ++n) {
        const double f = std::pow(spec.a + spec.b * n, -spec.c);
        const double j = -(f / spec.h_x) * std::pow((n + 0.5) / spec.steps, spec.d);
        out.emplace_back(j, f);
    }
    return out;
}

Circuit hardware_circuit(const PowerLawSchedule& spec, const Lattice& lattice) {
    if (lattice.kind() != Lattice::Kind::Torus) throw InvalidArgument("hardware circuit needs a torus lattice");
    Circuit circuit(lattice.sites());
    for (const auto& [j, f] : hardware_schedule(spec)) {
        TrotterStep step;
        step.layers.emplace_back(ZZRotation{lattice.edges(), j});
        step.layers.emplace_back(XRotationAll{f});
        circuit.push_step(std::move(step));
    }
    return circuit;
}

Circuit mirror_circuit(const Circuit& base, bool halve) {
    if (halve && base.step_count() % 2 != 0) {
        throw InvalidArgument(fmt::format("cannot halve a circuit of {} steps", base.step_count()));
    }
    Circuit forward = base.without_noise();
    if (halve) forward = forward.prefix(forward.step_count() / 2);
    Circuit out = forward;
    out.append(forward.inverse());
    return out;
}

Circuit adiabaticity_probe_circuit(const Circuit& base, const ProbeSpec& probe, const TrotterStep& final_step) {
    if (probe.k < 0) throw InvalidArgument("probe step count must be non-negative");
    const Circuit forward = base.without_noise();
    Circuit out = forward;
    for (int i = 0; i < probe.k; ++i) out.push_step(final_step);
    out.append(forward.inverse());
    out.validate();
    return out;
}

Circuit attach_noise(const Circuit& circuit, double p, NoisePlacement placement) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(fmt::format("noise amplitude {} outside [0, 1]", p));
    Circuit out(circuit.n_qubits());
    switch (placement) {
        case NoisePlacement::PerTrotterStep:
            for (TrotterStep step : circuit.steps()) {
                step.layers.emplace_back(NoiseLayer{p, all_qubits(circuit.n_qubits())});
                out.push_step(std::move(step));
            }
            return out;
        case NoisePlacement::PerTwoQubitGate:
            for (const auto& step : circuit.steps()) {
                TrotterStep noisy;
                for (const auto& layer : step.layers) {
                    const auto* zz = std::get_if<ZZRotation>(&layer);
                    if (zz == nullptr) {
                        noisy.layers.push_back(layer);
                        continue;
                    }
                    for (const auto& e : zz->edges) {
                        noisy.layers.emplace_back(ZZRotation{{e}, zz->angle});
                        noisy.layers.emplace_back(NoiseLayer{p, {e.a, e.b}});
                    }
                }
                out.push_step(std::move(noisy));
            }
            return out;
    }
    throw InvalidArgument("unknown noise placement");
}

}  // namespace adiatherm
