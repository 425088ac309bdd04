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

#include "adiatherm/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "adiatherm/types.hpp"

namespace adiatherm {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

double parse_double(std::string_view token) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw InvalidArgument(fmt::format("circuit text: bad number '{}'", token));
    }
    return value;
}

int parse_int(std::string_view token) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw InvalidArgument(fmt::format("circuit text: bad integer '{}'", token));
    }
    return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find(sep, start);
        if (end == std::string_view::npos) end = s.size();
        if (end > start) out.push_back(s.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

}  // namespace

bool is_noise(const Layer& layer) { return std::holds_alternative<NoiseLayer>(layer); }

Layer inverse_layer(const Layer& layer) {
    return std::visit(
        Overloaded{
            [](const XRotationAll& g) -> Layer { return XRotationAll{-g.angle}; },
            [](const ZRotationAll& g) -> Layer { return ZRotationAll{-g.angle}; },
            [](const ZZRotation& g) -> Layer { return ZZRotation{g.edges, -g.angle}; },
            [](const NoiseLayer&) -> Layer {
                throw InvalidArgument("noise layers have no unitary inverse");
            },
        },
        layer);
}

Circuit::Circuit(int n_qubits, std::vector<TrotterStep> steps)
    : n_qubits_(n_qubits), steps_(std::move(steps)) {}

void Circuit::push_step(TrotterStep step) { steps_.push_back(std::move(step)); }

void Circuit::append(const Circuit& other) {
    if (other.n_qubits_ != n_qubits_) {
        throw InvalidArgument("cannot append circuits on different registers");
    }
    steps_.insert(steps_.end(), other.steps_.begin(), other.steps_.end());
}

Circuit Circuit::inverse() const {
    Circuit out(n_qubits_);
    out.steps_.reserve(steps_.size());
    for (auto step = steps_.rbegin(); step != steps_.rend(); ++step) {
        TrotterStep inv;
        for (auto layer = step->layers.rbegin(); layer != step->layers.rend(); ++layer) {
            if (!is_noise(*layer)) inv.layers.push_back(inverse_layer(*layer));
        }
        out.steps_.push_back(std::move(inv));
    }
    return out;
}

Circuit Circuit::without_noise() const {
    Circuit out(n_qubits_);
    for (const auto& step : steps_) {
        TrotterStep clean;
        for (const auto& layer : step.layers) {
            if (!is_noise(layer)) clean.layers.push_back(layer);
        }
        out.steps_.push_back(std::move(clean));
    }
    return out;
}

Circuit Circuit::prefix(std::size_t count) const {
    if (count > steps_.size()) throw InvalidArgument("prefix longer than circuit");
    return Circuit(n_qubits_, std::vector<TrotterStep>(steps_.begin(), steps_.begin() + count));
}

std::size_t Circuit::two_qubit_gate_count() const {
    std::size_t count = 0;
    for (const auto& step : steps_) {
        for (const auto& layer : step.layers) {
            if (const auto* zz = std::get_if<ZZRotation>(&layer)) count += zz->edges.size();
        }
    }
    return count;
}

std::size_t Circuit::noise_layer_count() const {
    std::size_t count = 0;
    for (const auto& step : steps_) {
        count += std::count_if(step.layers.begin(), step.layers.end(), is_noise);
    }
    return count;
}

void Circuit::validate() const {
    if (n_qubits_ < 1) throw InvalidArgument("circuit needs at least one qubit");
    auto check_qubit = [&](int q) {
        if (q < 0 || q >= n_qubits_) {
            throw InvalidArgument(fmt::format("qubit {} out of range for {} qubits", q, n_qubits_));
        }
    };
    auto check_angle = [](double a) {
        if (!std::isfinite(a)) throw InvalidArgument("rotation angle is not finite");
    };
    for (const auto& step : steps_) {
        for (const auto& layer : step.layers) {
            std::visit(Overloaded{
                           [&](const XRotationAll& g) { check_angle(g.angle); },
                           [&](const ZRotationAll& g) { check_angle(g.angle); },
                           [&](const ZZRotation& g) {
                               check_angle(g.angle);
                               for (const auto& e : g.edges) {
                                   check_qubit(e.a);
                                   check_qubit(e.b);
                                   if (e.a == e.b) throw InvalidArgument("edge endpoints coincide");
                               }
                           },
                           [&](const NoiseLayer& n) {
                               if (!(n.p >= 0.0 && n.p <= 1.0)) {
                                   throw InvalidArgument(fmt::format("noise p={} outside [0,1]", n.p));
                               }
                               for (int q : n.qubits) check_qubit(q);
                           },
                       },
                       layer);
        }
    }
}

std::string Circuit::to_text() const {
    std::string out = fmt::format("qubits {}\n", n_qubits_);
    for (const auto& step : steps_) {
        out += "step\n";
        for (const auto& layer : step.layers) {
            std::visit(Overloaded{
                           [&](const XRotationAll& g) { out += fmt::format("xall {}\n", g.angle); },
                           [&](const ZRotationAll& g) { out += fmt::format("zall {}\n", g.angle); },
                           [&](const ZZRotation& g) {
                               out += fmt::format("zz {} ", g.angle);
                               for (std::size_t i = 0; i < g.edges.size(); ++i) {
                                   out += fmt::format("{}{}-{}", i ? "," : "", g.edges[i].a, g.edges[i].b);
                               }
                               out += '\n';
                           },
                           [&](const NoiseLayer& n) {
                               out += fmt::format("depol {} ", n.p);
                               for (std::size_t i = 0; i < n.qubits.size(); ++i) {
                                   out += fmt::format("{}{}", i ? "," : "", n.qubits[i]);
                               }
                               out += '\n';
                           },
                       },
                       layer);
        }
    }
    return out;
}

Circuit Circuit::from_text(std::string_view text) {
    Circuit out;
    bool have_header = false;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        auto fields = split(line, ' ');
        if (fields.empty()) continue;
        const auto op = fields[0];
        if (op == "qubits" && fields.size() == 2) {
            out.n_qubits_ = parse_int(fields[1]);
            have_header = true;
            continue;
        }
        if (!have_header) throw InvalidArgument("circuit text must start with 'qubits <n>'");
        if (op == "step" && fields.size() == 1) {
            out.steps_.emplace_back();
            continue;
        }
        if (out.steps_.empty()) out.steps_.emplace_back();
        auto& layers = out.steps_.back().layers;
        if (op == "xall" && fields.size() == 2) {
            layers.emplace_back(XRotationAll{parse_double(fields[1])});
        } else if (op == "zall" && fields.size() == 2) {
            layers.emplace_back(ZRotationAll{parse_double(fields[1])});
        } else if (op == "zz" && fields.size() == 3) {
            ZZRotation g{{}, parse_double(fields[1])};
            for (auto pair : split(fields[2], ',')) {
                auto ends = split(pair, '-');
                if (ends.size() != 2) throw InvalidArgument("circuit text: bad edge");
                g.edges.push_back({parse_int(ends[0]), parse_int(ends[1])});
            }
            layers.emplace_back(std::move(g));
        } else if (op == "depol" && fields.size() == 3) {
            NoiseLayer n{parse_double(fields[1]), {}};
            for (auto q : split(fields[2], ',')) n.qubits.push_back(parse_int(q));
            layers.emplace_back(std::move(n));
        } else {
            throw InvalidArgument(fmt::format("circuit text: unrecognised line '{}'", line));
        }
    }
    if (!have_header) throw InvalidArgument("circuit text must start with 'qubits <n>'");
    out.validate();
    return out;
}

}  // namespace adiatherm
