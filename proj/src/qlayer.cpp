// Copyright 2026 The QResNet Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "qres/qlayer.hpp"

#include <numbers>
#include <string>

#include "qres/error.hpp"

namespace qres {

namespace {

constexpr double kShift = std::numbers::pi / 2;

void check_inputs(std::span<const double> features, const QLayerConfig &cfg) {
    cfg.validate();
    if (features.size() != cfg.n_qubits) {
        throw ArgumentError("quantum layer expects " +
                            std::to_string(cfg.n_qubits) + " features, got " +
                            std::to_string(features.size()));
    }
}

std::size_t feature_map_gate_count(const QLayerConfig &cfg) {
    const std::size_t n = cfg.n_qubits;
    return cfg.fm_reps * (2 * n + n * (n - 1) / 2);
}

double readout(const Circuit &c) {
    return 0.5 * (1.0 + expect_z_parity(simulate(c)));
}

// (f(a + pi/2) - f(a - pi/2)) / 2 for the angle of gate `index`.
double shift_derivative(Circuit &c, std::size_t index) {
    const double original = c.gates[index].angle;
    c.gates[index].angle = original + kShift;
    const double plus = readout(c);
    c.gates[index].angle = original - kShift;
    const double minus = readout(c);
    c.gates[index].angle = original;
    return 0.5 * (plus - minus);
}

std::vector<double> grad_params_impl(Circuit &c, std::size_t fm_gate_count,
                                     std::size_t n_params) {
    std::vector<double> grad;
    grad.reserve(n_params);
    // RY gates of the ansatz appear in parameter order.
    for (std::size_t g = fm_gate_count; g < c.gates.size(); ++g) {
        if (c.gates[g].kind == GateKind::RY) {
            grad.push_back(shift_derivative(c, g));
        }
    }
    return grad;
}

std::vector<double> grad_features_impl(Circuit &c, std::size_t fm_gate_count,
                                       std::span<const double> x) {
    std::vector<double> grad(x.size(), 0.0);
    for (std::size_t g = 0; g < fm_gate_count; ++g) {
        const Gate gate = c.gates[g];
        if (gate.kind == GateKind::RZ) {
            grad[gate.qubit0] += 2.0 * shift_derivative(c, g);
        } else if (gate.kind == GateKind::ZZ) {
            const std::size_t i = gate.qubit0;
            const std::size_t j = gate.qubit1;
            const double d = shift_derivative(c, g);
            grad[i] += (2.0 * std::numbers::pi - x[j]) * d;
            grad[j] += -x[i] * d;
        }
    }
    return grad;
}

} // namespace

void QLayerConfig::validate() const {
    if (n_qubits < 1 || fm_reps < 1 || ansatz_reps < 1) {
        throw ArgumentError("n_qubits, fm_reps and ansatz_reps must be >= 1");
    }
    if (params.size() != param_count()) {
        throw ArgumentError("quantum layer expects " +
                            std::to_string(param_count()) +
                            " parameters, got " + std::to_string(params.size()));
    }
}

Circuit build_qlayer_circuit(std::span<const double> features,
                             const QLayerConfig &cfg) {
    check_inputs(features, cfg);
    Circuit c = build_zz_feature_map(features, cfg.fm_reps);
    c.append(build_real_amplitudes(cfg.n_qubits, cfg.ansatz_reps, cfg.params));
    return c;
}

double qlayer_forward(std::span<const double> features,
                      const QLayerConfig &cfg) {
    return readout(build_qlayer_circuit(features, cfg));
}

std::vector<double> qlayer_grad_params(std::span<const double> features,
                                       const QLayerConfig &cfg) {
    Circuit c = build_qlayer_circuit(features, cfg);
    return grad_params_impl(c, feature_map_gate_count(cfg), cfg.param_count());
}

std::vector<double> qlayer_grad_features(std::span<const double> features,
                                         const QLayerConfig &cfg) {
    Circuit c = build_qlayer_circuit(features, cfg);
    return grad_features_impl(c, feature_map_gate_count(cfg), features);
}

QLayerResult qlayer_evaluate(std::span<const double> features,
                             const QLayerConfig &cfg) {
    Circuit c = build_qlayer_circuit(features, cfg);
    const std::size_t fm = feature_map_gate_count(cfg);
    QLayerResult r;
    r.probability = readout(c);
    r.grad_params = grad_params_impl(c, fm, cfg.param_count());
    r.grad_features = grad_features_impl(c, fm, features);
    return r;
}

} // namespace qres
