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
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qres/circuits.hpp"

namespace qres {

/// Trainable quantum classification head.
struct QLayerConfig {
    std::size_t n_qubits = 4;
    std::size_t fm_reps = 2;
    std::size_t ansatz_reps = 1;
    std::vector<double> params;

    [[nodiscard]] std::size_t param_count() const noexcept {
        return real_amplitudes_param_count(n_qubits, ansatz_reps);
    }
    /// Throws ArgumentError if the parameter count does not match.
    void validate() const;
};

/// Feature map followed by the ansatz, for the given features.
Circuit build_qlayer_circuit(std::span<const double> features,
                             const QLayerConfig &cfg);

/// p = (1 + <Z...Z>) / 2 after feature map and ansatz.
double qlayer_forward(std::span<const double> features,
                      const QLayerConfig &cfg);

/// dp/dparams via the parameter-shift rule.
std::vector<double> qlayer_grad_params(std::span<const double> features,
                                       const QLayerConfig &cfg);

/// dp/dfeatures: shift-rule derivative of every encoding angle, chained
/// through that angle's dependence on the features.
std::vector<double> qlayer_grad_features(std::span<const double> features,
                                         const QLayerConfig &cfg);

struct QLayerResult {
    double probability = 0.0;
    std::vector<double> grad_params;
    std::vector<double> grad_features;
};

/// Forward value and both gradients, sharing the circuit construction.
QLayerResult qlayer_evaluate(std::span<const double> features,
                             const QLayerConfig &cfg);

} // namespace qres
