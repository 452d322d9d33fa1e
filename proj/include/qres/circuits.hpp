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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qres/statevector.hpp"

namespace qres {

/// Ordered gate list; gates[0] is applied first.
struct Circuit {
    std::size_t n_qubits = 0;
    std::vector<Gate> gates;

    /// Appends `other`'s gates; qubit counts must match.
    void append(const Circuit &other);

    bool operator==(const Circuit &) const = default;
};

/// Runs `circuit` on |0...0>.
StateVector simulate(const Circuit &circuit);

/// Runs `circuit` on an existing state (in place).
void run(const Circuit &circuit, StateVector &state);

/**
 * @brief ZZ feature map over `x`, repeated `reps` times.
 *
 * Each repetition is: H on every qubit, RZ(2 x_i) on qubit i, then
 * ZZ(x_i (2 pi - x_j)) on every pair i < j in lexicographic order.
 */
Circuit build_zz_feature_map(std::span<const double> x, std::size_t reps);

/// Pair angle used by the feature map for features (x_i, x_j), i < j.
double zz_pair_angle(double xi, double xj) noexcept;

/// Number of ansatz parameters: n_qubits * (reps + 1).
std::size_t real_amplitudes_param_count(std::size_t n_qubits,
                                        std::size_t reps) noexcept;

/**
 * @brief RY layer, then `reps` blocks of linear CX(i, i+1) entanglement
 * followed by another RY layer.
 *
 * phi[r * n + i] drives qubit i in rotation layer r.
 */
Circuit build_real_amplitudes(std::size_t n_qubits, std::size_t reps,
                              std::span<const double> phi);

// Text form: a header line "QUBITS n", then one gate per line as
// "KIND angle targets", e.g. "RY 0.5 2", "CX - 0 1". Angles carry 17
// significant digits so that parse(format(c)) == c.
std::string format_circuit(const Circuit &circuit);
std::string format_gate(const Gate &gate);
Circuit parse_circuit(std::istream &in);
Circuit parse_circuit(const std::string &text);

} // namespace qres
