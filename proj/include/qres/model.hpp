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

#include <cstdint>
#include <span>
#include <vector>

#include "qres/cnn3d.hpp"
#include "qres/qlayer.hpp"

namespace qres {

/**
 * @brief The residual front-end plus a probability head.
 *
 * Quantum head: the squashed features drive the quantum layer directly.
 * Classical head: dense(n_out -> 1) followed by a sigmoid. Both heads share
 * the same front-end so the two modes differ only past the features.
 */
class HybridModel {
  public:
    HybridModel(const NetConfig &net, const QLayerConfig &qlayer,
                std::uint64_t seed);

    /// Class-1 probabilities for [N, 1, S, S, S] volumes. When
    /// `record` is set the pass is cached for backward().
    std::vector<double> forward(const Tensor &volumes, Mode mode,
                                bool record = true);
    /// Accumulates gradients given dL/dp per sample.
    void backward(std::span<const double> grad_prob);

    [[nodiscard]] HeadKind head() const noexcept { return head_; }
    [[nodiscard]] QLayerConfig quantum_config() const;

    [[nodiscard]] std::vector<Tensor *> parameters();
    [[nodiscard]] std::vector<Tensor *> state();
    void zero_grad();

    Network net;
    Tensor quantum_params; // quantum head only, [n_qubits * (ansatz_reps + 1)]
    Dense classical;       // classical head only

  private:
    HeadKind head_;
    QLayerConfig qshape_;
    std::vector<QLayerResult> qcache_;
    bool have_cache_ = false;
    std::size_t cached_batch_ = 0;
    std::vector<double> classical_probs_;
};

} // namespace qres
