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
#include "qres/model.hpp"

#include <cmath>
#include <numbers>

#include "qres/error.hpp"
#include "qres/rng.hpp"

namespace qres {

HybridModel::HybridModel(const NetConfig &net_cfg, const QLayerConfig &qlayer,
                         std::uint64_t seed)
    : net(net_cfg, seed), quantum_params({qlayer.param_count()}),
      classical(net_cfg.n_out, 1), head_(net_cfg.head), qshape_(qlayer) {
    if (net_cfg.n_out != qlayer.n_qubits) {
        throw ArgumentError("net n_out (" + std::to_string(net_cfg.n_out) +
                            ") must equal n_qubits (" +
                            std::to_string(qlayer.n_qubits) + ")");
    }
    Rng rng(derive_seed(seed, 1));
    for (double &p : quantum_params.data()) {
        p = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    quantum_params.enable_grad();
    classical.init(rng);
}

QLayerConfig HybridModel::quantum_config() const {
    QLayerConfig cfg = qshape_;
    cfg.params.assign(quantum_params.data().begin(), quantum_params.data().end());
    return cfg;
}

std::vector<double> HybridModel::forward(const Tensor &volumes, Mode mode,
                                         bool record) {
    const Tensor features = net.forward(volumes, mode);
    const std::size_t n = features.dim(0);
    const std::size_t k = features.dim(1);
    std::vector<double> probs(n);
    have_cache_ = false;

    if (head_ == HeadKind::quantum) {
        const QLayerConfig cfg = quantum_config();
        qcache_.assign(record ? n : 0, QLayerResult{});
        // Samples are independent; results land in per-sample slots.
#pragma omp parallel for schedule(static)
        for (long long s = 0; s < static_cast<long long>(n); ++s) {
            const auto i = static_cast<std::size_t>(s);
            const std::span<const double> x = features.data().subspan(i * k, k);
            if (record) {
                qcache_[i] = qlayer_evaluate(x, cfg);
                probs[i] = qcache_[i].probability;
            } else {
                probs[i] = qlayer_forward(x, cfg);
            }
        }
    } else {
        const Tensor z = classical.forward(features);
        for (std::size_t i = 0; i < n; ++i) {
            probs[i] = 1.0 / (1.0 + std::exp(-z[i]));
        }
        classical_probs_ = probs;
    }
    have_cache_ = record;
    cached_batch_ = n;
    return probs;
}

void HybridModel::backward(std::span<const double> grad_prob) {
    if (!have_cache_) {
        throw StateError("HybridModel::backward called without a recorded forward");
    }
    if (grad_prob.size() != cached_batch_) {
        throw ArgumentError("backward got " + std::to_string(grad_prob.size()) +
                            " gradients for a batch of " +
                            std::to_string(cached_batch_));
    }
    const std::size_t n = cached_batch_;
    const std::size_t k = net.config().n_out;
    Tensor grad_features({n, k});
    if (head_ == HeadKind::quantum) {
        // Fixed sample order keeps the reduction deterministic.
        for (std::size_t i = 0; i < n; ++i) {
            const QLayerResult &r = qcache_[i];
            for (std::size_t p = 0; p < r.grad_params.size(); ++p) {
                quantum_params.grad()[p] += grad_prob[i] * r.grad_params[p];
            }
            for (std::size_t j = 0; j < k; ++j) {
                grad_features[i * k + j] = grad_prob[i] * r.grad_features[j];
            }
        }
    } else {
        Tensor dz({n, 1});
        for (std::size_t i = 0; i < n; ++i) {
            const double p = classical_probs_[i];
            dz[i] = grad_prob[i] * p * (1.0 - p);
        }
        grad_features = classical.backward(dz);
    }
    net.backward(grad_features);
    have_cache_ = false;
}

std::vector<Tensor *> HybridModel::parameters() {
    std::vector<Tensor *> out = net.parameters();
    if (head_ == HeadKind::quantum) {
        out.push_back(&quantum_params);
    } else {
        out.insert(out.end(), {&classical.weight, &classical.bias});
    }
    return out;
}

std::vector<Tensor *> HybridModel::state() {
    std::vector<Tensor *> out = net.state();
    if (head_ == HeadKind::quantum) {
        out.push_back(&quantum_params);
    } else {
        out.insert(out.end(), {&classical.weight, &classical.bias});
    }
    return out;
}

void HybridModel::zero_grad() {
    for (Tensor *t : parameters()) {
        t->zero_grad();
    }
}

} // namespace qres
