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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qres/checkpoint.hpp"
#include "qres/config.hpp"
#include "qres/data.hpp"
#include "qres/metrics.hpp"
#include "qres/model.hpp"

namespace qres {

inline constexpr double kProbClip = 1e-7;

/// Binary cross-entropy on p clipped to [1e-7, 1 - 1e-7].
double bce_loss(double p, int y);
/// dL/dp evaluated at the clipped probability.
double bce_grad(double p, int y);

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::uint64_t step = 0;
    std::vector<Tensor> m;
    std::vector<Tensor> v;

    /// Zeroed moments shaped like `params`.
    static AdamState zeros(std::span<Tensor *const> params);
};

/**
 * Bias-corrected Adam update of every tensor in `params` using its gradient
 * buffer. Increments state.step. Throws StateError if a parameter has no
 * gradient buffer or the moments do not match the parameters.
 */
void adam_step(AdamState &state, std::span<Tensor *const> params,
               const AdamConfig &cfg);

/// Preprocessed volumes of one split, ready for batching.
struct SplitData {
    std::size_t side = 0;
    std::vector<std::vector<double>> volumes;
    std::vector<int> labels;
    std::vector<std::string> subjects;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    /// [indices.size(), 1, S, S, S]
    [[nodiscard]] Tensor batch(std::span<const std::size_t> indices) const;
};

/// Reads and preprocesses (resize + min-max) every volume of `split`.
SplitData load_split(const Manifest &manifest, Split split, std::size_t side);

/// Class-1 probabilities in eval mode, `batch_size` samples at a time.
std::vector<double> predict(HybridModel &model, const SplitData &data,
                            std::size_t batch_size = 16);

struct EpochRecord {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double val_auc = 0.0;
    double val_acc = 0.0;

    bool operator==(const EpochRecord &) const = default;
};

/// "epoch  train_loss  val_auc  val_acc" with round-trip precision.
std::string format_epoch(const EpochRecord &rec);

struct TrainResult {
    std::vector<EpochRecord> epochs;
    double best_val_auc = -1.0;
    double best_val_acc = -1.0;
    std::size_t best_epoch = 0;
    std::filesystem::path best_checkpoint;
    std::filesystem::path last_checkpoint;
};

struct TrainOptions {
    /// Continue from a checkpoint written by a previous run.
    std::optional<std::filesystem::path> resume_from;
    /// Stop after this many epochs in this call (0 = no limit).
    std::size_t max_new_epochs = 0;
    /// Receives one line per epoch in addition to out_dir/train.log.
    std::ostream *log = nullptr;
};

/**
 * @brief Minibatch BCE training with Adam and validation-AUC selection.
 *
 * Writes best.qrck (highest validation AUC so far, ties broken by validation
 * accuracy), last.qrck (after every
 * epoch) and train.log into cfg.out_dir. Persistent state (weights, running
 * statistics, Adam moments) is rounded to f32 after every step so
 * checkpoints store it losslessly and resuming is bit-exact.
 */
TrainResult train(const RunConfig &cfg, const TrainOptions &opts = {});

/// Architecture and weights from a checkpoint. If `expected` is given its
/// architecture must match, else FormatError.
HybridModel load_model(const Checkpoint &ckpt,
                       const RunConfig *expected = nullptr);

/// Eval-mode report for one split. `manifest_override` replaces the manifest
/// path recorded in the checkpoint.
EvalReport evaluate(const std::filesystem::path &checkpoint, Split split,
                    const std::string &manifest_override = {},
                    std::optional<double> threshold = std::nullopt,
                    const RunConfig *expected = nullptr);

EvalReport evaluate(HybridModel &model, const SplitData &data,
                    double threshold);

} // namespace qres
