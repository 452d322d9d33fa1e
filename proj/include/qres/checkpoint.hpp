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
#include <optional>
#include <string>
#include <vector>

#include "qres/config.hpp"
#include "qres/model.hpp"
#include "qres/tensor.hpp"

namespace qres {

/// Optimizer and bookkeeping state appended to training checkpoints.
struct TrainingState {
    std::uint64_t step = 0;
    std::uint32_t epoch = 0; // epochs completed
    double best_val_auc = -1.0;
    double best_val_acc = -1.0;
    std::uint32_t best_epoch = 0;
    std::uint32_t stale_epochs = 0;
    std::vector<Tensor> first_moment;
    std::vector<Tensor> second_moment;
};

/**
 * @brief Decoded checkpoint file.
 *
 * Layout (little-endian):
 *   "QRCK", u32 version (1),
 *   u32 config length, config JSON (UTF-8),
 *   u32 tensor count, per tensor: u32 rank, u32 dims[rank], f32 data,
 *   optionally "ADAM", u64 step, u32 epoch, f64 best_val_auc, f64 best_val_acc,
 *     u32 best_epoch, u32 stale_epochs, u32 count, then `count` first-moment
 *     tensors and `count` second-moment tensors in the same encoding.
 */
struct Checkpoint {
    RunConfig config;
    std::vector<Tensor> tensors;
    std::optional<TrainingState> training;
};

std::string encode_checkpoint(const RunConfig &config,
                              const std::vector<const Tensor *> &tensors,
                              const TrainingState *training);
Checkpoint decode_checkpoint(const std::string &bytes);

void save_checkpoint(const std::filesystem::path &path, const RunConfig &config,
                     HybridModel &model, const TrainingState *training);
Checkpoint load_checkpoint(const std::filesystem::path &path);

/// Copies checkpoint tensors into `model`; throws FormatError on any
/// count or shape mismatch.
void restore_model(const Checkpoint &ckpt, HybridModel &model);

} // namespace qres
