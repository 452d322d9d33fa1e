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
#include <cstdint>
#include <string>

#include "qres/cnn3d.hpp"
#include "qres/qlayer.hpp"

namespace qres {

struct TrainConfig {
    std::size_t epochs = 20;
    std::size_t batch_size = 8;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps_adam = 1e-8;
    std::uint64_t seed = 42;
    std::size_t patience = 0; // 0 disables early stopping
    double threshold = 0.5;   // decision threshold for ACC/SEN/SPE

    void validate() const;
    bool operator==(const TrainConfig &) const = default;
};

/**
 * @brief Everything needed to reproduce a run.
 *
 * JSON layout (all keys optional, unknown keys rejected):
 * @code
 * { "data":   {"manifest": "...", "out_dir": "..."},
 *   "net":    {"input_side": 16, "channels": [8, 16],
 *              "blocks_per_stage": 1, "head": "quantum"},
 *   "qlayer": {"n_qubits": 4, "fm_reps": 2, "ansatz_reps": 1},
 *   "train":  {"epochs": 20, "batch_size": 8, "learning_rate": 0.001,
 *              "beta1": 0.9, "beta2": 0.999, "eps_adam": 1e-8,
 *              "seed": 42, "patience": 0, "threshold": 0.5},
 *   "threads": 0 }
 * @endcode
 * net.n_out always equals qlayer.n_qubits; qlayer.params is owned by the
 * model and never read from config.
 */
struct RunConfig {
    std::string manifest;
    std::string out_dir = "run";
    NetConfig net;
    QLayerConfig qlayer;
    TrainConfig train;
    std::size_t threads = 0;

    /// Syncs derived fields and throws ArgumentError on invalid values.
    void finalize();
    /// Same architecture (net and quantum layer shape).
    [[nodiscard]] bool same_model(const RunConfig &other) const;
};

/// Strict parse; throws ArgumentError naming the offending key.
RunConfig parse_run_config(const std::string &json_text);
RunConfig load_run_config(const std::string &path);
/// Pretty JSON of every effective value; parse_run_config inverts it.
std::string dump_run_config(const RunConfig &cfg, int indent = 2);

} // namespace qres
