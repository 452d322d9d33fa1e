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
#include "qres/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qres/error.hpp"

namespace qres {

using nlohmann::json;

namespace {

void reject_unknown(const json &obj, const std::set<std::string> &allowed,
                    const std::string &section) {
    if (!obj.is_object()) {
        throw ArgumentError("config section '" + section +
                            "' must be an object");
    }
    for (const auto &[key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ArgumentError("unknown config key '" + key + "' in " +
                                (section.empty() ? "top level"
                                                 : "section '" + section + "'"));
        }
    }
}

template <typename T>
void read(const json &obj, const char *key, T &out, const std::string &section) {
    if (!obj.contains(key)) {
        return;
    }
    try {
        const json &v = obj.at(key);
        if constexpr (std::is_unsigned_v<T>) {
            if (!v.is_number_unsigned()) {
                throw ArgumentError("");
            }
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) {
                throw ArgumentError("");
            }
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) {
                throw ArgumentError("");
            }
        }
        out = v.get<T>();
    } catch (const std::exception &) {
        throw ArgumentError("config key '" + section + "." + key +
                            "' has the wrong type");
    }
}

} // namespace

void TrainConfig::validate() const {
    if (epochs < 1) {
        throw ArgumentError("epochs must be >= 1");
    }
    if (batch_size < 2) {
        throw ArgumentError("batch_size must be >= 2 (batch normalization)");
    }
    if (!(learning_rate > 0.0)) {
        throw ArgumentError("learning_rate must be > 0");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw ArgumentError("beta1 and beta2 must lie in [0, 1)");
    }
    if (!(eps_adam > 0.0)) {
        throw ArgumentError("eps_adam must be > 0");
    }
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw ArgumentError("threshold must lie in [0, 1]");
    }
}

void RunConfig::finalize() {
    net.n_out = qlayer.n_qubits;
    qlayer.params.assign(qlayer.param_count(), 0.0);
    qlayer.validate();
    if (qlayer.n_qubits > kMaxQubits) {
        throw ArgumentError("n_qubits must be <= " + std::to_string(kMaxQubits));
    }
    net.validate();
    train.validate();
}

bool RunConfig::same_model(const RunConfig &other) const {
    return net == other.net && qlayer.n_qubits == other.qlayer.n_qubits &&
           qlayer.fm_reps == other.qlayer.fm_reps &&
           qlayer.ansatz_reps == other.qlayer.ansatz_reps;
}

RunConfig parse_run_config(const std::string &json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw ArgumentError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(root, {"data", "net", "qlayer", "train", "threads"}, "");
    RunConfig cfg;
    read(root, "threads", cfg.threads, "");
    if (root.contains("data")) {
        const json &d = root["data"];
        reject_unknown(d, {"manifest", "out_dir"}, "data");
        read(d, "manifest", cfg.manifest, "data");
        read(d, "out_dir", cfg.out_dir, "data");
    }
    if (root.contains("net")) {
        const json &n = root["net"];
        reject_unknown(n, {"input_side", "channels", "blocks_per_stage", "head"},
                       "net");
        read(n, "input_side", cfg.net.input_side, "net");
        read(n, "blocks_per_stage", cfg.net.blocks_per_stage, "net");
        if (n.contains("channels")) {
            const json &c = n["channels"];
            if (!c.is_array()) {
                throw ArgumentError("config key 'net.channels' must be an array");
            }
            cfg.net.channels.clear();
            for (const json &w : c) {
                if (!w.is_number_unsigned()) {
                    throw ArgumentError("net.channels entries must be positive "
                                        "integers");
                }
                cfg.net.channels.push_back(w.get<std::size_t>());
            }
        }
        std::string head = to_string(cfg.net.head);
        read(n, "head", head, "net");
        cfg.net.head = parse_head(head);
    }
    if (root.contains("qlayer")) {
        const json &q = root["qlayer"];
        reject_unknown(q, {"n_qubits", "fm_reps", "ansatz_reps"}, "qlayer");
        read(q, "n_qubits", cfg.qlayer.n_qubits, "qlayer");
        read(q, "fm_reps", cfg.qlayer.fm_reps, "qlayer");
        read(q, "ansatz_reps", cfg.qlayer.ansatz_reps, "qlayer");
    }
    if (root.contains("train")) {
        const json &t = root["train"];
        reject_unknown(t, {"epochs", "batch_size", "learning_rate", "beta1",
                           "beta2", "eps_adam", "seed", "patience", "threshold"},
                       "train");
        read(t, "epochs", cfg.train.epochs, "train");
        read(t, "batch_size", cfg.train.batch_size, "train");
        read(t, "learning_rate", cfg.train.learning_rate, "train");
        read(t, "beta1", cfg.train.beta1, "train");
        read(t, "beta2", cfg.train.beta2, "train");
        read(t, "eps_adam", cfg.train.eps_adam, "train");
        read(t, "seed", cfg.train.seed, "train");
        read(t, "patience", cfg.train.patience, "train");
        read(t, "threshold", cfg.train.threshold, "train");
    }
    cfg.finalize();
    return cfg;
}

RunConfig load_run_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ArgumentError("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

std::string dump_run_config(const RunConfig &cfg, int indent) {
    json root;
    root["data"] = {{"manifest", cfg.manifest}, {"out_dir", cfg.out_dir}};
    root["net"] = {{"input_side", cfg.net.input_side},
                   {"channels", cfg.net.channels},
                   {"blocks_per_stage", cfg.net.blocks_per_stage},
                   {"head", to_string(cfg.net.head)}};
    root["qlayer"] = {{"n_qubits", cfg.qlayer.n_qubits},
                      {"fm_reps", cfg.qlayer.fm_reps},
                      {"ansatz_reps", cfg.qlayer.ansatz_reps}};
    root["train"] = {{"epochs", cfg.train.epochs},
                     {"batch_size", cfg.train.batch_size},
                     {"learning_rate", cfg.train.learning_rate},
                     {"beta1", cfg.train.beta1},
                     {"beta2", cfg.train.beta2},
                     {"eps_adam", cfg.train.eps_adam},
                     {"seed", cfg.train.seed},
                     {"patience", cfg.train.patience},
                     {"threshold", cfg.train.threshold}};
    root["threads"] = cfg.threads;
    return root.dump(indent);
}

} // namespace qres
