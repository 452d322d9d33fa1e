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
#include "qres/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

#include "qres/error.hpp"
#include "qres/parallel.hpp"
#include "qres/rng.hpp"

namespace qres {

double bce_loss(double p, int y) {
    const double q = std::clamp(p, kProbClip, 1.0 - kProbClip);
    return y == 1 ? -std::log(q) : -std::log(1.0 - q);
}

double bce_grad(double p, int y) {
    const double q = std::clamp(p, kProbClip, 1.0 - kProbClip);
    return (q - static_cast<double>(y)) / (q * (1.0 - q));
}

AdamState AdamState::zeros(std::span<Tensor *const> params) {
    AdamState s;
    for (const Tensor *p : params) {
        s.m.emplace_back(p->shape());
        s.v.emplace_back(p->shape());
    }
    return s;
}

void adam_step(AdamState &state, std::span<Tensor *const> params,
               const AdamConfig &cfg) {
    if (state.m.size() != params.size() || state.v.size() != params.size()) {
        throw StateError("Adam moments cover " + std::to_string(state.m.size()) +
                         " tensors but " + std::to_string(params.size()) +
                         " parameters were given");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!params[i]->has_grad()) {
            throw StateError("parameter " + std::to_string(i) +
                             " has no gradient buffer");
        }
        if (state.m[i].shape() != params[i]->shape() ||
            state.v[i].shape() != params[i]->shape()) {
            throw StateError("Adam moment " + std::to_string(i) +
                             " is shaped differently from its parameter");
        }
    }
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double correction1 = 1.0 - std::pow(cfg.beta1, t);
    const double correction2 = 1.0 - std::pow(cfg.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        std::span<double> w = params[i]->data();
        std::span<const double> g = std::as_const(*params[i]).grad();
        std::span<double> m = state.m[i].data();
        std::span<double> v = state.v[i].data();
        for (std::size_t j = 0; j < w.size(); ++j) {
            m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * g[j];
            v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * g[j] * g[j];
            const double m_hat = m[j] / correction1;
            const double v_hat = v[j] / correction2;
            w[j] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.eps);
        }
    }
}

// ---------------------------------------------------------------------------

Tensor SplitData::batch(std::span<const std::size_t> indices) const {
    const std::size_t vol = side * side * side;
    Tensor out({indices.size(), 1, side, side, side});
    for (std::size_t b = 0; b < indices.size(); ++b) {
        const std::vector<double> &src = volumes.at(indices[b]);
        std::copy(src.begin(), src.end(),
                  out.data().begin() + static_cast<std::ptrdiff_t>(b * vol));
    }
    return out;
}

SplitData load_split(const Manifest &manifest, Split split, std::size_t side) {
    SplitData data;
    data.side = side;
    for (const ManifestEntry &e : manifest.in_split(split)) {
        const Volume v = preprocess(read_volume(manifest.resolve(e)), side);
        data.volumes.emplace_back(v.voxels.begin(), v.voxels.end());
        data.labels.push_back(e.label);
        data.subjects.push_back(e.subject_id);
    }
    return data;
}

std::vector<double> predict(HybridModel &model, const SplitData &data,
                            std::size_t batch_size) {
    std::vector<double> probs;
    probs.reserve(data.size());
    std::vector<std::size_t> idx;
    for (std::size_t start = 0; start < data.size(); start += batch_size) {
        idx.resize(std::min(batch_size, data.size() - start));
        std::iota(idx.begin(), idx.end(), start);
        const std::vector<double> p =
            model.forward(data.batch(idx), Mode::eval, false);
        probs.insert(probs.end(), p.begin(), p.end());
    }
    return probs;
}

EvalReport evaluate(HybridModel &model, const SplitData &data,
                    double threshold) {
    if (data.size() == 0) {
        throw ArgumentError("cannot evaluate an empty split");
    }
    const std::vector<double> probs = predict(model, data);
    return make_report(probs, data.labels, threshold);
}

std::string format_epoch(const EpochRecord &rec) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu  %.17g  %.17g  %.17g", rec.epoch,
                  rec.train_loss, rec.val_auc, rec.val_acc);
    return buf;
}

namespace {

void round_to_f32(std::span<Tensor *const> tensors) {
    for (Tensor *t : tensors) {
        for (double &v : t->data()) {
            v = static_cast<double>(static_cast<float>(v));
        }
    }
}

void round_to_f32(std::vector<Tensor> &tensors) {
    for (Tensor &t : tensors) {
        for (double &v : t.data()) {
            v = static_cast<double>(static_cast<float>(v));
        }
    }
}

std::vector<std::vector<std::size_t>> make_batches(
    const std::vector<std::size_t> &order, std::size_t batch_size) {
    std::vector<std::vector<std::size_t>> batches;
    for (std::size_t i = 0; i < order.size(); i += batch_size) {
        const auto first = order.begin() + static_cast<std::ptrdiff_t>(i);
        const auto last =
            order.begin() +
            static_cast<std::ptrdiff_t>(std::min(order.size(), i + batch_size));
        batches.emplace_back(first, last);
    }
    // Batch statistics need two samples; a trailing singleton joins the
    // previous batch.
    if (batches.size() > 1 && batches.back().size() == 1) {
        batches[batches.size() - 2].push_back(batches.back().front());
        batches.pop_back();
    }
    return batches;
}

TrainingState snapshot(const AdamState &adam, std::uint32_t epoch,
                       double best_auc, double best_acc,
                       std::uint32_t best_epoch, std::uint32_t stale) {
    TrainingState ts;
    ts.step = adam.step;
    ts.epoch = epoch;
    ts.best_val_auc = best_auc;
    ts.best_val_acc = best_acc;
    ts.best_epoch = best_epoch;
    ts.stale_epochs = stale;
    ts.first_moment = adam.m;
    ts.second_moment = adam.v;
    return ts;
}

} // namespace

HybridModel load_model(const Checkpoint &ckpt, const RunConfig *expected) {
    if (expected && !expected->same_model(ckpt.config)) {
        throw FormatError("checkpoint architecture does not match the "
                          "requested configuration");
    }
    HybridModel model(ckpt.config.net, ckpt.config.qlayer,
                      ckpt.config.train.seed);
    restore_model(ckpt, model);
    return model;
}

TrainResult train(const RunConfig &cfg_in, const TrainOptions &opts) {
    RunConfig cfg = cfg_in;
    cfg.finalize();
    if (cfg.threads > 0) {
        set_thread_count(cfg.threads);
    }
    if (cfg.manifest.empty()) {
        throw ArgumentError("no manifest given");
    }
    const Manifest manifest = read_manifest(cfg.manifest);
    for (Split s : {Split::train, Split::val, Split::test}) {
        if (manifest.in_split(s).empty()) {
            throw ArgumentError("manifest split '" + to_string(s) + "' is empty");
        }
    }
    const SplitData train_data =
        load_split(manifest, Split::train, cfg.net.input_side);
    const SplitData val_data = load_split(manifest, Split::val, cfg.net.input_side);
    if (train_data.size() < 2) {
        throw ArgumentError("training split needs at least 2 volumes");
    }

    HybridModel model(cfg.net, cfg.qlayer, cfg.train.seed);
    std::vector<Tensor *> params = model.parameters();
    AdamState adam = AdamState::zeros(params);
    std::uint32_t epoch = 0;
    double best_auc = -1.0;
    double best_acc = -1.0;
    std::uint32_t best_epoch = 0;
    std::uint32_t stale = 0;

    if (opts.resume_from) {
        const Checkpoint ckpt = load_checkpoint(*opts.resume_from);
        if (!ckpt.training) {
            throw FormatError("checkpoint '" + opts.resume_from->string() +
                              "' carries no training state");
        }
        if (!cfg.same_model(ckpt.config)) {
            throw FormatError("checkpoint architecture does not match the "
                              "requested configuration");
        }
        restore_model(ckpt, model);
        const TrainingState &ts = *ckpt.training;
        if (ts.first_moment.size() != params.size()) {
            throw FormatError("checkpoint moment count does not match the model");
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (ts.first_moment[i].shape() != params[i]->shape() ||
                ts.second_moment[i].shape() != params[i]->shape()) {
                throw FormatError("checkpoint moment " + std::to_string(i) +
                                  " does not match its parameter");
            }
        }
        adam.step = ts.step;
        adam.m = ts.first_moment;
        adam.v = ts.second_moment;
        epoch = ts.epoch;
        best_auc = ts.best_val_auc;
        best_acc = ts.best_val_acc;
        best_epoch = ts.best_epoch;
        stale = ts.stale_epochs;
    } else {
        round_to_f32(model.state());
    }

    std::filesystem::create_directories(cfg.out_dir);
    TrainResult result;
    result.best_checkpoint = std::filesystem::path(cfg.out_dir) / "best.qrck";
    result.last_checkpoint = std::filesystem::path(cfg.out_dir) / "last.qrck";
    std::ofstream log_file(std::filesystem::path(cfg.out_dir) / "train.log",
                           opts.resume_from ? std::ios::app : std::ios::trunc);
    if (!opts.resume_from) {
        log_file << "# epoch  train_loss  val_auc  val_acc\n";
    }

    const AdamConfig adam_cfg{cfg.train.learning_rate, cfg.train.beta1,
                              cfg.train.beta2, cfg.train.eps_adam};
    std::size_t new_epochs = 0;
    while (epoch < cfg.train.epochs) {
        if (opts.max_new_epochs > 0 && new_epochs >= opts.max_new_epochs) {
            break;
        }
        if (cfg.train.patience > 0 && stale >= cfg.train.patience) {
            break;
        }
        ++epoch;
        ++new_epochs;

        std::vector<std::size_t> order(train_data.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng shuffle_rng(derive_seed(cfg.train.seed, 1000 + epoch));
        shuffle_rng.shuffle(std::span<std::size_t>(order));

        double loss_sum = 0.0;
        for (const std::vector<std::size_t> &batch :
             make_batches(order, cfg.train.batch_size)) {
            model.zero_grad();
            const std::vector<double> probs =
                model.forward(train_data.batch(batch), Mode::train, true);
            std::vector<double> grad(batch.size());
            const double inv_n = 1.0 / static_cast<double>(batch.size());
            for (std::size_t i = 0; i < batch.size(); ++i) {
                const int y = train_data.labels[batch[i]];
                loss_sum += bce_loss(probs[i], y);
                grad[i] = bce_grad(probs[i], y) * inv_n;
            }
            model.backward(grad);
            adam_step(adam, params, adam_cfg);
            round_to_f32(model.state());
            round_to_f32(adam.m);
            round_to_f32(adam.v);
        }

        const EvalReport val = evaluate(model, val_data, cfg.train.threshold);
        EpochRecord rec{epoch,
                        loss_sum / static_cast<double>(train_data.size()),
                        val.auc_undefined ? 0.0 : val.auc, val.acc};
        if (!std::isfinite(rec.train_loss)) {
            throw Error("training loss became non-finite at epoch " +
                        std::to_string(epoch));
        }
        result.epochs.push_back(rec);
        const std::string line = format_epoch(rec);
        log_file << line << '\n' << std::flush;
        if (opts.log) {
            *opts.log << line << '\n' << std::flush;
        }

        // Equal AUC falls back to accuracy at the configured threshold.
        if (rec.val_auc > best_auc ||
            (rec.val_auc == best_auc && rec.val_acc > best_acc)) {
            best_auc = rec.val_auc;
            best_acc = rec.val_acc;
            best_epoch = epoch;
            stale = 0;
            const TrainingState ts = snapshot(adam, epoch, best_auc, best_acc, best_epoch, stale);
            save_checkpoint(result.best_checkpoint, cfg, model, &ts);
        } else {
            ++stale;
        }
        const TrainingState ts = snapshot(adam, epoch, best_auc, best_acc, best_epoch, stale);
        save_checkpoint(result.last_checkpoint, cfg, model, &ts);
    }
    result.best_val_auc = best_auc;
    result.best_val_acc = best_acc;
    result.best_epoch = best_epoch;
    return result;
}

EvalReport evaluate(const std::filesystem::path &checkpoint, Split split,
                    const std::string &manifest_override,
                    std::optional<double> threshold,
                    const RunConfig *expected) {
    if (!std::filesystem::exists(checkpoint)) {
        throw ArgumentError("checkpoint '" + checkpoint.string() +
                            "' does not exist");
    }
    const Checkpoint ckpt = load_checkpoint(checkpoint);
    HybridModel model = load_model(ckpt, expected);
    const std::string manifest_path =
        manifest_override.empty() ? ckpt.config.manifest : manifest_override;
    const Manifest manifest = read_manifest(manifest_path);
    const SplitData data = load_split(manifest, split, ckpt.config.net.input_side);
    if (data.size() == 0) {
        throw ArgumentError("split '" + to_string(split) + "' is empty");
    }
    return evaluate(model, data, threshold.value_or(ckpt.config.train.threshold));
}

} // namespace qres
