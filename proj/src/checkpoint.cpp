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
#include "qres/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "binary_io.hpp"
#include "qres/error.hpp"

namespace qres {

namespace {

constexpr char kMagic[] = "QRCK";
constexpr char kTrainMagic[] = "ADAM";
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kMaxRank = 8;

void put_tensor(binary::Writer &w, const Tensor &t) {
    w.u32(static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) {
        w.u32(static_cast<std::uint32_t>(d));
    }
    for (double v : t.data()) {
        w.f32(static_cast<float>(v));
    }
}

Tensor get_tensor(binary::Reader &r) {
    const std::size_t at = r.offset();
    const std::uint32_t rank = r.u32("tensor rank");
    if (rank == 0 || rank > kMaxRank) {
        throw FormatError("tensor rank " + std::to_string(rank) +
                              " out of range", at);
    }
    std::vector<std::size_t> shape(rank);
    std::size_t count = 1;
    for (std::size_t &d : shape) {
        const std::size_t dat = r.offset();
        d = r.u32("tensor dims");
        if (d == 0) {
            throw FormatError("tensor dimension must be positive", dat);
        }
        count *= d;
    }
    r.need(count * sizeof(float), "tensor data");
    std::vector<double> data(count);
    for (double &v : data) {
        v = r.f32("tensor data");
    }
    return Tensor(std::move(shape), std::move(data));
}

std::string read_all(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open checkpoint '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::string encode_checkpoint(const RunConfig &config,
                              const std::vector<const Tensor *> &tensors,
                              const TrainingState *training) {
    binary::Writer w;
    w.bytes(std::string_view(kMagic, 4));
    w.u32(kVersion);
    w.string(dump_run_config(config, -1));
    w.u32(static_cast<std::uint32_t>(tensors.size()));
    for (const Tensor *t : tensors) {
        put_tensor(w, *t);
    }
    if (training) {
        if (training->first_moment.size() != training->second_moment.size()) {
            throw ArgumentError("moment buffers disagree in count");
        }
        w.bytes(std::string_view(kTrainMagic, 4));
        w.u64(training->step);
        w.u32(training->epoch);
        w.f64(training->best_val_auc);
        w.f64(training->best_val_acc);
        w.u32(training->best_epoch);
        w.u32(training->stale_epochs);
        w.u32(static_cast<std::uint32_t>(training->first_moment.size()));
        for (const Tensor &t : training->first_moment) {
            put_tensor(w, t);
        }
        for (const Tensor &t : training->second_moment) {
            put_tensor(w, t);
        }
    }
    return w.buffer();
}

Checkpoint decode_checkpoint(const std::string &bytes) {
    binary::Reader r(bytes);
    if (r.bytes(4, "magic") != std::string_view(kMagic, 4)) {
        throw FormatError("bad checkpoint magic, expected 'QRCK'", 0);
    }
    const std::size_t version_at = r.offset();
    if (const auto v = r.u32("version"); v != kVersion) {
        throw FormatError("unsupported checkpoint version " + std::to_string(v),
                          version_at);
    }
    const std::size_t config_at = r.offset();
    Checkpoint ckpt;
    try {
        ckpt.config = parse_run_config(r.string("config block"));
    } catch (const ArgumentError &e) {
        throw FormatError(std::string("invalid checkpoint config: ") + e.what(),
                          config_at);
    }
    const std::uint32_t count = r.u32("tensor count");
    for (std::uint32_t i = 0; i < count; ++i) {
        ckpt.tensors.push_back(get_tensor(r));
    }
    if (r.remaining() == 0) {
        return ckpt;
    }
    const std::size_t train_at = r.offset();
    if (r.bytes(4, "training magic") != std::string_view(kTrainMagic, 4)) {
        throw FormatError("unexpected trailing data in checkpoint", train_at);
    }
    TrainingState ts;
    ts.step = r.u64("step");
    ts.epoch = r.u32("epoch");
    ts.best_val_auc = r.f64("best_val_auc");
    ts.best_val_acc = r.f64("best_val_acc");
    ts.best_epoch = r.u32("best_epoch");
    ts.stale_epochs = r.u32("stale_epochs");
    const std::uint32_t moments = r.u32("moment count");
    for (std::uint32_t i = 0; i < moments; ++i) {
        ts.first_moment.push_back(get_tensor(r));
    }
    for (std::uint32_t i = 0; i < moments; ++i) {
        ts.second_moment.push_back(get_tensor(r));
    }
    if (r.remaining() != 0) {
        throw FormatError("unexpected trailing data in checkpoint", r.offset());
    }
    ckpt.training = std::move(ts);
    return ckpt;
}

void save_checkpoint(const std::filesystem::path &path, const RunConfig &config,
                     HybridModel &model, const TrainingState *training) {
    std::vector<const Tensor *> tensors;
    for (Tensor *t : model.state()) {
        tensors.push_back(t);
    }
    const std::string bytes = encode_checkpoint(config, tensors, training);
    // Written to a sibling file, then renamed into place.
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write checkpoint '" + tmp.string() + "'");
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw Error("write to '" + tmp.string() + "' failed");
        }
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path &path) {
    return decode_checkpoint(read_all(path));
}

void restore_model(const Checkpoint &ckpt, HybridModel &model) {
    std::vector<Tensor *> dst = model.state();
    if (dst.size() != ckpt.tensors.size()) {
        throw FormatError("checkpoint holds " +
                          std::to_string(ckpt.tensors.size()) +
                          " tensors, model expects " + std::to_string(dst.size()));
    }
    for (std::size_t i = 0; i < dst.size(); ++i) {
        const Tensor &src = ckpt.tensors[i];
        if (src.shape() != dst[i]->shape()) {
            throw FormatError("checkpoint tensor " + std::to_string(i) +
                              " has shape " + shape_string(src.shape()) +
                              ", model expects " +
                              shape_string(dst[i]->shape()));
        }
        std::copy(src.data().begin(), src.data().end(), dst[i]->data().begin());
    }
}

} // namespace qres
