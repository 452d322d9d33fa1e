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
#include <optional>
#include <string>
#include <vector>

#include "qres/rng.hpp"
#include "qres/tensor.hpp"

namespace qres {

enum class Mode { train, eval };

enum class HeadKind { quantum, classical };

std::string to_string(HeadKind head);
/// Accepts "quantum" or "classical"; throws ArgumentError otherwise.
HeadKind parse_head(const std::string &name);

inline constexpr double kBatchNormEps = 1e-5;
inline constexpr double kBatchNormMomentum = 0.1;

// ---------------------------------------------------------------------------
// Stateless kernels. Volumes are [N, C, D, H, W]; kernels are cubic with odd
// side k and zero padding k / 2, so every spatial side becomes ceil(side /
// stride).

/// Cross-correlation of `input` [N,Cin,D,H,W] with `weight` [Cout,Cin,k,k,k].
Tensor conv3d(const Tensor &input, const Tensor &weight, const Tensor &bias,
              std::size_t stride);

/// Accumulates into weight.grad() / bias.grad() and returns dL/dinput.
Tensor conv3d_backward(const Tensor &input, Tensor &weight, Tensor &bias,
                       std::size_t stride, const Tensor &grad_output);

struct BatchNormCache {
    Mode mode = Mode::train;
    Tensor normalized;
    std::vector<double> inv_std;
};

/**
 * @brief Per-channel normalization of an [N,C,...] tensor.
 *
 * Train mode normalizes with the biased batch variance and folds the
 * unbiased variance into the running estimate:
 * running = (1 - momentum) * running + momentum * batch.
 * Eval mode normalizes with the running statistics.
 */
Tensor batchnorm3d(const Tensor &input, const Tensor &scale,
                   const Tensor &offset, Tensor &running_mean,
                   Tensor &running_var, Mode mode,
                   double momentum = kBatchNormMomentum,
                   double eps = kBatchNormEps, BatchNormCache *cache = nullptr);

Tensor batchnorm3d_backward(const Tensor &grad_output,
                            const BatchNormCache &cache, Tensor &scale,
                            Tensor &offset);

// ---------------------------------------------------------------------------
// Layers. Each caches what its backward pass needs during forward();
// backward() consumes that cache and throws StateError without it.

class Conv3d {
  public:
    Conv3d(std::size_t in_channels, std::size_t out_channels,
           std::size_t kernel, std::size_t stride);

    /// He-uniform weights, zero bias.
    void init(Rng &rng);
    Tensor forward(const Tensor &input);
    Tensor backward(const Tensor &grad_output);

    Tensor weight;
    Tensor bias;
    [[nodiscard]] std::size_t stride() const noexcept { return stride_; }

  private:
    std::size_t stride_;
    std::optional<Tensor> input_;
};

class BatchNorm3d {
  public:
    explicit BatchNorm3d(std::size_t channels);

    Tensor forward(const Tensor &input, Mode mode);
    Tensor backward(const Tensor &grad_output);

    Tensor scale;
    Tensor offset;
    Tensor running_mean;
    Tensor running_var;

  private:
    std::optional<BatchNormCache> cache_;
};

class Dense {
  public:
    Dense(std::size_t in_features, std::size_t out_features);

    /// Xavier-uniform weights, zero bias.
    void init(Rng &rng);
    /// [N, in] -> [N, out]
    Tensor forward(const Tensor &input);
    Tensor backward(const Tensor &grad_output);

    Tensor weight; // [out, in]
    Tensor bias;   // [out]

  private:
    std::optional<Tensor> input_;
};

/// Two 3x3x3 conv + batch-norm stages with a skip connection; the skip is a
/// strided 1x1x1 conv + batch-norm whenever the shapes differ.
class ResidualBlock {
  public:
    ResidualBlock(std::size_t in_channels, std::size_t out_channels,
                  std::size_t stride);

    void init(Rng &rng);
    Tensor forward(const Tensor &input, Mode mode);
    Tensor backward(const Tensor &grad_output);

    [[nodiscard]] bool has_projection() const noexcept {
        return projection_.has_value();
    }

    /// Trainable tensors followed by running statistics, in declaration order.
    void collect(std::vector<Tensor *> &trainable,
                 std::vector<Tensor *> &all);

    Conv3d conv1;
    BatchNorm3d bn1;
    Conv3d conv2;
    BatchNorm3d bn2;

  private:
    struct Projection {
        Conv3d conv;
        BatchNorm3d bn;
    };
    std::optional<Projection> projection_;
    std::optional<Tensor> relu1_out_;
    std::optional<Tensor> output_;
};

/// One residual block applied to `input` (forward only, caches discarded).
Tensor residual_block(const Tensor &input, ResidualBlock &params, Mode mode);

struct NetConfig {
    std::size_t input_side = 16;
    std::vector<std::size_t> channels{8, 16};
    std::size_t blocks_per_stage = 1;
    std::size_t n_out = 4;
    HeadKind head = HeadKind::quantum;

    void validate() const;
    bool operator==(const NetConfig &) const = default;
};

/**
 * @brief Residual 3D front-end producing squashed features.
 *
 * Stage s holds blocks_per_stage residual blocks of width channels[s]; the
 * first block of every stage after the first downsamples by 2. The stack is
 * followed by a global average pool, a dense layer to n_out and a sigmoid.
 */
class Network {
  public:
    Network(const NetConfig &cfg, std::uint64_t seed);

    /// [N, 1, S, S, S] -> [N, n_out], values in (0, 1).
    Tensor forward(const Tensor &volumes, Mode mode);
    /// Accumulates parameter gradients from dL/dfeatures [N, n_out].
    void backward(const Tensor &grad_features);

    [[nodiscard]] const NetConfig &config() const noexcept { return cfg_; }
    /// Trainable tensors in declaration order.
    [[nodiscard]] std::vector<Tensor *> parameters();
    /// Every persisted tensor (trainable and running statistics), in
    /// declaration order.
    [[nodiscard]] std::vector<Tensor *> state();
    void zero_grad();

    std::vector<ResidualBlock> blocks;
    Dense dense;

  private:
    void collect(std::vector<Tensor *> &trainable,
                 std::vector<Tensor *> &all);

    NetConfig cfg_;
    std::optional<Tensor> features_;
    std::vector<std::size_t> last_shape_;
};

} // namespace qres
