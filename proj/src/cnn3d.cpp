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
#include "qres/cnn3d.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qres/error.hpp"

namespace qres {

std::string to_string(HeadKind head) {
    return head == HeadKind::quantum ? "quantum" : "classical";
}

HeadKind parse_head(const std::string &name) {
    if (name == "quantum") {
        return HeadKind::quantum;
    }
    if (name == "classical") {
        return HeadKind::classical;
    }
    throw ArgumentError("head must be 'quantum' or 'classical', got '" + name +
                        "'");
}

namespace {

struct ConvGeometry {
    std::size_t n, cin, cout, k, pad, stride;
    std::array<std::size_t, 3> in;  // D, H, W
    std::array<std::size_t, 3> out; // D', H', W'

    [[nodiscard]] std::size_t in_volume() const {
        return in[0] * in[1] * in[2];
    }
    [[nodiscard]] std::size_t out_volume() const {
        return out[0] * out[1] * out[2];
    }
};

ConvGeometry conv_geometry(const Tensor &input, const Tensor &weight,
                           const Tensor &bias, std::size_t stride) {
    if (input.rank() != 5 || weight.rank() != 5) {
        throw ArgumentError("conv3d expects rank-5 input and weight, got " +
                            shape_string(input.shape()) + " and " +
                            shape_string(weight.shape()));
    }
    const std::size_t k = weight.dim(2);
    if (weight.dim(3) != k || weight.dim(4) != k || k % 2 == 0) {
        throw ArgumentError("conv3d kernel must be an odd cube, got " +
                            shape_string(weight.shape()));
    }
    if (weight.dim(1) != input.dim(1)) {
        throw ArgumentError("conv3d channel mismatch: input " +
                            shape_string(input.shape()) + " vs weight " +
                            shape_string(weight.shape()));
    }
    const std::array<std::size_t, 1> bias_shape{weight.dim(0)};
    bias.require_shape(bias_shape, "conv3d bias");
    if (stride != 1 && stride != 2) {
        throw ArgumentError("conv3d stride must be 1 or 2, got " +
                            std::to_string(stride));
    }
    ConvGeometry g{};
    g.n = input.dim(0);
    g.cin = input.dim(1);
    g.cout = weight.dim(0);
    g.k = k;
    g.pad = k / 2;
    g.stride = stride;
    for (std::size_t a = 0; a < 3; ++a) {
        g.in[a] = input.dim(2 + a);
        g.out[a] = (g.in[a] + 2 * g.pad - k) / stride + 1;
    }
    return g;
}

// Output positions o along one axis for which o*stride + offset - pad lands
// inside [0, in_len).
struct Range {
    std::size_t lo, hi;
};

Range valid_range(std::size_t offset, std::size_t pad, std::size_t stride,
                  std::size_t in_len, std::size_t out_len) {
    std::size_t lo = 0;
    if (offset < pad) {
        lo = (pad - offset + stride - 1) / stride;
    }
    // o*stride + offset - pad <= in_len - 1
    if (in_len - 1 + pad < offset) {
        return {0, 0};
    }
    const std::size_t top = in_len - 1 + pad - offset;
    const std::size_t hi = std::min(out_len, top / stride + 1);
    return {lo, std::max(lo, hi)};
}

} // namespace

Tensor conv3d(const Tensor &input, const Tensor &weight, const Tensor &bias,
              std::size_t stride) {
    const ConvGeometry g = conv_geometry(input, weight, bias, stride);
    Tensor output({g.n, g.cout, g.out[0], g.out[1], g.out[2]});
    const double *x = input.data().data();
    const double *w = weight.data().data();
    double *y = output.data().data();
    const std::size_t k3 = g.k * g.k * g.k;
    const long long planes = static_cast<long long>(g.n * g.cout);

#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < planes; ++idx) {
        const std::size_t n = static_cast<std::size_t>(idx) / g.cout;
        const std::size_t co = static_cast<std::size_t>(idx) % g.cout;
        double *out = y + static_cast<std::size_t>(idx) * g.out_volume();
        std::fill(out, out + g.out_volume(), bias[co]);
        for (std::size_t ci = 0; ci < g.cin; ++ci) {
            const double *in = x + (n * g.cin + ci) * g.in_volume();
            const double *wk = w + (co * g.cin + ci) * k3;
            for (std::size_t kz = 0; kz < g.k; ++kz) {
                const Range rz = valid_range(kz, g.pad, g.stride, g.in[0], g.out[0]);
                for (std::size_t ky = 0; ky < g.k; ++ky) {
                    const Range ry = valid_range(ky, g.pad, g.stride, g.in[1], g.out[1]);
                    for (std::size_t kx = 0; kx < g.k; ++kx) {
                        const Range rx = valid_range(kx, g.pad, g.stride, g.in[2], g.out[2]);
                        const double wv = wk[(kz * g.k + ky) * g.k + kx];
                        for (std::size_t oz = rz.lo; oz < rz.hi; ++oz) {
                            const std::size_t iz = oz * g.stride + kz - g.pad;
                            for (std::size_t oy = ry.lo; oy < ry.hi; ++oy) {
                                const std::size_t iy = oy * g.stride + ky - g.pad;
                                double *orow = out + (oz * g.out[1] + oy) * g.out[2];
                                const double *irow = in + (iz * g.in[1] + iy) * g.in[2];
                                for (std::size_t ox = rx.lo; ox < rx.hi; ++ox) {
                                    orow[ox] += wv * irow[ox * g.stride + kx - g.pad];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    return output;
}

Tensor conv3d_backward(const Tensor &input, Tensor &weight, Tensor &bias,
                       std::size_t stride, const Tensor &grad_output) {
    const ConvGeometry g = conv_geometry(input, weight, bias, stride);
    const std::array<std::size_t, 5> out_shape{g.n, g.cout, g.out[0], g.out[1],
                                               g.out[2]};
    grad_output.require_shape(out_shape, "conv3d grad_output");
    weight.enable_grad();
    bias.enable_grad();

    const double *x = input.data().data();
    const double *w = weight.data().data();
    const double *dy = grad_output.data().data();
    double *dw = weight.grad().data();
    double *db = bias.grad().data();
    const std::size_t k3 = g.k * g.k * g.k;
    const std::size_t ovol = g.out_volume();
    const std::size_t ivol = g.in_volume();

    // Weight and bias gradients: one output channel per iteration.
#pragma omp parallel for schedule(static)
    for (long long co_l = 0; co_l < static_cast<long long>(g.cout); ++co_l) {
        const auto co = static_cast<std::size_t>(co_l);
        double bsum = 0.0;
        for (std::size_t n = 0; n < g.n; ++n) {
            const double *dyp = dy + (n * g.cout + co) * ovol;
            for (std::size_t i = 0; i < ovol; ++i) {
                bsum += dyp[i];
            }
        }
        db[co] += bsum;
        for (std::size_t ci = 0; ci < g.cin; ++ci) {
            for (std::size_t kz = 0; kz < g.k; ++kz) {
                const Range rz = valid_range(kz, g.pad, g.stride, g.in[0], g.out[0]);
                for (std::size_t ky = 0; ky < g.k; ++ky) {
                    const Range ry = valid_range(ky, g.pad, g.stride, g.in[1], g.out[1]);
                    for (std::size_t kx = 0; kx < g.k; ++kx) {
                        const Range rx = valid_range(kx, g.pad, g.stride, g.in[2], g.out[2]);
                        double sum = 0.0;
                        for (std::size_t n = 0; n < g.n; ++n) {
                            const double *dyp = dy + (n * g.cout + co) * ovol;
                            const double *in = x + (n * g.cin + ci) * ivol;
                            for (std::size_t oz = rz.lo; oz < rz.hi; ++oz) {
                                const std::size_t iz = oz * g.stride + kz - g.pad;
                                for (std::size_t oy = ry.lo; oy < ry.hi; ++oy) {
                                    const std::size_t iy = oy * g.stride + ky - g.pad;
                                    const double *grow = dyp + (oz * g.out[1] + oy) * g.out[2];
                                    const double *irow = in + (iz * g.in[1] + iy) * g.in[2];
                                    for (std::size_t ox = rx.lo; ox < rx.hi; ++ox) {
                                        sum += grow[ox] * irow[ox * g.stride + kx - g.pad];
                                    }
                                }
                            }
                        }
                        dw[((co * g.cin + ci) * g.k + kz) * g.k * g.k + ky * g.k + kx] += sum;
                    }
                }
            }
        }
    }

    // Input gradient: each (sample, input channel) plane is owned by one
    // iteration and scattered into in a fixed order.
    Tensor grad_input(input.shape());
    double *dx = grad_input.data().data();
    const long long planes = static_cast<long long>(g.n * g.cin);
#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < planes; ++idx) {
        const std::size_t n = static_cast<std::size_t>(idx) / g.cin;
        const std::size_t ci = static_cast<std::size_t>(idx) % g.cin;
        double *dxp = dx + static_cast<std::size_t>(idx) * ivol;
        for (std::size_t co = 0; co < g.cout; ++co) {
            const double *dyp = dy + (n * g.cout + co) * ovol;
            const double *wk = w + (co * g.cin + ci) * k3;
            for (std::size_t kz = 0; kz < g.k; ++kz) {
                const Range rz = valid_range(kz, g.pad, g.stride, g.in[0], g.out[0]);
                for (std::size_t ky = 0; ky < g.k; ++ky) {
                    const Range ry = valid_range(ky, g.pad, g.stride, g.in[1], g.out[1]);
                    for (std::size_t kx = 0; kx < g.k; ++kx) {
                        const Range rx = valid_range(kx, g.pad, g.stride, g.in[2], g.out[2]);
                        const double wv = wk[(kz * g.k + ky) * g.k + kx];
                        for (std::size_t oz = rz.lo; oz < rz.hi; ++oz) {
                            const std::size_t iz = oz * g.stride + kz - g.pad;
                            for (std::size_t oy = ry.lo; oy < ry.hi; ++oy) {
                                const std::size_t iy = oy * g.stride + ky - g.pad;
                                const double *grow = dyp + (oz * g.out[1] + oy) * g.out[2];
                                double *drow = dxp + (iz * g.in[1] + iy) * g.in[2];
                                for (std::size_t ox = rx.lo; ox < rx.hi; ++ox) {
                                    drow[ox * g.stride + kx - g.pad] += wv * grow[ox];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    return grad_input;
}

// ---------------------------------------------------------------------------

namespace {

struct ChannelLayout {
    std::size_t n, c, inner;
};

ChannelLayout channel_layout(const Tensor &t) {
    if (t.rank() < 2) {
        throw ArgumentError("batchnorm3d expects [N, C, ...], got " +
                            shape_string(t.shape()));
    }
    return {t.dim(0), t.dim(1), t.size() / (t.dim(0) * t.dim(1))};
}

} // namespace

Tensor batchnorm3d(const Tensor &input, const Tensor &scale,
                   const Tensor &offset, Tensor &running_mean,
                   Tensor &running_var, Mode mode, double momentum, double eps,
                   BatchNormCache *cache) {
    const ChannelLayout L = channel_layout(input);
    const std::array<std::size_t, 1> cshape{L.c};
    scale.require_shape(cshape, "batchnorm3d scale");
    offset.require_shape(cshape, "batchnorm3d offset");
    running_mean.require_shape(cshape, "batchnorm3d running_mean");
    running_var.require_shape(cshape, "batchnorm3d running_var");
    if (mode == Mode::train && L.n < 2) {
        throw ArgumentError("batchnorm3d in train mode needs a batch of at "
                            "least 2, got " + std::to_string(L.n));
    }

    Tensor output(input.shape());
    Tensor normalized(input.shape());
    std::vector<double> inv_std(L.c);
    const double count = static_cast<double>(L.n * L.inner);
    const double *x = input.data().data();

    for (std::size_t c = 0; c < L.c; ++c) {
        double mean = 0.0;
        double var = 0.0;
        if (mode == Mode::train) {
            for (std::size_t n = 0; n < L.n; ++n) {
                const double *p = x + (n * L.c + c) * L.inner;
                for (std::size_t i = 0; i < L.inner; ++i) {
                    mean += p[i];
                }
            }
            mean /= count;
            for (std::size_t n = 0; n < L.n; ++n) {
                const double *p = x + (n * L.c + c) * L.inner;
                for (std::size_t i = 0; i < L.inner; ++i) {
                    const double d = p[i] - mean;
                    var += d * d;
                }
            }
            var /= count;
            running_mean[c] = (1.0 - momentum) * running_mean[c] + momentum * mean;
            running_var[c] = (1.0 - momentum) * running_var[c] +
                             momentum * var * count / (count - 1.0);
        } else {
            mean = running_mean[c];
            var = running_var[c];
        }
        inv_std[c] = 1.0 / std::sqrt(var + eps);
        for (std::size_t n = 0; n < L.n; ++n) {
            const std::size_t base = (n * L.c + c) * L.inner;
            for (std::size_t i = 0; i < L.inner; ++i) {
                const double h = (x[base + i] - mean) * inv_std[c];
                normalized[base + i] = h;
                output[base + i] = scale[c] * h + offset[c];
            }
        }
    }
    if (cache) {
        cache->mode = mode;
        cache->normalized = std::move(normalized);
        cache->inv_std = std::move(inv_std);
    }
    return output;
}

Tensor batchnorm3d_backward(const Tensor &grad_output,
                            const BatchNormCache &cache, Tensor &scale,
                            Tensor &offset) {
    grad_output.require_shape(cache.normalized.shape(),
                              "batchnorm3d grad_output");
    const ChannelLayout L = channel_layout(grad_output);
    scale.enable_grad();
    offset.enable_grad();
    Tensor grad_input(grad_output.shape());
    const double count = static_cast<double>(L.n * L.inner);
    for (std::size_t c = 0; c < L.c; ++c) {
        double sum_dy = 0.0;
        double sum_dy_h = 0.0;
        for (std::size_t n = 0; n < L.n; ++n) {
            const std::size_t base = (n * L.c + c) * L.inner;
            for (std::size_t i = 0; i < L.inner; ++i) {
                sum_dy += grad_output[base + i];
                sum_dy_h += grad_output[base + i] * cache.normalized[base + i];
            }
        }
        scale.grad()[c] += sum_dy_h;
        offset.grad()[c] += sum_dy;
        const double g = scale[c] * cache.inv_std[c];
        for (std::size_t n = 0; n < L.n; ++n) {
            const std::size_t base = (n * L.c + c) * L.inner;
            for (std::size_t i = 0; i < L.inner; ++i) {
                const double dy = grad_output[base + i];
                if (cache.mode == Mode::train) {
                    grad_input[base + i] =
                        g / count *
                        (count * dy - sum_dy - cache.normalized[base + i] * sum_dy_h);
                } else {
                    grad_input[base + i] = g * dy;
                }
            }
        }
    }
    return grad_input;
}

// ---------------------------------------------------------------------------

Conv3d::Conv3d(std::size_t in_channels, std::size_t out_channels,
               std::size_t kernel, std::size_t stride)
    : weight({out_channels, in_channels, kernel, kernel, kernel}),
      bias({out_channels}), stride_(stride) {
    weight.enable_grad();
    bias.enable_grad();
}

void Conv3d::init(Rng &rng) {
    const double fan_in = static_cast<double>(weight.size() / weight.dim(0));
    const double bound = std::sqrt(6.0 / fan_in);
    for (double &w : weight.data()) {
        w = rng.uniform(-bound, bound);
    }
    std::fill(bias.data().begin(), bias.data().end(), 0.0);
}

Tensor Conv3d::forward(const Tensor &input) {
    Tensor out = conv3d(input, weight, bias, stride_);
    input_ = input;
    return out;
}

Tensor Conv3d::backward(const Tensor &grad_output) {
    if (!input_) {
        throw StateError("Conv3d::backward called without a cached forward");
    }
    Tensor dx = conv3d_backward(*input_, weight, bias, stride_, grad_output);
    input_.reset();
    return dx;
}

BatchNorm3d::BatchNorm3d(std::size_t channels)
    : scale({channels}, 1.0), offset({channels}, 0.0),
      running_mean({channels}, 0.0), running_var({channels}, 1.0) {
    scale.enable_grad();
    offset.enable_grad();
}

Tensor BatchNorm3d::forward(const Tensor &input, Mode mode) {
    BatchNormCache cache;
    Tensor out = batchnorm3d(input, scale, offset, running_mean, running_var,
                             mode, kBatchNormMomentum, kBatchNormEps, &cache);
    cache_ = std::move(cache);
    return out;
}

Tensor BatchNorm3d::backward(const Tensor &grad_output) {
    if (!cache_) {
        throw StateError("BatchNorm3d::backward called without a cached forward");
    }
    Tensor dx = batchnorm3d_backward(grad_output, *cache_, scale, offset);
    cache_.reset();
    return dx;
}

Dense::Dense(std::size_t in_features, std::size_t out_features)
    : weight({out_features, in_features}), bias({out_features}) {
    weight.enable_grad();
    bias.enable_grad();
}

void Dense::init(Rng &rng) {
    const double bound =
        std::sqrt(6.0 / static_cast<double>(weight.dim(0) + weight.dim(1)));
    for (double &w : weight.data()) {
        w = rng.uniform(-bound, bound);
    }
    std::fill(bias.data().begin(), bias.data().end(), 0.0);
}

Tensor Dense::forward(const Tensor &input) {
    const std::size_t out_f = weight.dim(0);
    const std::size_t in_f = weight.dim(1);
    if (input.rank() != 2 || input.dim(1) != in_f) {
        throw ArgumentError("dense layer expects [N, " + std::to_string(in_f) +
                            "], got " + shape_string(input.shape()));
    }
    const std::size_t n = input.dim(0);
    Tensor out({n, out_f});
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t o = 0; o < out_f; ++o) {
            double acc = bias[o];
            for (std::size_t i = 0; i < in_f; ++i) {
                acc += weight[o * in_f + i] * input[s * in_f + i];
            }
            out[s * out_f + o] = acc;
        }
    }
    input_ = input;
    return out;
}

Tensor Dense::backward(const Tensor &grad_output) {
    if (!input_) {
        throw StateError("Dense::backward called without a cached forward");
    }
    const std::size_t out_f = weight.dim(0);
    const std::size_t in_f = weight.dim(1);
    const std::size_t n = input_->dim(0);
    const std::array<std::size_t, 2> gshape{n, out_f};
    grad_output.require_shape(gshape, "dense grad_output");
    Tensor dx({n, in_f});
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t o = 0; o < out_f; ++o) {
            const double g = grad_output[s * out_f + o];
            bias.grad()[o] += g;
            for (std::size_t i = 0; i < in_f; ++i) {
                weight.grad()[o * in_f + i] += g * (*input_)[s * in_f + i];
                dx[s * in_f + i] += g * weight[o * in_f + i];
            }
        }
    }
    input_.reset();
    return dx;
}

// ---------------------------------------------------------------------------

ResidualBlock::ResidualBlock(std::size_t in_channels, std::size_t out_channels,
                             std::size_t stride)
    : conv1(in_channels, out_channels, 3, stride), bn1(out_channels),
      conv2(out_channels, out_channels, 3, 1), bn2(out_channels) {
    if (in_channels != out_channels || stride != 1) {
        projection_.emplace(Projection{Conv3d(in_channels, out_channels, 1, stride),
                                       BatchNorm3d(out_channels)});
    }
}

void ResidualBlock::init(Rng &rng) {
    conv1.init(rng);
    conv2.init(rng);
    if (projection_) {
        projection_->conv.init(rng);
    }
}

Tensor ResidualBlock::forward(const Tensor &input, Mode mode) {
    Tensor h = bn1.forward(conv1.forward(input), mode);
    for (double &v : h.data()) {
        v = std::max(v, 0.0);
    }
    Tensor out = bn2.forward(conv2.forward(h), mode);
    relu1_out_ = std::move(h);
    if (projection_) {
        const Tensor skip =
            projection_->bn.forward(projection_->conv.forward(input), mode);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += skip[i];
        }
    } else {
        input.require_shape(out.shape(), "residual identity skip");
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += input[i];
        }
    }
    for (double &v : out.data()) {
        v = std::max(v, 0.0);
    }
    output_ = out;
    return out;
}

Tensor ResidualBlock::backward(const Tensor &grad_output) {
    if (!output_ || !relu1_out_) {
        throw StateError("ResidualBlock::backward called without a cached forward");
    }
    grad_output.require_shape(output_->shape(), "residual block grad_output");
    Tensor g = grad_output;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if ((*output_)[i] <= 0.0) {
            g[i] = 0.0;
        }
    }
    Tensor dh = conv2.backward(bn2.backward(g));
    for (std::size_t i = 0; i < dh.size(); ++i) {
        if ((*relu1_out_)[i] <= 0.0) {
            dh[i] = 0.0;
        }
    }
    Tensor dx = conv1.backward(bn1.backward(dh));
    if (projection_) {
        const Tensor ds = projection_->conv.backward(projection_->bn.backward(g));
        for (std::size_t i = 0; i < dx.size(); ++i) {
            dx[i] += ds[i];
        }
    } else {
        for (std::size_t i = 0; i < dx.size(); ++i) {
            dx[i] += g[i];
        }
    }
    output_.reset();
    relu1_out_.reset();
    return dx;
}

namespace {

void collect_conv(Conv3d &c, std::vector<Tensor *> &trainable,
                  std::vector<Tensor *> &all) {
    trainable.insert(trainable.end(), {&c.weight, &c.bias});
    all.insert(all.end(), {&c.weight, &c.bias});
}

void collect_bn(BatchNorm3d &b, std::vector<Tensor *> &trainable,
                std::vector<Tensor *> &all) {
    trainable.insert(trainable.end(), {&b.scale, &b.offset});
    all.insert(all.end(),
               {&b.scale, &b.offset, &b.running_mean, &b.running_var});
}

} // namespace

void ResidualBlock::collect(std::vector<Tensor *> &trainable,
                            std::vector<Tensor *> &all) {
    collect_conv(conv1, trainable, all);
    collect_bn(bn1, trainable, all);
    collect_conv(conv2, trainable, all);
    collect_bn(bn2, trainable, all);
    if (projection_) {
        collect_conv(projection_->conv, trainable, all);
        collect_bn(projection_->bn, trainable, all);
    }
}

Tensor residual_block(const Tensor &input, ResidualBlock &params, Mode mode) {
    return params.forward(input, mode);
}

// ---------------------------------------------------------------------------

void NetConfig::validate() const {
    if (input_side < 1 || channels.empty() || blocks_per_stage < 1 ||
        n_out < 1) {
        throw ArgumentError("net config needs input_side, channels, "
                            "blocks_per_stage and n_out all positive");
    }
    for (std::size_t c : channels) {
        if (c < 1) {
            throw ArgumentError("net channel widths must be positive");
        }
    }
    const std::size_t factor = std::size_t{1} << (channels.size() - 1);
    if (input_side % factor != 0) {
        throw ArgumentError("input_side " + std::to_string(input_side) +
                            " must be divisible by " + std::to_string(factor) +
                            " for " + std::to_string(channels.size()) +
                            " stages");
    }
}

namespace {

std::vector<ResidualBlock> make_blocks(const NetConfig &cfg) {
    cfg.validate();
    std::vector<ResidualBlock> blocks;
    std::size_t in = 1;
    for (std::size_t s = 0; s < cfg.channels.size(); ++s) {
        for (std::size_t b = 0; b < cfg.blocks_per_stage; ++b) {
            const std::size_t stride = (s > 0 && b == 0) ? 2 : 1;
            blocks.emplace_back(in, cfg.channels[s], stride);
            in = cfg.channels[s];
        }
    }
    return blocks;
}

} // namespace

Network::Network(const NetConfig &cfg, std::uint64_t seed)
    : blocks(make_blocks(cfg)), dense(cfg.channels.back(), cfg.n_out),
      cfg_(cfg) {
    Rng rng(seed);
    for (ResidualBlock &b : blocks) {
        b.init(rng);
    }
    dense.init(rng);
}

Tensor Network::forward(const Tensor &volumes, Mode mode) {
    const std::size_t s = cfg_.input_side;
    if (volumes.rank() != 5) {
        throw ArgumentError("network expects [N, 1, S, S, S], got " +
                            shape_string(volumes.shape()));
    }
    const std::array<std::size_t, 5> expected{volumes.dim(0), 1, s, s, s};
    volumes.require_shape(expected, "network input");

    Tensor h = volumes;
    for (ResidualBlock &b : blocks) {
        h = b.forward(h, mode);
    }
    last_shape_ = h.shape();
    const std::size_t n = h.dim(0);
    const std::size_t c = h.dim(1);
    const std::size_t inner = h.size() / (n * c);
    Tensor pooled({n, c});
    for (std::size_t i = 0; i < n * c; ++i) {
        double acc = 0.0;
        for (std::size_t v = 0; v < inner; ++v) {
            acc += h[i * inner + v];
        }
        pooled[i] = acc / static_cast<double>(inner);
    }
    Tensor features = dense.forward(pooled);
    for (double &v : features.data()) {
        v = 1.0 / (1.0 + std::exp(-v));
    }
    features_ = features;
    return features;
}

void Network::backward(const Tensor &grad_features) {
    if (!features_) {
        throw StateError("Network::backward called before forward");
    }
    grad_features.require_shape(features_->shape(), "network grad_features");
    Tensor dz = grad_features;
    for (std::size_t i = 0; i < dz.size(); ++i) {
        const double f = (*features_)[i];
        dz[i] *= f * (1.0 - f);
    }
    const Tensor dpooled = dense.backward(dz);
    Tensor g(last_shape_);
    const std::size_t inner = g.size() / dpooled.size();
    const double scale = 1.0 / static_cast<double>(inner);
    for (std::size_t i = 0; i < dpooled.size(); ++i) {
        std::fill_n(g.data().begin() + static_cast<std::ptrdiff_t>(i * inner),
                    inner, dpooled[i] * scale);
    }
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
        g = it->backward(g);
    }
    features_.reset();
}

void Network::collect(std::vector<Tensor *> &trainable,
                      std::vector<Tensor *> &all) {
    for (ResidualBlock &b : blocks) {
        b.collect(trainable, all);
    }
    trainable.insert(trainable.end(), {&dense.weight, &dense.bias});
    all.insert(all.end(), {&dense.weight, &dense.bias});
}

std::vector<Tensor *> Network::parameters() {
    std::vector<Tensor *> trainable;
    std::vector<Tensor *> all;
    collect(trainable, all);
    return trainable;
}

std::vector<Tensor *> Network::state() {
    std::vector<Tensor *> trainable;
    std::vector<Tensor *> all;
    collect(trainable, all);
    return all;
}

void Network::zero_grad() {
    for (Tensor *t : parameters()) {
        t->zero_grad();
    }
}

} // namespace qres
