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
#include "qres/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "qres/error.hpp"

namespace qres {

namespace {

std::size_t element_count(const std::vector<std::size_t> &shape) {
    for (std::size_t d : shape) {
        if (d == 0) {
            throw ArgumentError("tensor dimensions must be positive, got " +
                                shape_string(shape));
        }
    }
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                           std::multiplies<>());
}

} // namespace

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(element_count(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != element_count(shape_)) {
        throw ArgumentError("tensor of shape " + shape_string(shape_) +
                            " needs " + std::to_string(element_count(shape_)) +
                            " values, got " + std::to_string(data_.size()));
    }
}

void Tensor::enable_grad() {
    if (grad_.size() != data_.size()) {
        grad_.assign(data_.size(), 0.0);
    }
}

void Tensor::zero_grad() { std::fill(grad_.begin(), grad_.end(), 0.0); }

void Tensor::require_shape(std::span<const std::size_t> expected,
                           const std::string &what) const {
    if (!std::equal(shape_.begin(), shape_.end(), expected.begin(),
                    expected.end())) {
        throw ArgumentError(what + ": expected shape " +
                            shape_string(expected) + ", got " +
                            shape_string(shape_));
    }
}

bool Tensor::all_finite() const noexcept {
    auto finite = [](double v) { return std::isfinite(v); };
    return std::all_of(data_.begin(), data_.end(), finite) &&
           std::all_of(grad_.begin(), grad_.end(), finite);
}

std::string shape_string(std::span<const std::size_t> shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) {
            s += ", ";
        }
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

} // namespace qres
