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
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace qres {

/**
 * @brief Dense row-major array of doubles with an optional gradient buffer.
 *
 * The last index varies fastest. The gradient buffer is allocated by
 * enable_grad() and always matches the data length.
 */
class Tensor {
  public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
    Tensor(std::vector<std::size_t> shape, std::vector<double> data);

    [[nodiscard]] const std::vector<std::size_t> &shape() const noexcept {
        return shape_;
    }
    [[nodiscard]] std::size_t rank() const noexcept { return shape_.size(); }
    [[nodiscard]] std::size_t dim(std::size_t axis) const {
        return shape_.at(axis);
    }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    [[nodiscard]] std::span<double> data() noexcept { return data_; }
    [[nodiscard]] std::span<const double> data() const noexcept {
        return data_;
    }
    double &operator[](std::size_t i) { return data_[i]; }
    const double &operator[](std::size_t i) const { return data_[i]; }

    [[nodiscard]] bool has_grad() const noexcept { return !grad_.empty(); }
    /// Allocates (zeroed) gradient storage if absent.
    void enable_grad();
    void zero_grad();
    [[nodiscard]] std::span<double> grad() noexcept { return grad_; }
    [[nodiscard]] std::span<const double> grad() const noexcept {
        return grad_;
    }

    /// Throws ArgumentError unless shape() == expected.
    void require_shape(std::span<const std::size_t> expected,
                       const std::string &what) const;

    [[nodiscard]] bool all_finite() const noexcept;

  private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
    std::vector<double> grad_;
};

std::string shape_string(std::span<const std::size_t> shape);

} // namespace qres
