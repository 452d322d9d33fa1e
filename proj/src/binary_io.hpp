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

// Little-endian encoding helpers shared by the binary file formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "qres/error.hpp"

namespace qres::binary {

class Writer {
  public:
    void bytes(std::string_view b) { out_.append(b); }
    void u32(std::uint32_t v) { put(v); }
    void u64(std::uint64_t v) { put(v); }
    void f32(float v) { put(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { put(std::bit_cast<std::uint64_t>(v)); }
    void string(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes(s);
    }
    [[nodiscard]] const std::string &buffer() const noexcept { return out_; }

  private:
    template <typename U> void put(U v) {
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFU));
        }
    }
    std::string out_;
};

/// Bounds-checked reader; every failure reports the byte offset.
class Reader {
  public:
    explicit Reader(std::string_view data) : data_(data) {}

    std::string_view bytes(std::size_t n, const char *what) {
        need(n, what);
        auto s = data_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::uint32_t u32(const char *what) { return get<std::uint32_t>(what); }
    std::uint64_t u64(const char *what) { return get<std::uint64_t>(what); }
    float f32(const char *what) {
        return std::bit_cast<float>(get<std::uint32_t>(what));
    }
    double f64(const char *what) {
        return std::bit_cast<double>(get<std::uint64_t>(what));
    }
    std::string string(const char *what) {
        const std::uint32_t n = u32(what);
        return std::string(bytes(n, what));
    }

    [[nodiscard]] std::size_t offset() const noexcept { return pos_; }
    [[nodiscard]] std::size_t remaining() const noexcept {
        return data_.size() - pos_;
    }

    void need(std::size_t n, const char *what) const {
        if (remaining() < n) {
            throw FormatError(std::string("truncated data reading ") + what +
                                  ": need " + std::to_string(n) +
                                  " bytes, have " + std::to_string(remaining()),
                              pos_);
        }
    }

  private:
    template <typename U> U get(const char *what) {
        need(sizeof(U), what);
        U v = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            v |= static_cast<U>(static_cast<unsigned char>(data_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += sizeof(U);
        return v;
    }
    std::string_view data_;
    std::size_t pos_ = 0;
};

} // namespace qres::binary
