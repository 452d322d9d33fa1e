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
#include <stdexcept>
#include <string>

namespace qres {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied an invalid value or inconsistent sizes.
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// A qubit or element index is out of range.
class IndexError : public Error {
  public:
    using Error::Error;
};

/// Requested size exceeds what the simulator supports.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// An operation was invoked in the wrong order (e.g. backward before forward).
class StateError : public Error {
  public:
    using Error::Error;
};

/// Malformed or incompatible file contents.
class FormatError : public Error {
  public:
    FormatError(const std::string &what, std::uint64_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    explicit FormatError(const std::string &what)
        : Error(what), offset_(0) {}

    [[nodiscard]] std::uint64_t offset() const noexcept { return offset_; }

  private:
    std::uint64_t offset_;
};

} // namespace qres
