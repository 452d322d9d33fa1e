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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qres {

using Complex = std::complex<double>;

/// Largest register the dense simulator accepts.
inline constexpr std::size_t kMaxQubits = 20;

enum class GateKind { H, RY, RZ, CX, ZZ };

/**
 * @brief A single gate instance.
 *
 * Single-qubit gates use `qubit0` only. For CX, `qubit0` is the control and
 * `qubit1` the target. ZZ is symmetric in its two qubits. `angle` is ignored
 * for H and CX.
 */
struct Gate {
    GateKind kind = GateKind::H;
    double angle = 0.0;
    std::size_t qubit0 = 0;
    std::size_t qubit1 = 0;

    static Gate h(std::size_t q) { return {GateKind::H, 0.0, q, 0}; }
    static Gate ry(std::size_t q, double theta) {
        return {GateKind::RY, theta, q, 0};
    }
    static Gate rz(std::size_t q, double theta) {
        return {GateKind::RZ, theta, q, 0};
    }
    static Gate cx(std::size_t control, std::size_t target) {
        return {GateKind::CX, 0.0, control, target};
    }
    static Gate zz(std::size_t a, std::size_t b, double theta) {
        return {GateKind::ZZ, theta, a, b};
    }

    [[nodiscard]] bool is_two_qubit() const noexcept {
        return kind == GateKind::CX || kind == GateKind::ZZ;
    }
    [[nodiscard]] bool has_angle() const noexcept {
        return kind == GateKind::RY || kind == GateKind::RZ ||
               kind == GateKind::ZZ;
    }

    /// Inverse gate: negated angle for rotations, self for H and CX.
    [[nodiscard]] Gate inverse() const noexcept {
        Gate g = *this;
        if (has_angle()) {
            g.angle = -angle;
        }
        return g;
    }

    bool operator==(const Gate &) const = default;
};

/**
 * @brief Dense n-qubit pure state.
 *
 * Qubit 0 is the least-significant bit of the amplitude index.
 */
class StateVector {
  public:
    /// |0...0> on `n_qubits` qubits. Throws CapacityError outside [1, 20].
    explicit StateVector(std::size_t n_qubits);

    /// Adopts explicit amplitudes; size must be a power of two >= 2.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept {
        return amplitudes_.size();
    }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amplitudes_;
    }
    [[nodiscard]] const Complex &operator[](std::size_t i) const {
        return amplitudes_[i];
    }

    /// Applies `gate` in place. Throws IndexError / ArgumentError on bad
    /// targets.
    void apply(const Gate &gate);

    /// Squared 2-norm of the amplitude vector.
    [[nodiscard]] double norm_squared() const noexcept;

  private:
    StateVector() = default;

    void apply_ry(std::size_t q, double theta);
    void apply_rz(std::size_t q, double theta);
    void apply_h(std::size_t q);
    void apply_cx(std::size_t control, std::size_t target);
    void apply_zz(std::size_t a, std::size_t b, double theta);

    std::size_t n_qubits_ = 0;
    std::vector<Complex> amplitudes_;
};

StateVector init_state(std::size_t n_qubits);

/// Pure form of StateVector::apply.
StateVector apply_gate(StateVector state, const Gate &gate);

/// Throws if `gate` is not applicable to an `n_qubits` register.
void validate_gate(const Gate &gate, std::size_t n_qubits);

/// Expectation of Z on every qubit, i.e. sum_b (-1)^popcount(b) |a_b|^2.
double expect_z_parity(const StateVector &state);

} // namespace qres
