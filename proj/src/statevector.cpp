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
#include "qres/statevector.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "qres/error.hpp"

namespace qres {

namespace {

std::size_t checked_count(std::size_t n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CapacityError("n_qubits must be in [1, " +
                            std::to_string(kMaxQubits) + "], got " +
                            std::to_string(n_qubits));
    }
    return std::size_t{1} << n_qubits;
}

} // namespace

StateVector::StateVector(std::size_t n_qubits)
    : n_qubits_(n_qubits), amplitudes_(checked_count(n_qubits)) {
    amplitudes_[0] = Complex{1.0, 0.0};
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw ArgumentError("amplitude count must be a power of two >= 2, got " +
                            std::to_string(dim));
    }
    StateVector s;
    s.n_qubits_ = static_cast<std::size_t>(std::countr_zero(dim));
    checked_count(s.n_qubits_);
    s.amplitudes_ = std::move(amplitudes);
    return s;
}

void validate_gate(const Gate &gate, std::size_t n_qubits) {
    auto check = [n_qubits](std::size_t q) {
        if (q >= n_qubits) {
            throw IndexError("qubit index " + std::to_string(q) +
                             " out of range for " + std::to_string(n_qubits) +
                             "-qubit state");
        }
    };
    check(gate.qubit0);
    if (gate.is_two_qubit()) {
        check(gate.qubit1);
        if (gate.qubit0 == gate.qubit1) {
            throw ArgumentError("two-qubit gate needs distinct qubits, got " +
                                std::to_string(gate.qubit0) + " twice");
        }
    }
}

void StateVector::apply(const Gate &gate) {
    validate_gate(gate, n_qubits_);
    switch (gate.kind) {
    case GateKind::H:
        apply_h(gate.qubit0);
        break;
    case GateKind::RY:
        apply_ry(gate.qubit0, gate.angle);
        break;
    case GateKind::RZ:
        apply_rz(gate.qubit0, gate.angle);
        break;
    case GateKind::CX:
        apply_cx(gate.qubit0, gate.qubit1);
        break;
    case GateKind::ZZ:
        apply_zz(gate.qubit0, gate.qubit1, gate.angle);
        break;
    }
}

// Pairs (i0, i1) differ only in bit q, with bit q of i0 clear.
void StateVector::apply_ry(std::size_t q, double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i0 = 0; i0 < amplitudes_.size(); ++i0) {
        if (i0 & bit) {
            continue;
        }
        const Complex a0 = amplitudes_[i0];
        const Complex a1 = amplitudes_[i0 | bit];
        amplitudes_[i0] = c * a0 - s * a1;
        amplitudes_[i0 | bit] = s * a0 + c * a1;
    }
}

void StateVector::apply_rz(std::size_t q, double theta) {
    const Complex phase0 = std::polar(1.0, -theta / 2);
    const Complex phase1 = std::polar(1.0, theta / 2);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        amplitudes_[i] *= (i & bit) ? phase1 : phase0;
    }
}

void StateVector::apply_h(std::size_t q) {
    const double r = 1.0 / std::sqrt(2.0);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i0 = 0; i0 < amplitudes_.size(); ++i0) {
        if (i0 & bit) {
            continue;
        }
        const Complex a0 = amplitudes_[i0];
        const Complex a1 = amplitudes_[i0 | bit];
        amplitudes_[i0] = r * (a0 + a1);
        amplitudes_[i0 | bit] = r * (a0 - a1);
    }
}

void StateVector::apply_cx(std::size_t control, std::size_t target) {
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if ((i & cbit) && !(i & tbit)) {
            std::swap(amplitudes_[i], amplitudes_[i | tbit]);
        }
    }
}

// Diagonal: e^{-i theta/2} when the two bits agree, e^{+i theta/2} otherwise.
void StateVector::apply_zz(std::size_t a, std::size_t b, double theta) {
    const Complex same = std::polar(1.0, -theta / 2);
    const Complex differ = std::polar(1.0, theta / 2);
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        const bool ba = (i >> a) & 1U;
        const bool bb = (i >> b) & 1U;
        amplitudes_[i] *= (ba == bb) ? same : differ;
    }
}

double StateVector::norm_squared() const noexcept {
    double total = 0.0;
    for (const Complex &a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

StateVector init_state(std::size_t n_qubits) { return StateVector(n_qubits); }

StateVector apply_gate(StateVector state, const Gate &gate) {
    state.apply(gate);
    return state;
}

double expect_z_parity(const StateVector &state) {
    double total = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        total += (std::popcount(i) & 1) ? -p : p;
    }
    return total;
}

} // namespace qres
