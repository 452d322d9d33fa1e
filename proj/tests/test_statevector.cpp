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
#include <bit>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qres/error.hpp"
#include "qres/statevector.hpp"

namespace qres {
namespace {

constexpr double kTol = 1e-12;

void expect_amplitudes(const StateVector &s, const std::vector<Complex> &want,
                       double tol = kTol) {
    ASSERT_EQ(s.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_NEAR(s[i].real(), want[i].real(), tol) << "index " << i;
        EXPECT_NEAR(s[i].imag(), want[i].imag(), tol) << "index " << i;
    }
}

TEST(InitState, OneQubit) { expect_amplitudes(init_state(1), {1.0, 0.0}); }

TEST(InitState, TwoQubits) {
    expect_amplitudes(init_state(2), {1.0, 0.0, 0.0, 0.0});
}

TEST(InitState, CapacityBounds) {
    EXPECT_THROW(init_state(0), CapacityError);
    EXPECT_THROW(init_state(kMaxQubits + 1), CapacityError);
    EXPECT_EQ(init_state(kMaxQubits).size(), std::size_t{1} << kMaxQubits);
}

TEST(ApplyGate, HadamardOnZero) {
    const double r = 1.0 / std::sqrt(2.0);
    expect_amplitudes(apply_gate(init_state(1), Gate::h(0)), {r, r});
}

TEST(ApplyGate, CnotTruthTable) {
    // qubit 1 is the high bit, so |10> sits at index 2
    const StateVector s = StateVector::from_amplitudes({0.0, 0.0, 1.0, 0.0});
    expect_amplitudes(apply_gate(s, Gate::cx(1, 0)), {0.0, 0.0, 0.0, 1.0});
}

TEST(ApplyGate, ZzOnUniformMatchesDiagonalProduct) {
    const StateVector s = StateVector::from_amplitudes({0.5, 0.5, 0.5, 0.5});
    const double theta = std::numbers::pi / 2;
    const Complex agree = std::polar(1.0, -theta / 2);
    const Complex differ = std::polar(1.0, theta / 2);
    const std::vector<Complex> diag{agree, differ, differ, agree};
    std::vector<Complex> want(4);
    for (std::size_t i = 0; i < 4; ++i) {
        want[i] = diag[i] * 0.5;
    }
    expect_amplitudes(apply_gate(s, Gate::zz(0, 1, theta)), want);
}

TEST(ApplyGate, RejectsBadTargets) {
    StateVector s = init_state(2);
    EXPECT_THROW(s.apply(Gate::h(2)), IndexError);
    EXPECT_THROW(s.apply(Gate::cx(0, 0)), ArgumentError);
    EXPECT_THROW(s.apply(Gate::zz(1, 1, 0.3)), ArgumentError);
    EXPECT_THROW(s.apply(Gate::cx(0, 5)), IndexError);
}

TEST(FromAmplitudes, RejectsNonPowerOfTwo) {
    EXPECT_THROW(StateVector::from_amplitudes({1.0, 0.0, 0.0}), ArgumentError);
    EXPECT_THROW(StateVector::from_amplitudes({1.0}), ArgumentError);
}

TEST(Parity, BasisStates) {
    EXPECT_DOUBLE_EQ(expect_z_parity(init_state(2)), 1.0);
    EXPECT_DOUBLE_EQ(
        expect_z_parity(StateVector::from_amplitudes({0.0, 1.0})), -1.0);
    EXPECT_NEAR(expect_z_parity(apply_gate(init_state(1), Gate::h(0))), 0.0,
                kTol);
}

TEST(Parity, EveryBasisStateOfThreeQubits) {
    for (std::size_t k = 0; k < 8; ++k) {
        std::vector<Complex> amps(8);
        amps[k] = 1.0;
        const int ones = std::popcount(k);
        EXPECT_DOUBLE_EQ(expect_z_parity(StateVector::from_amplitudes(amps)),
                         ones % 2 == 0 ? 1.0 : -1.0);
    }
}

TEST(Property, GatesMatchDenseKroneckerMatrices) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(3);
        const std::vector<Complex> v = oracle::random_state(n, rng);
        const Gate g = oracle::random_gate(n, rng);
        const std::vector<Complex> want =
            oracle::apply(oracle::dense_gate(g, n), v);
        expect_amplitudes(apply_gate(StateVector::from_amplitudes(v), g), want);
    }
}

TEST(Property, GateMatricesAreUnitary) {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.below(2);
        const oracle::Matrix u = oracle::dense_gate(oracle::random_gate(n, rng), n);
        const oracle::Matrix prod = oracle::matmul(u, oracle::dagger(u));
        for (std::size_t i = 0; i < prod.size(); ++i)
            for (std::size_t j = 0; j < prod.size(); ++j)
                EXPECT_NEAR(std::abs(prod[i][j] - (i == j ? 1.0 : 0.0)), 0.0,
                            kTol);
    }
}

TEST(Property, NormPreservedOverLongSequences) {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng.below(6);
        StateVector s = StateVector::from_amplitudes(oracle::random_state(n, rng));
        for (int k = 0; k < 100; ++k) {
            s.apply(oracle::random_gate(n, rng));
        }
        EXPECT_NEAR(s.norm_squared(), 1.0, kTol);
    }
}

TEST(Property, InverseUndoesGate) {
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.below(4);
        const std::vector<Complex> v = oracle::random_state(n, rng);
        const Gate g = oracle::random_gate(n, rng);
        StateVector s = StateVector::from_amplitudes(v);
        s.apply(g);
        s.apply(g.inverse());
        expect_amplitudes(s, v);
    }
}

TEST(Property, ParityBoundedByOne) {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.below(5);
        const double z =
            expect_z_parity(StateVector::from_amplitudes(oracle::random_state(n, rng)));
        EXPECT_LE(std::abs(z), 1.0 + kTol);
    }
}

} // namespace
} // namespace qres
