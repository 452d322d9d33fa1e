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
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qres/circuits.hpp"
#include "qres/error.hpp"

namespace qres {
namespace {

constexpr double kPi = std::numbers::pi;

void expect_states_near(const StateVector &a, const StateVector &b,
                        double tol = 1e-12) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(std::abs(a[i] - b[i]), 0.0, tol) << "index " << i;
    }
}

TEST(FeatureMap, ZeroInputTwoQubits) {
    const std::vector<double> x{0.0, 0.0};
    const Circuit c = build_zz_feature_map(x, 1);
    const std::vector<Gate> want{Gate::h(0),       Gate::h(1),
                                 Gate::rz(0, 0.0), Gate::rz(1, 0.0),
                                 Gate::zz(0, 1, 0.0)};
    EXPECT_EQ(c.n_qubits, 2u);
    EXPECT_EQ(c.gates, want);
}

TEST(FeatureMap, PairAngleByHand) {
    EXPECT_NEAR(zz_pair_angle(1.0, 0.5), 5.783185307179586, 1e-12);
    const std::vector<double> x{1.0, 0.5};
    const Circuit c = build_zz_feature_map(x, 1);
    ASSERT_EQ(c.gates.size(), 5u);
    EXPECT_EQ(c.gates[4].kind, GateKind::ZZ);
    EXPECT_NEAR(c.gates[4].angle, 1.0 * (2 * kPi - 0.5), 1e-15);
    EXPECT_DOUBLE_EQ(c.gates[2].angle, 2.0);
    EXPECT_DOUBLE_EQ(c.gates[3].angle, 1.0);
}

TEST(FeatureMap, SingleQubitHasNoPairs) {
    const std::vector<double> x{0.3};
    const Circuit c = build_zz_feature_map(x, 1);
    const std::vector<Gate> want{Gate::h(0), Gate::rz(0, 0.6)};
    EXPECT_EQ(c.gates, want);
}

TEST(FeatureMap, PairsInLexicographicOrderPerRep) {
    const std::vector<double> x{0.1, 0.2, 0.3, 0.4};
    const Circuit c = build_zz_feature_map(x, 2);
    ASSERT_EQ(c.gates.size(), 2u * (4 + 4 + 6));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t k = 8; k < 14; ++k) {
        pairs.emplace_back(c.gates[k].qubit0, c.gates[k].qubit1);
        EXPECT_NEAR(c.gates[k].angle,
                    x[c.gates[k].qubit0] * (2 * kPi - x[c.gates[k].qubit1]),
                    1e-15);
    }
    const std::vector<std::pair<std::size_t, std::size_t>> want{
        {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    EXPECT_EQ(pairs, want);
    EXPECT_EQ(std::vector<Gate>(c.gates.begin(), c.gates.begin() + 14),
              std::vector<Gate>(c.gates.begin() + 14, c.gates.end()));
}

TEST(FeatureMap, RejectsBadInput) {
    const std::vector<double> empty;
    const std::vector<double> x{0.5};
    const std::vector<double> wild{7.0};
    EXPECT_THROW(build_zz_feature_map(empty, 1), ArgumentError);
    EXPECT_THROW(build_zz_feature_map(x, 0), ArgumentError);
    EXPECT_THROW(build_zz_feature_map(wild, 1), ArgumentError);
}

TEST(RealAmplitudes, FourQubitStructure) {
    EXPECT_EQ(real_amplitudes_param_count(4, 1), 8u);
    const std::vector<double> phi(8, 0.1);
    const Circuit c = build_real_amplitudes(4, 1, phi);
    ASSERT_EQ(c.gates.size(), 11u);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_EQ(c.gates[k], Gate::ry(k, 0.1));
    }
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(c.gates[4 + k], Gate::cx(k, k + 1));
    }
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_EQ(c.gates[7 + k], Gate::ry(k, 0.1));
    }
}

TEST(RealAmplitudes, ParameterIndexing) {
    std::vector<double> phi(9);
    for (std::size_t i = 0; i < phi.size(); ++i) {
        phi[i] = static_cast<double>(i);
    }
    const Circuit c = build_real_amplitudes(3, 2, phi);
    std::vector<double> seen;
    for (const Gate &g : c.gates) {
        if (g.kind == GateKind::RY) {
            seen.push_back(g.angle);
            EXPECT_EQ(g.qubit0, static_cast<std::size_t>(g.angle) % 3);
        }
    }
    EXPECT_EQ(seen, phi);
}

TEST(RealAmplitudes, PiFlipsSingleQubit) {
    const std::vector<double> phi{kPi, 0.0};
    const Circuit c = build_real_amplitudes(1, 1, phi);
    EXPECT_EQ(c.gates, (std::vector<Gate>{Gate::ry(0, kPi), Gate::ry(0, 0.0)}));
    const StateVector s = simulate(c);
    EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s[1] - Complex(1.0)), 0.0, 1e-12);
}

TEST(RealAmplitudes, ZeroAnglesReduceToEntangler) {
    Rng rng(4);
    const std::vector<double> phi(4, 0.0);
    const Circuit c = build_real_amplitudes(2, 1, phi);
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<Complex> v = oracle::random_state(2, rng);
        StateVector a = StateVector::from_amplitudes(v);
        run(c, a);
        StateVector b = StateVector::from_amplitudes(v);
        b.apply(Gate::cx(0, 1));
        expect_states_near(a, b);
    }
}

TEST(RealAmplitudes, ParamCountEnumeration) {
    for (std::size_t n = 1; n <= 6; ++n) {
        for (std::size_t reps = 1; reps <= 4; ++reps) {
            const std::size_t want = n * (reps + 1);
            EXPECT_EQ(real_amplitudes_param_count(n, reps), want);
            const std::vector<double> phi(want, 0.2);
            const Circuit c = build_real_amplitudes(n, reps, phi);
            EXPECT_EQ(c.gates.size(), want + reps * (n - 1));
            const std::vector<double> short_phi(want - 1, 0.2);
            EXPECT_THROW(build_real_amplitudes(n, reps, short_phi), ArgumentError);
        }
    }
}

TEST(Property, ZzEqualsCnotRzCnot) {
    Rng rng(19);
    for (int trial = 0; trial < 50; ++trial) {
        const double theta = rng.uniform(-2 * kPi, 2 * kPi);
        const std::vector<Complex> v = oracle::random_state(3, rng);
        StateVector a = StateVector::from_amplitudes(v);
        a.apply(Gate::zz(0, 2, theta));
        StateVector b = StateVector::from_amplitudes(v);
        b.apply(Gate::cx(0, 2));
        b.apply(Gate::rz(2, theta));
        b.apply(Gate::cx(0, 2));
        expect_states_near(a, b);
    }
}

TEST(Property, FeatureMapPreservesNorm) {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.below(5);
        std::vector<double> x(n);
        for (double &v : x) {
            v = rng.uniform();
        }
        const StateVector s = simulate(build_zz_feature_map(x, 1 + rng.below(3)));
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
    }
}

TEST(TextFormat, RoundTripIsExact) {
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        Circuit c;
        c.n_qubits = 1 + rng.below(5);
        for (int k = 0; k < 30; ++k) {
            c.gates.push_back(oracle::random_gate(c.n_qubits, rng));
        }
        EXPECT_EQ(parse_circuit(format_circuit(c)), c);
    }
}

TEST(TextFormat, CommentsAndBlankLines) {
    const Circuit c = parse_circuit("# bell pair\nQUBITS 2\n\nH - 0  # first\nCX - 0 1\n");
    EXPECT_EQ(c.n_qubits, 2u);
    EXPECT_EQ(c.gates, (std::vector<Gate>{Gate::h(0), Gate::cx(0, 1)}));
}

TEST(TextFormat, Errors) {
    EXPECT_THROW(parse_circuit("H - 0\n"), FormatError);
    EXPECT_THROW(parse_circuit(""), FormatError);
    EXPECT_THROW(parse_circuit("QUBITS 2\nXX - 0\n"), FormatError);
    EXPECT_THROW(parse_circuit("QUBITS 2\nRY abc 0\n"), FormatError);
    EXPECT_THROW(parse_circuit("QUBITS 2\nH 0.5 0\n"), FormatError);
    EXPECT_THROW(parse_circuit("QUBITS 2\nCX - 0\n"), FormatError);
    EXPECT_THROW(parse_circuit("QUBITS 2\nH - 0 1\n"), FormatError);
    EXPECT_THROW(parse_circuit("QUBITS 2\nH - 2\n"), IndexError);
    EXPECT_THROW(parse_circuit("QUBITS 2\nCX - 1 1\n"), ArgumentError);
    EXPECT_THROW(parse_circuit("QUBITS 0\n"), CapacityError);
}

} // namespace
} // namespace qres
