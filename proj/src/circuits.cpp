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
#include "qres/circuits.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <sstream>

#include "qres/error.hpp"

namespace qres {

void Circuit::append(const Circuit &other) {
    if (other.n_qubits != n_qubits) {
        throw ArgumentError("cannot append a " +
                            std::to_string(other.n_qubits) +
                            "-qubit circuit to a " + std::to_string(n_qubits) +
                            "-qubit circuit");
    }
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

void run(const Circuit &circuit, StateVector &state) {
    if (state.n_qubits() != circuit.n_qubits) {
        throw ArgumentError("circuit has " + std::to_string(circuit.n_qubits) +
                            " qubits but state has " +
                            std::to_string(state.n_qubits()));
    }
    for (const Gate &g : circuit.gates) {
        state.apply(g);
    }
}

StateVector simulate(const Circuit &circuit) {
    StateVector state(circuit.n_qubits);
    run(circuit, state);
    return state;
}

double zz_pair_angle(double xi, double xj) noexcept {
    return xi * (2.0 * std::numbers::pi - xj);
}

Circuit build_zz_feature_map(std::span<const double> x, std::size_t reps) {
    if (x.empty()) {
        throw ArgumentError("feature vector must not be empty");
    }
    if (reps < 1) {
        throw ArgumentError("feature map reps must be >= 1");
    }
    for (double v : x) {
        if (!(std::abs(v) <= 2.0 * std::numbers::pi)) {
            throw ArgumentError("feature value " + std::to_string(v) +
                                " outside [-2pi, 2pi]");
        }
    }
    const std::size_t n = x.size();
    Circuit c{n, {}};
    c.gates.reserve(reps * (2 * n + n * (n - 1) / 2));
    for (std::size_t r = 0; r < reps; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            c.gates.push_back(Gate::h(i));
        }
        for (std::size_t i = 0; i < n; ++i) {
            c.gates.push_back(Gate::rz(i, 2.0 * x[i]));
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                c.gates.push_back(Gate::zz(i, j, zz_pair_angle(x[i], x[j])));
            }
        }
    }
    return c;
}

std::size_t real_amplitudes_param_count(std::size_t n_qubits,
                                        std::size_t reps) noexcept {
    return n_qubits * (reps + 1);
}

Circuit build_real_amplitudes(std::size_t n_qubits, std::size_t reps,
                              std::span<const double> phi) {
    if (n_qubits < 1) {
        throw ArgumentError("ansatz needs at least one qubit");
    }
    if (reps < 1) {
        throw ArgumentError("ansatz reps must be >= 1");
    }
    const std::size_t expected = real_amplitudes_param_count(n_qubits, reps);
    if (phi.size() != expected) {
        throw ArgumentError("ansatz expects " + std::to_string(expected) +
                            " parameters, got " + std::to_string(phi.size()));
    }
    Circuit c{n_qubits, {}};
    for (std::size_t i = 0; i < n_qubits; ++i) {
        c.gates.push_back(Gate::ry(i, phi[i]));
    }
    for (std::size_t r = 1; r <= reps; ++r) {
        for (std::size_t i = 0; i + 1 < n_qubits; ++i) {
            c.gates.push_back(Gate::cx(i, i + 1));
        }
        for (std::size_t i = 0; i < n_qubits; ++i) {
            c.gates.push_back(Gate::ry(i, phi[r * n_qubits + i]));
        }
    }
    return c;
}

namespace {

const char *kind_name(GateKind k) {
    switch (k) {
    case GateKind::H:
        return "H";
    case GateKind::RY:
        return "RY";
    case GateKind::RZ:
        return "RZ";
    case GateKind::CX:
        return "CX";
    case GateKind::ZZ:
        return "ZZ";
    }
    return "?";
}

GateKind parse_kind(const std::string &s, std::size_t line) {
    if (s == "H") {
        return GateKind::H;
    }
    if (s == "RY") {
        return GateKind::RY;
    }
    if (s == "RZ") {
        return GateKind::RZ;
    }
    if (s == "CX") {
        return GateKind::CX;
    }
    if (s == "ZZ") {
        return GateKind::ZZ;
    }
    throw FormatError("line " + std::to_string(line) + ": unknown gate kind '" +
                      s + "'");
}

} // namespace

std::string format_gate(const Gate &g) {
    std::string out = kind_name(g.kind);
    out += ' ';
    if (g.has_angle()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", g.angle);
        out += buf;
    } else {
        out += '-';
    }
    out += ' ';
    out += std::to_string(g.qubit0);
    if (g.is_two_qubit()) {
        out += ' ';
        out += std::to_string(g.qubit1);
    }
    return out;
}

std::string format_circuit(const Circuit &circuit) {
    std::string out = "QUBITS " + std::to_string(circuit.n_qubits) + "\n";
    for (const Gate &g : circuit.gates) {
        out += format_gate(g);
        out += '\n';
    }
    return out;
}

Circuit parse_circuit(std::istream &in) {
    Circuit c;
    bool have_header = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) {
            continue;
        }
        const std::string where = "line " + std::to_string(lineno);
        if (!have_header) {
            if (head != "QUBITS" || !(ls >> c.n_qubits)) {
                throw FormatError(where + ": expected 'QUBITS n' header");
            }
            if (c.n_qubits < 1 || c.n_qubits > kMaxQubits) {
                throw CapacityError(where + ": qubit count must be in [1, " +
                                    std::to_string(kMaxQubits) + "]");
            }
            have_header = true;
            continue;
        }
        Gate g;
        g.kind = parse_kind(head, lineno);
        std::string angle;
        if (!(ls >> angle)) {
            throw FormatError(where + ": missing angle field");
        }
        if (g.has_angle()) {
            std::size_t used = 0;
            try {
                g.angle = std::stod(angle, &used);
            } catch (const std::exception &) {
                used = 0;
            }
            if (used != angle.size()) {
                throw FormatError(where + ": bad angle '" + angle + "'");
            }
        } else if (angle != "-") {
            throw FormatError(where + ": " + head + " takes no angle, use '-'");
        }
        if (!(ls >> g.qubit0) || (g.is_two_qubit() && !(ls >> g.qubit1))) {
            throw FormatError(where + ": missing qubit index");
        }
        std::string extra;
        if (ls >> extra) {
            throw FormatError(where + ": trailing token '" + extra + "'");
        }
        validate_gate(g, c.n_qubits);
        c.gates.push_back(g);
    }
    if (!have_header) {
        throw FormatError("circuit text has no 'QUBITS n' header");
    }
    return c;
}

Circuit parse_circuit(const std::string &text) {
    std::istringstream in(text);
    return parse_circuit(in);
}

} // namespace qres
