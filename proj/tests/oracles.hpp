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

// Reference implementations used only by tests. Each one computes its
// answer along a different route than the library code it checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qres/rng.hpp"
#include "qres/statevector.hpp"
#include "qres/tensor.hpp"

namespace qres::oracle {

using Matrix = std::vector<std::vector<Complex>>;

inline Matrix identity(std::size_t n) {
    Matrix m(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i < n; ++i) {
        m[i][i] = 1.0;
    }
    return m;
}

inline Matrix kron(const Matrix &a, const Matrix &b) {
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    Matrix m(na * nb, std::vector<Complex>(na * nb));
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j)
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l)
                    m[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
    return m;
}

inline Matrix add(const Matrix &a, const Matrix &b, Complex sb = 1.0,
                  Complex sa = 1.0) {
    Matrix m = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            m[i][j] = sa * a[i][j] + sb * b[i][j];
    return m;
}

inline Matrix matmul(const Matrix &a, const Matrix &b) {
    const std::size_t n = a.size();
    Matrix m(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j)
                m[i][j] += a[i][k] * b[k][j];
    return m;
}

inline Matrix dagger(const Matrix &a) {
    Matrix m = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            m[i][j] = std::conj(a[j][i]);
    return m;
}

/// Embeds single-qubit operators: ops[q] acts on qubit q (identity if
/// empty). Qubit 0 is the least-significant bit, i.e. the rightmost factor.
inline Matrix embed(const std::vector<Matrix> &ops) {
    Matrix m = identity(1);
    for (std::size_t q = ops.size(); q-- > 0;) {
        m = kron(m, ops[q].empty() ? identity(2) : ops[q]);
    }
    return m;
}

inline Matrix single(std::size_t n, std::size_t q, const Matrix &u) {
    std::vector<Matrix> ops(n);
    ops[q] = u;
    return embed(ops);
}

inline Matrix gate_2x2(GateKind kind, double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const double r = 1.0 / std::sqrt(2.0);
    switch (kind) {
    case GateKind::H:
        return {{r, r}, {r, -r}};
    case GateKind::RY:
        return {{c, -s}, {s, c}};
    case GateKind::RZ:
        return {{std::polar(1.0, -theta / 2), 0.0},
                {0.0, std::polar(1.0, theta / 2)}};
    default:
        return {};
    }
}

/// Full 2^n x 2^n unitary of `g`, built from Kronecker products.
inline Matrix dense_gate(const Gate &g, std::size_t n) {
    const Matrix P0 = {{1.0, 0.0}, {0.0, 0.0}};
    const Matrix P1 = {{0.0, 0.0}, {0.0, 1.0}};
    const Matrix X = {{0.0, 1.0}, {1.0, 0.0}};
    const Matrix Z = {{1.0, 0.0}, {0.0, -1.0}};
    switch (g.kind) {
    case GateKind::H:
    case GateKind::RY:
    case GateKind::RZ:
        return single(n, g.qubit0, gate_2x2(g.kind, g.angle));
    case GateKind::CX: {
        std::vector<Matrix> off(n), on(n);
        off[g.qubit0] = P0;
        on[g.qubit0] = P1;
        on[g.qubit1] = X;
        return add(embed(off), embed(on));
    }
    case GateKind::ZZ: {
        // exp(-i t/2 Z.Z) = cos(t/2) I - i sin(t/2) Z.Z
        std::vector<Matrix> zz(n);
        zz[g.qubit0] = Z;
        zz[g.qubit1] = Z;
        return add(identity(std::size_t{1} << n), embed(zz),
                   Complex(0.0, -std::sin(g.angle / 2)), std::cos(g.angle / 2));
    }
    }
    return {};
}

inline std::vector<Complex> apply(const Matrix &m, std::span<const Complex> v) {
    std::vector<Complex> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            out[i] += m[i][j] * v[j];
    return out;
}

inline std::vector<Complex> random_state(std::size_t n, Rng &rng) {
    std::vector<Complex> v(std::size_t{1} << n);
    double norm = 0.0;
    for (Complex &a : v) {
        a = {rng.normal(), rng.normal()};
        norm += std::norm(a);
    }
    for (Complex &a : v) {
        a /= std::sqrt(norm);
    }
    return v;
}

inline Gate random_gate(std::size_t n, Rng &rng) {
    const auto angle = rng.uniform(-2 * 3.141592653589793, 2 * 3.141592653589793);
    const auto q0 = static_cast<std::size_t>(rng.below(n));
    std::size_t q1 = q0;
    if (n > 1) {
        while (q1 == q0) {
            q1 = static_cast<std::size_t>(rng.below(n));
        }
    }
    const auto pick = rng.below(n > 1 ? 5 : 3);
    switch (pick) {
    case 0:
        return Gate::h(q0);
    case 1:
        return Gate::ry(q0, angle);
    case 2:
        return Gate::rz(q0, angle);
    case 3:
        return Gate::cx(q0, q1);
    default:
        return Gate::zz(q0, q1, angle);
    }
}

/// Central difference of f at x along coordinate i.
inline double central_difference(const std::function<double(std::span<const double>)> &f,
                                 std::vector<double> x, std::size_t i,
                                 double h = 1e-6) {
    const double x0 = x[i];
    x[i] = x0 + h;
    const double plus = f(x);
    x[i] = x0 - h;
    const double minus = f(x);
    return (plus - minus) / (2 * h);
}

/// P(score_pos > score_neg) + 0.5 P(equal), by exhaustive pair counting.
inline double mann_whitney_auc(std::span<const double> scores,
                               std::span<const int> labels) {
    double wins = 0.0;
    double pairs = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            pairs += 1.0;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / pairs;
}

/// Nested-loop zero-padded cross-correlation, bounds checked per tap.
inline Tensor naive_conv3d(const Tensor &x, const Tensor &w, const Tensor &b,
                           std::size_t stride) {
    const std::size_t N = x.dim(0), Ci = x.dim(1), D = x.dim(2), H = x.dim(3),
                      W = x.dim(4);
    const std::size_t Co = w.dim(0), k = w.dim(2);
    const long pad = static_cast<long>(k / 2);
    const std::size_t OD = (D + 2 * (k / 2) - k) / stride + 1;
    const std::size_t OH = (H + 2 * (k / 2) - k) / stride + 1;
    const std::size_t OW = (W + 2 * (k / 2) - k) / stride + 1;
    Tensor y({N, Co, OD, OH, OW});
    auto xi = [&](std::size_t n, std::size_t c, long z, long yy, long xx) {
        if (z < 0 || yy < 0 || xx < 0 || z >= static_cast<long>(D) ||
            yy >= static_cast<long>(H) || xx >= static_cast<long>(W))
            return 0.0;
        return x[(((n * Ci + c) * D + z) * H + yy) * W + xx];
    };
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t co = 0; co < Co; ++co)
            for (std::size_t oz = 0; oz < OD; ++oz)
                for (std::size_t oy = 0; oy < OH; ++oy)
                    for (std::size_t ox = 0; ox < OW; ++ox) {
                        double acc = b[co];
                        for (std::size_t ci = 0; ci < Ci; ++ci)
                            for (std::size_t a = 0; a < k; ++a)
                                for (std::size_t bb = 0; bb < k; ++bb)
                                    for (std::size_t c = 0; c < k; ++c)
                                        acc += w[(((co * Ci + ci) * k + a) * k + bb) * k + c] *
                                               xi(n, ci,
                                                  static_cast<long>(oz * stride + a) - pad,
                                                  static_cast<long>(oy * stride + bb) - pad,
                                                  static_cast<long>(ox * stride + c) - pad);
                        y[(((n * Co + co) * OD + oz) * OH + oy) * OW + ox] = acc;
                    }
    return y;
}

inline void fill_uniform(Tensor &t, Rng &rng, double lo = -1.0, double hi = 1.0) {
    for (double &v : t.data()) {
        v = rng.uniform(lo, hi);
    }
}

/// |a - b| <= rel * max(|a|, |b|) + abs_floor
inline bool close_rel(double a, double b, double rel, double abs_floor) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

} // namespace qres::oracle
