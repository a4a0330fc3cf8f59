// Copyright 2026 The Exchange Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Dense-matrix reference implementation. Ladder operators are assembled
 * as explicit Kronecker products (string factor, local raise/lower,
 * identities) straight from the statistics matrix; nothing here shares
 * code with the bitmask kernels it is used to check.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fock_core.hpp"
#include "hamiltonian.hpp"

namespace exlab::oracle {

using DenseMatrix =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using DenseVector = Eigen::VectorXcd;

inline constexpr int kDefaultMaxModes = 12;
inline constexpr const char *kMaxModesEnv = "EXCHANGE_LAB_ORACLE_MAX_MODES";

class CapExceeded : public UsageError {
  public:
    using UsageError::UsageError;
};

/// Cap on dense register size; EXCHANGE_LAB_ORACLE_MAX_MODES overrides it.
inline int max_modes() {
    if (const char *env = std::getenv(kMaxModesEnv); env != nullptr && *env != '\0') {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != nullptr && *end == '\0' && v >= 1 && v <= kMaxFastModes) {
            return static_cast<int>(v);
        }
        throw UsageError(std::string(kMaxModesEnv) + " must be an integer in [1, " +
                         std::to_string(kMaxFastModes) + "]");
    }
    return kDefaultMaxModes;
}

inline void require_cap(int modes) {
    const int cap = max_modes();
    if (modes > cap) {
        throw CapExceeded("oracle supports at most " + std::to_string(cap) + " modes (got " +
                          std::to_string(modes) + "); set " + kMaxModesEnv + " to raise the cap");
    }
}

inline DenseMatrix kron(const DenseMatrix &a, const DenseMatrix &b) {
    DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        }
    }
    return out;
}

/**
 * Mode 1 is the least significant tensor factor, so the product is
 * F_M (x) ... (x) F_1 and column x is the basis state with index x.
 */
inline DenseMatrix dense_ladder(const RegisterLayout &layout, ModeIndex mode, LadderKind kind) {
    require_cap(layout.modes());
    layout.check(mode);
    const int target_species = layout.species_of(mode);

    DenseMatrix identity = DenseMatrix::Identity(2, 2);
    DenseMatrix parity = DenseMatrix::Zero(2, 2);
    parity(0, 0) = 1.0;
    parity(1, 1) = -1.0;
    DenseMatrix local = DenseMatrix::Zero(2, 2);
    if (kind == LadderKind::annihilate) {
        local(0, 1) = 1.0;
    } else {
        local(1, 0) = 1.0;
    }

    DenseMatrix out = DenseMatrix::Identity(1, 1);
    for (int q = layout.modes(); q >= 1; --q) {
        const DenseMatrix *factor = &identity;
        if (q == mode.value) {
            factor = &local;
        } else if (q < mode.value &&
                   layout.statistics().at(layout.species_of(ModeIndex(q)), target_species) ==
                       Exchange::anticommute) {
            factor = &parity;
        }
        out = kron(out, *factor);
    }
    return out;
}

inline DenseMatrix dense_ladder(const RegisterLayout &layout, const LadderOp &op) {
    return dense_ladder(layout, op.mode, op.kind);
}

/// Matrix product in written order, so the rightmost operator acts first.
inline DenseMatrix dense_string(const RegisterLayout &layout, const OperatorString &s) {
    require_cap(layout.modes());
    const auto dim = static_cast<Eigen::Index>(layout.dimension());
    DenseMatrix out = DenseMatrix::Identity(dim, dim);
    for (const auto &op : s.ops) {
        out = out * dense_ladder(layout, op);
    }
    return out;
}

/// Same as dense_string(s) * v without forming the product matrix.
inline DenseVector dense_apply(const RegisterLayout &layout, const OperatorString &s,
                               DenseVector v) {
    require_cap(layout.modes());
    for (auto it = s.ops.rbegin(); it != s.ops.rend(); ++it) {
        v = dense_ladder(layout, *it) * v;
    }
    return v;
}

inline DenseVector to_dense(const StateVector &psi) {
    require_cap(psi.layout().modes());
    DenseVector v = DenseVector::Zero(static_cast<Eigen::Index>(psi.layout().dimension()));
    for (const auto &[idx, a] : psi.entries()) {
        v(static_cast<Eigen::Index>(idx)) = a;
    }
    return v;
}

inline StateVector from_dense(const RegisterLayout &layout, const DenseVector &v) {
    std::vector<StateVector::Entry> entries;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i) != std::complex<double>{}) {
            entries.emplace_back(static_cast<std::uint64_t>(i), v(i));
        }
    }
    return {layout, std::move(entries)};
}

/// max |fast - dense| over all basis amplitudes.
inline double deviation(const StateVector &fast, const DenseVector &dense) {
    const DenseVector f = to_dense(fast);
    return (f - dense).cwiseAbs().maxCoeff();
}

inline double max_abs(const DenseMatrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// exp(-i H) for Hermitian H via eigendecomposition. Rejects non-Hermitian input.
inline DenseMatrix dense_expm_hermitian(const DenseMatrix &h) {
    if (h.rows() != h.cols()) {
        throw UsageError("matrix exponential needs a square matrix");
    }
    if (max_abs(h - h.adjoint()) > 1e-12) {
        throw UsageError("matrix is not Hermitian within 1e-12");
    }
    if (h.rows() == 0) {
        return h;
    }
    const Eigen::MatrixXcd hc = h;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hc);
    const Eigen::VectorXcd phases =
        (es.eigenvalues().cast<std::complex<double>>() * std::complex<double>{0.0, -1.0})
            .array()
            .exp()
            .matrix();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Full-register -sum J (f†_j f_i + f†_i f_j) built from dense ladders.
inline DenseMatrix dense_hopping_hamiltonian(const RegisterLayout &layout,
                                             const HamiltonianSpec &h) {
    require_cap(layout.modes());
    const auto dim = static_cast<Eigen::Index>(layout.dimension());
    DenseMatrix out = DenseMatrix::Zero(dim, dim);
    for (const auto &e : h.edges) {
        const DenseMatrix term = dense_ladder(layout, e.j, LadderKind::create) *
                                 dense_ladder(layout, e.i, LadderKind::annihilate);
        out -= e.coupling * (term + term.adjoint());
    }
    return out;
}

struct CrossCheckReport {
    int modes = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    double max_deviation = 0.0;
    int nonzero_results = 0; ///< trials whose string did not annihilate the state
    std::string worst_case;

    [[nodiscard]] bool passed() const { return max_deviation <= 1e-12; }
};

inline StateVector random_state(const RegisterLayout &layout, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss;
    std::vector<StateVector::Entry> entries;
    const std::uint64_t dim = layout.dimension();
    if (layout.modes() <= 8) {
        for (std::uint64_t i = 0; i < dim; ++i) {
            entries.emplace_back(i, Amplitude{gauss(rng), gauss(rng)});
        }
    } else {
        std::uniform_int_distribution<std::uint64_t> pick(0, dim - 1);
        for (int t = 0; t < 64; ++t) {
            entries.emplace_back(pick(rng), Amplitude{gauss(rng), gauss(rng)});
        }
    }
    return StateVector(layout, std::move(entries)).normalized();
}

inline OperatorString random_string(const RegisterLayout &layout, std::mt19937_64 &rng,
                                    int max_length = 8) {
    std::uniform_int_distribution<int> len(0, max_length);
    std::uniform_int_distribution<int> mode(1, layout.modes());
    std::bernoulli_distribution coin(0.5);
    OperatorString s;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
        s.ops.push_back({coin(rng) ? LadderKind::create : LadderKind::annihilate, ModeIndex(mode(rng))});
    }
    return s;
}

/// Random strings (length <= 8) on random normalized states, fast path vs dense.
inline CrossCheckReport cross_check(const RegisterLayout &layout, int trials, std::uint64_t seed) {
    require_cap(layout.modes());
    CrossCheckReport report;
    report.modes = layout.modes();
    report.trials = std::max(trials, 0);
    report.seed = seed;
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        const StateVector psi = random_state(layout, rng);
        const OperatorString s = random_string(layout, rng);
        const StateVector fast = apply_operator_string(s, psi);
        const double dev = deviation(fast, dense_apply(layout, s, to_dense(psi)));
        if (!fast.is_zero()) {
            ++report.nonzero_results;
        }
        if (dev > report.max_deviation || report.worst_case.empty()) {
            report.max_deviation = std::max(report.max_deviation, dev);
            report.worst_case = "trial " + std::to_string(t) + ": " + s.to_string();
        }
    }
    return report;
}

inline CrossCheckReport cross_check(int modes, int trials, std::uint64_t seed) {
    return cross_check(RegisterLayout::fermions(modes), trials, seed);
}

/// World-line bookkeeping for a hop sequence, independent of any sign rule.
struct WorldlineResult {
    FockBasisState final_state;
    bool closed = false; ///< final occupation equals the initial one
    int parity = +1;     ///< sign of the label permutation (closed loops only)
};

/**
 * Labels the particles of `initial` in ascending mode order, moves labels
 * along each hop and returns the sign of the resulting label permutation.
 * Throws on an illegal hop (empty source or occupied target).
 */
inline WorldlineResult worldline_parity(const FockBasisState &initial, const HopSequence &hops) {
    const int m = initial.modes;
    std::vector<int> label(static_cast<std::size_t>(m) + 1, -1);
    int n = 0;
    for (int q = 1; q <= m; ++q) {
        if ((initial.bits >> (q - 1)) & 1U) {
            label[static_cast<std::size_t>(q)] = n++;
        }
    }
    const std::vector<int> start = label;
    for (const auto &h : hops) {
        auto &src = label.at(static_cast<std::size_t>(h.from.value));
        auto &dst = label.at(static_cast<std::size_t>(h.to.value));
        if (src < 0 || dst >= 0) {
            throw UsageError("illegal hop " + h.to_string() + " in world-line tracking");
        }
        dst = src;
        src = -1;
    }
    WorldlineResult r;
    r.final_state = {0, m};
    for (int q = 1; q <= m; ++q) {
        if (label[static_cast<std::size_t>(q)] >= 0) {
            r.final_state.bits |= std::uint64_t{1} << (q - 1);
        }
    }
    r.closed = r.final_state.bits == initial.bits;
    if (!r.closed) {
        return r;
    }
    // perm[a] = label now sitting where label a started.
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int q = 1; q <= m; ++q) {
        if (start[static_cast<std::size_t>(q)] >= 0) {
            perm[static_cast<std::size_t>(start[static_cast<std::size_t>(q)])] =
                label[static_cast<std::size_t>(q)];
        }
    }
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    int cycles = 0;
    for (int a = 0; a < n; ++a) {
        if (seen[static_cast<std::size_t>(a)]) {
            continue;
        }
        ++cycles;
        for (int b = a; !seen[static_cast<std::size_t>(b)]; b = perm[static_cast<std::size_t>(b)]) {
            seen[static_cast<std::size_t>(b)] = true;
        }
    }
    r.parity = ((n - cycles) % 2 == 0) ? +1 : -1;
    return r;
}

} // namespace exlab::oracle
