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
 * Continuous transport: exact two-level hop rotations, pulse-schedule
 * interference, and hopping-Hamiltonian propagation (sector-restricted
 * eigendecomposition or Trotter products of hop rotations).
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fock_core.hpp"
#include "hamiltonian.hpp"
#include "protocols.hpp"

namespace exlab {

/// exp(i theta (f†_j f_i + f†_i f_j)); theta = pi/2 transfers the particle completely.
struct HopPulse {
    ModeIndex i;
    ModeIndex j;
    double theta = std::numbers::pi / 2;

    HopPulse() = default;
    HopPulse(int a, int b, double t) : i(a), j(b), theta(t) {}

    [[nodiscard]] std::string to_string() const {
        return "R(" + std::to_string(i.value) + "," + std::to_string(j.value) + ";" +
               std::to_string(theta) + ")";
    }
};

using Schedule = std::vector<HopPulse>;

/// Largest particle-number sector exact_evolve will diagonalize.
inline constexpr std::uint64_t kMaxSectorDimension = 4096;

class SectorTooLarge : public UsageError {
  public:
    using UsageError::UsageError;
};

/**
 * Basis pairs with exactly one of (i, j) occupied rotate as
 * cos(theta) |x> + i s sin(theta) |x'>, s the hop sign; the empty and doubly
 * occupied pairs are fixed. When `ledger` is given, the sign classes of the
 * transferred components are recorded.
 */
inline StateVector hop_rotation(const HopPulse &p, const StateVector &psi,
                                SignLedger *ledger = nullptr, int ring_modes = 0) {
    const auto &layout = psi.layout();
    detail::check_hop(layout, Hop(p.i, p.j));
    const double c = std::cos(p.theta);
    const double s = std::sin(p.theta);
    const std::uint64_t pair = p.i.mask() | p.j.mask();
    std::vector<StateVector::Entry> out;
    out.reserve(2 * psi.size());
    std::vector<std::pair<int, int>> classes;
    for (const auto &[idx, a] : psi.entries()) {
        const std::uint64_t occ = idx & pair;
        if (occ == 0 || occ == pair) {
            out.emplace_back(idx, a);
            continue;
        }
        const Hop h = (idx & p.i.mask()) ? Hop(p.i, p.j) : Hop(p.j, p.i);
        detail::HopOutcome r;
        detail::hop_on_index(layout, h, idx, r);
        out.emplace_back(idx, c * a);
        out.emplace_back(r.index, Amplitude{0.0, r.sign * s} * a);
        const std::pair<int, int> cls{r.sign, r.interval_parity};
        if (std::find(classes.begin(), classes.end(), cls) == classes.end()) {
            classes.push_back(cls);
        }
    }
    if (ledger != nullptr) {
        const std::size_t step = ++ledger->steps;
        const Hop h(p.i, p.j);
        for (const auto &[sign, parity] : classes) {
            ledger->entries.push_back(
                SignLedgerEntry{step, p.to_string(), p.i, p.j, sign, parity, is_wrap_hop(h, ring_modes)});
        }
    }
    return {layout, std::move(out)};
}

inline HopRun apply_schedule(const Schedule &schedule, const StateVector &psi, int ring_modes = 0) {
    HopRun run{psi, {}};
    for (const auto &p : schedule) {
        run.state = hop_rotation(p, run.state, &run.ledger, ring_modes);
    }
    return run;
}

/**
 * Two pulse schedules from a shared basis state. With equal numbers of
 * full-transfer pulses per branch the i-per-transfer factors are common and
 * drop out of the relative phase.
 */
inline ExperimentResult run_pulse_interference(const Schedule &schedule0, const Schedule &schedule1,
                                               const StateVector &initial, int ring_modes = 0) {
    auto describe = [](const Schedule &s) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &p : s) {
            arr.push_back({{"from", p.i.value}, {"to", p.j.value}, {"theta", p.theta}});
        }
        return arr;
    };
    nlohmann::json params = {{"modes", initial.layout().modes()},
                             {"initial", initial.to_string()},
                             {"schedules", {describe(schedule0), describe(schedule1)}}};
    auto run0 = apply_schedule(schedule0, initial, ring_modes);
    auto run1 = apply_schedule(schedule1, initial, ring_modes);
    return make_result("pulse", std::move(params),
                       {BranchOutcome{"schedule0", std::move(run0.state), std::move(run0.ledger), true},
                        BranchOutcome{"schedule1", std::move(run1.state), std::move(run1.ledger), true}});
}

inline ExperimentResult run_pulse_interference(const Schedule &schedule0, const Schedule &schedule1,
                                               const RegisterLayout &layout,
                                               const FockBasisState &initial, int ring_modes = 0) {
    return run_pulse_interference(schedule0, schedule1, StateVector::basis(layout, initial),
                                  ring_modes);
}

/// Pulsed version of the half-swap: forward (1,2),(3,4) against backward (1,4),(3,2).
inline ExperimentResult experiment_pulsed_half_swap(const RegisterLayout &layout,
                                                    double theta = std::numbers::pi / 2) {
    detail::require_four_modes(layout, "pulsed half-swap");
    auto r = run_pulse_interference({{1, 2, theta}, {3, 4, theta}}, {{1, 4, theta}, {3, 2, theta}},
                                    layout, parse_ket("1010"), 4);
    r.params["theta"] = theta;
    return r;
}

namespace detail {

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

/// Real symmetric hopping matrix on one particle-number sector.
inline Eigen::MatrixXd sector_hamiltonian(const RegisterLayout &layout, const HamiltonianSpec &h,
                                          const std::vector<FockBasisState> &basis) {
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    auto position = [&](std::uint64_t bits) {
        auto it = std::lower_bound(basis.begin(), basis.end(), bits,
                                   [](const FockBasisState &s, std::uint64_t b) { return s.bits < b; });
        return static_cast<Eigen::Index>(it - basis.begin());
    };
    for (Eigen::Index col = 0; col < dim; ++col) {
        const std::uint64_t x = basis[static_cast<std::size_t>(col)].bits;
        for (const auto &e : h.edges) {
            for (const Hop hop : {Hop(e.i, e.j), Hop(e.j, e.i)}) {
                HopOutcome r;
                if (hop_on_index(layout, hop, x, r)) {
                    m(position(r.index), col) -= e.coupling * r.sign;
                }
            }
        }
    }
    return m;
}

inline void check_edges(const RegisterLayout &layout, const HamiltonianSpec &h) {
    for (const auto &e : h.edges) {
        check_hop(layout, Hop(e.i, e.j));
        if (!std::isfinite(e.coupling)) {
            throw UsageError("non-finite coupling");
        }
    }
}

} // namespace detail

/**
 * exp(-i H t) psi, diagonalizing H separately on every particle-number
 * sector that psi touches. Throws SectorTooLarge above kMaxSectorDimension.
 */
inline StateVector exact_evolve(const HamiltonianSpec &h, double t, const StateVector &psi) {
    const auto &layout = psi.layout();
    detail::check_edges(layout, h);
    std::vector<StateVector::Entry> out;
    for (int k : psi.particle_counts()) {
        const std::uint64_t dim = detail::binomial(layout.modes(), k);
        if (dim > kMaxSectorDimension) {
            throw SectorTooLarge("sector with " + std::to_string(k) + " particles on " +
                                 std::to_string(layout.modes()) + " modes has dimension " +
                                 std::to_string(dim) + " > " + std::to_string(kMaxSectorDimension));
        }
        const auto basis = enumerate_sector(layout.modes(), k);
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
        for (std::size_t p = 0; p < basis.size(); ++p) {
            v(static_cast<Eigen::Index>(p)) = psi.amplitude(basis[p].bits);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::sector_hamiltonian(layout, h, basis));
        const Eigen::MatrixXcd vecs = es.eigenvectors().cast<std::complex<double>>();
        Eigen::VectorXcd coeff = vecs.adjoint() * v;
        for (Eigen::Index q = 0; q < coeff.size(); ++q) {
            coeff(q) *= std::exp(std::complex<double>{0.0, -es.eigenvalues()(q) * t});
        }
        const Eigen::VectorXcd w = vecs * coeff;
        for (std::size_t p = 0; p < basis.size(); ++p) {
            out.emplace_back(basis[p].bits, w(static_cast<Eigen::Index>(p)));
        }
    }
    return {layout, std::move(out)};
}

/// Lie (order 1) or symmetric Strang (order 2) product of hop rotations.
inline StateVector trotter_evolve(const HamiltonianSpec &h, double t, int steps, int order,
                                  const StateVector &psi) {
    if (steps < 1) {
        throw UsageError("Trotter step count must be at least 1");
    }
    if (order != 1 && order != 2) {
        throw UsageError("Trotter order must be 1 or 2");
    }
    detail::check_edges(psi.layout(), h);
    const double dt = t / steps;
    StateVector state = psi;
    const auto &edges = h.edges;
    for (int s = 0; s < steps; ++s) {
        if (order == 1 || edges.size() < 2) {
            for (const auto &e : edges) {
                state = hop_rotation({e.i.value, e.j.value, e.coupling * dt}, state);
            }
            continue;
        }
        const std::size_t last = edges.size() - 1;
        for (std::size_t q = 0; q < last; ++q) {
            state = hop_rotation({edges[q].i.value, edges[q].j.value, 0.5 * edges[q].coupling * dt}, state);
        }
        state = hop_rotation({edges[last].i.value, edges[last].j.value, edges[last].coupling * dt}, state);
        for (std::size_t q = last; q-- > 0;) {
            state = hop_rotation({edges[q].i.value, edges[q].j.value, 0.5 * edges[q].coupling * dt}, state);
        }
    }
    return state;
}

} // namespace exlab
