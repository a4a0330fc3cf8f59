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
 * Ancilla-controlled interference experiments.
 *
 * A control qubit prepared in (|0> + |1>)/sqrt(2) selects which of two
 * programs acts on a shared register state. Because the initial state is a
 * product, the controlled evolution is carried exactly by the two branch
 * vectors psi0 and psi1; the ancilla fringe is fixed by <psi0|psi1>.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fock_core.hpp"

namespace exlab {

/// Phase is reported only above this visibility.
inline constexpr double kVisibilityFloor = 1e-9;

enum class EvaluationMode { literal, sequential };

inline const char *to_string(EvaluationMode m) {
    return m == EvaluationMode::literal ? "literal" : "sequential";
}

struct BranchProgram {
    std::string label;
    std::variant<HopSequence, OperatorString> steps;
};

struct ControlledExperiment {
    std::string name;
    RegisterLayout layout;
    FockBasisState initial;
    BranchProgram branch0;
    BranchProgram branch1;
    EvaluationMode mode = EvaluationMode::sequential;
    int ring_modes = 0; ///< > 0 marks the register as a ring for wrap flags
    nlohmann::json params = nlohmann::json::object();
};

struct BranchOutcome {
    std::string label;
    StateVector state{RegisterLayout::fermions(1)};
    SignLedger ledger;
    bool has_ledger = false;
};

struct PhaseReading {
    std::optional<double> phase; ///< radians in (-pi, pi]; empty below kVisibilityFloor
    double visibility = 0.0;
    Amplitude overlap{};
};

struct AncillaProbabilities {
    double x_plus = 0.5;
    double y_plus = 0.5;
};

struct ExperimentResult {
    std::string experiment;
    nlohmann::json params = nlohmann::json::object();
    PhaseReading reading;
    std::array<BranchOutcome, 2> branches;
    AncillaProbabilities probabilities;
    bool valid = true;
    std::string invalid_reason;
    std::optional<std::uint64_t> seed;
    std::string version = kVersion;

    [[nodiscard]] std::optional<double> phase() const { return reading.phase; }
    [[nodiscard]] double visibility() const { return reading.visibility; }
};

/// Wraps any angle into (-pi, pi].
inline double wrap_phase(double a) {
    constexpr double pi = std::numbers::pi;
    double r = std::remainder(a, 2.0 * pi);
    if (r <= -pi) {
        r += 2.0 * pi;
    }
    return r;
}

/// V = |<psi0|psi1>| and phi = arg <psi0|psi1>. Inputs must be normalized.
inline PhaseReading extract_phase(const StateVector &psi0, const StateVector &psi1) {
    require_same_layout(psi0, psi1);
    for (const auto *v : {&psi0, &psi1}) {
        if (std::abs(v->norm() - 1.0) > 1e-10) {
            throw UsageError("extract_phase needs normalized branch vectors (norm " +
                             std::to_string(v->norm()) + ")");
        }
    }
    PhaseReading r;
    r.overlap = inner_product(psi0, psi1);
    r.visibility = std::min(1.0, std::abs(r.overlap));
    if (r.visibility > kVisibilityFloor) {
        r.phase = wrap_phase(std::arg(r.overlap));
    }
    return r;
}

/// Assembles a result from two evaluated branches; zero branches make it invalid.
inline ExperimentResult make_result(std::string name, nlohmann::json params,
                                    std::array<BranchOutcome, 2> branches) {
    ExperimentResult res;
    res.experiment = std::move(name);
    res.params = std::move(params);
    res.branches = std::move(branches);
    for (const auto &b : res.branches) {
        if (b.state.is_zero()) {
            res.valid = false;
            res.invalid_reason = "branch '" + b.label + "' annihilated the register state";
            return res;
        }
    }
    res.reading =
        extract_phase(res.branches[0].state.normalized(), res.branches[1].state.normalized());
    res.probabilities.x_plus = 0.5 * (1.0 + res.reading.overlap.real());
    res.probabilities.y_plus = 0.5 * (1.0 + res.reading.overlap.imag());
    return res;
}

inline BranchOutcome evaluate_branch(const BranchProgram &program, const StateVector &initial,
                                     EvaluationMode mode, int ring_modes) {
    BranchOutcome out{program.label, initial, {}, false};
    if (mode == EvaluationMode::sequential) {
        const auto *hops = std::get_if<HopSequence>(&program.steps);
        if (hops == nullptr) {
            throw UsageError("branch '" + program.label +
                             "' is an operator string; sequential evaluation needs hops");
        }
        auto run = apply_hop_sequence(*hops, initial, ring_modes);
        out.state = std::move(run.state);
        out.ledger = std::move(run.ledger);
        out.has_ledger = true;
        return out;
    }
    const OperatorString s = std::visit(
        [](const auto &steps) -> OperatorString {
            if constexpr (std::is_same_v<std::decay_t<decltype(steps)>, HopSequence>) {
                return as_string(steps);
            } else {
                return steps;
            }
        },
        program.steps);
    out.state = apply_operator_string(s, initial);
    return out;
}

inline ExperimentResult run_controlled(const ControlledExperiment &e) {
    const StateVector initial = StateVector::basis(e.layout, e.initial);
    nlohmann::json params = e.params;
    params["mode"] = to_string(e.mode);
    params["modes"] = e.layout.modes();
    params["initial"] = to_ket(e.initial);
    return make_result(e.name, std::move(params),
                       {evaluate_branch(e.branch0, initial, e.mode, e.ring_modes),
                        evaluate_branch(e.branch1, initial, e.mode, e.ring_modes)});
}

namespace detail {
inline void require_four_modes(const RegisterLayout &layout, const char *what) {
    if (layout.modes() != 4) {
        throw UsageError(std::string(what) + " is defined on a 4-mode register, got " +
                         std::to_string(layout.modes()));
    }
}
} // namespace detail

/// Swap step one: f†4 f3 f†2 f1, taking |1010> to |0101>.
inline OperatorString swap_step_one() { return {create(4), annihilate(3), create(2), annihilate(1)}; }

/// Swap step two, written as the mirror of step one: f4 f†3 f2 f†1 on |0101>.
inline OperatorString swap_step_two() { return {annihilate(4), create(3), annihilate(2), create(1)}; }

/// Half-swap branches as literal strings: counterclockwise f†4 f3 f†2 f1, clockwise f†2 f3 f†4 f1.
inline OperatorString half_swap_counterclockwise() { return swap_step_one(); }
inline OperatorString half_swap_clockwise() {
    return {create(2), annihilate(3), create(4), annihilate(1)};
}

/**
 * Controlled full swap of two particles on the 4-mode ring from |1010>.
 * Branch 1 in sequential mode hops (1->2),(3->4),(2->3),(4->1); in literal
 * mode it is the operator product step_two * step_one.
 */
inline ExperimentResult experiment_full_controlled_swap(
    const RegisterLayout &layout, EvaluationMode mode = EvaluationMode::sequential) {
    detail::require_four_modes(layout, "full controlled swap");
    ControlledExperiment e{"full-swap", layout, parse_ket("1010"), {}, {}, mode, 4, {}};
    if (mode == EvaluationMode::sequential) {
        e.branch0 = {"identity", HopSequence{}};
        e.branch1 = {"swap", HopSequence{{1, 2}, {3, 4}, {2, 3}, {4, 1}}};
    } else {
        e.branch0 = {"identity", OperatorString{}};
        e.branch1 = {"swap", swap_step_two().then_left_of(swap_step_one())};
    }
    return run_controlled(e);
}

/// Half swaps in both directions from |1010>; both branches end at |0101>.
inline ExperimentResult experiment_half_swap_interference(
    const RegisterLayout &layout, EvaluationMode mode = EvaluationMode::sequential) {
    detail::require_four_modes(layout, "half-swap interference");
    ControlledExperiment e{"half-swap", layout, parse_ket("1010"), {}, {}, mode, 4, {}};
    if (mode == EvaluationMode::sequential) {
        e.branch0 = {"forward", HopSequence{{1, 2}, {3, 4}}};
        e.branch1 = {"backward", HopSequence{{1, 4}, {3, 2}}};
    } else {
        e.branch0 = {"forward", half_swap_counterclockwise()};
        e.branch1 = {"backward", half_swap_clockwise()};
    }
    return run_controlled(e);
}

/// How far the ring branches rotate.
enum class RingTurn {
    single_step,   ///< every particle moves to its neighbouring site once
    full_revolution ///< 2n single-site steps, every particle returns to its start
};

inline const char *to_string(RingTurn t) {
    return t == RingTurn::single_step ? "step" : "revolution";
}

/// n particles on 2n ring modes, initially on the odd modes 1, 3, ..., 2n-1.
struct RingConfig {
    int n = 2;
    RingTurn turn = RingTurn::single_step;

    [[nodiscard]] int modes() const { return 2 * n; }

    [[nodiscard]] FockBasisState initial() const {
        FockBasisState s{0, modes()};
        for (int q = 1; q <= modes(); q += 2) {
            s.bits |= ModeIndex(q).mask();
        }
        return s;
    }
};

/**
 * One rigid rotation step of every particle by +1 (forward) or -1
 * (backward) sites around a ring of `ring` modes. Hops are listed in
 * ascending order of their source mode.
 */
inline HopSequence ring_step(std::uint64_t occupation, int ring, bool forward) {
    HopSequence hops;
    for (int q = 1; q <= ring; ++q) {
        if (occupation & ModeIndex(q).mask()) {
            const int target = forward ? (q == ring ? 1 : q + 1) : (q == 1 ? ring : q - 1);
            hops.emplace_back(q, target);
        }
    }
    return hops;
}

inline HopSequence ring_schedule(const RingConfig &cfg, bool forward) {
    const int ring = cfg.modes();
    const int steps = cfg.turn == RingTurn::single_step ? 1 : ring;
    HopSequence all;
    std::uint64_t occ = cfg.initial().bits;
    for (int s = 0; s < steps; ++s) {
        const HopSequence step = ring_step(occ, ring, forward);
        occ = 0;
        for (const auto &h : step) {
            occ |= h.to.mask();
        }
        all.insert(all.end(), step.begin(), step.end());
    }
    return all;
}

/**
 * Forward branch hops (2i-1 -> 2i); backward branch hops (1 -> 2n) then
 * (2i+1 -> 2i). Only the wrap hop crosses spectators, n - 1 of them.
 */
inline ExperimentResult experiment_ring_rotation(const RingConfig &cfg, const RegisterLayout &layout,
                                                 EvaluationMode mode = EvaluationMode::sequential) {
    if (cfg.n < 1) {
        throw UsageError("ring needs at least one particle");
    }
    if (layout.modes() != cfg.modes()) {
        throw UsageError("ring of " + std::to_string(cfg.n) + " particles needs " +
                         std::to_string(cfg.modes()) + " modes, layout has " +
                         std::to_string(layout.modes()));
    }
    ControlledExperiment e{"ring", layout, cfg.initial(), {}, {}, mode, cfg.modes(), {}};
    e.branch0 = {"forward", ring_schedule(cfg, true)};
    e.branch1 = {"backward", ring_schedule(cfg, false)};
    e.params["n"] = cfg.n;
    e.params["turn"] = to_string(cfg.turn);
    return run_controlled(e);
}

inline ExperimentResult experiment_ring_rotation(const RingConfig &cfg) {
    return experiment_ring_rotation(cfg, RegisterLayout::fermions(cfg.modes()));
}

enum class MeasurementBasis { x, y };

struct MeasurementOutcome {
    MeasurementBasis basis = MeasurementBasis::x;
    double p_plus = 0.5;
    std::optional<std::int64_t> shots;
    std::optional<std::int64_t> plus_count;
};

/**
 * Ancilla read-out. Exact probabilities by default; with `shots` a seeded
 * binomial sample, reproducible for a given seed.
 */
inline MeasurementOutcome ancilla_measure(const ExperimentResult &r, MeasurementBasis basis,
                                          std::optional<std::int64_t> shots = std::nullopt,
                                          std::optional<std::uint64_t> seed = std::nullopt) {
    if (!r.valid) {
        throw UsageError("cannot measure an invalid experiment result: " + r.invalid_reason);
    }
    MeasurementOutcome out;
    out.basis = basis;
    out.p_plus = basis == MeasurementBasis::x ? r.probabilities.x_plus : r.probabilities.y_plus;
    out.p_plus = std::clamp(out.p_plus, 0.0, 1.0);
    if (!shots) {
        return out;
    }
    if (!seed) {
        throw UsageError("sampled measurement requires an explicit seed");
    }
    if (*shots < 0) {
        throw UsageError("shot count must be non-negative");
    }
    std::mt19937_64 rng(*seed);
    std::binomial_distribution<std::int64_t> draw(*shots, out.p_plus);
    out.shots = shots;
    out.plus_count = draw(rng);
    return out;
}

} // namespace exlab
