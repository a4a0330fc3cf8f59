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
 * Ladder operators, literal operator strings, hops and the sign ledger.
 *
 * Sign convention: a ladder operator on mode k picks up one factor
 * sigma(species(q), species(k)) for every occupied mode q < k. For a single
 * fermionic species this is (-1)^(number of particles in modes 1..k-1).
 */

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "fock_state.hpp"
#include "layout.hpp"
#include "state_vector.hpp"

namespace exlab {

enum class LadderKind : std::uint8_t { create, annihilate };

struct LadderOp {
    LadderKind kind = LadderKind::annihilate;
    ModeIndex mode;

    [[nodiscard]] LadderOp adjoint() const {
        return {kind == LadderKind::create ? LadderKind::annihilate : LadderKind::create, mode};
    }

    [[nodiscard]] std::string to_string() const {
        return (kind == LadderKind::create ? "f\xE2\x80\xA0" : "f") + std::to_string(mode.value);
    }

    friend bool operator==(const LadderOp &, const LadderOp &) = default;
};

inline LadderOp create(int mode) { return {LadderKind::create, ModeIndex(mode)}; }
inline LadderOp annihilate(int mode) { return {LadderKind::annihilate, ModeIndex(mode)}; }

/**
 * Product of ladder operators written left-to-right in the usual notation and applied
 * right-to-left: {create(4), annihilate(3)} is f†4 f3, and f3 acts first.
 */
struct OperatorString {
    std::vector<LadderOp> ops;

    OperatorString() = default;
    OperatorString(std::initializer_list<LadderOp> list) : ops(list) {}
    explicit OperatorString(std::vector<LadderOp> list) : ops(std::move(list)) {}

    [[nodiscard]] bool empty() const { return ops.empty(); }

    /// Notation-order product: (*this) * rhs.
    [[nodiscard]] OperatorString then_left_of(const OperatorString &rhs) const {
        OperatorString out = *this;
        out.ops.insert(out.ops.end(), rhs.ops.begin(), rhs.ops.end());
        return out;
    }

    [[nodiscard]] std::string to_string() const {
        if (ops.empty()) {
            return "1";
        }
        std::string out;
        for (const auto &op : ops) {
            if (!out.empty()) {
                out.push_back(' ');
            }
            out += op.to_string();
        }
        return out;
    }
};

/// Transport of one particle: the product f†_to f_from.
struct Hop {
    ModeIndex from;
    ModeIndex to;

    Hop() = default;
    Hop(int f, int t) : from(f), to(t) {}
    Hop(ModeIndex f, ModeIndex t) : from(f), to(t) {}

    [[nodiscard]] std::string to_string() const {
        return std::to_string(from.value) + "->" + std::to_string(to.value);
    }

    /// The literal two-operator string f†_to f_from.
    [[nodiscard]] OperatorString as_string() const {
        return {LadderOp{LadderKind::create, to}, LadderOp{LadderKind::annihilate, from}};
    }

    friend bool operator==(const Hop &, const Hop &) = default;
};

using HopSequence = std::vector<Hop>;

/// Literal string for a hop sequence, with the first hop rightmost.
inline OperatorString as_string(const HopSequence &hops) {
    OperatorString out;
    for (auto it = hops.rbegin(); it != hops.rend(); ++it) {
        out = out.then_left_of(it->as_string());
    }
    return out;
}

struct SignLedgerEntry {
    std::size_t step = 0; ///< 1-based position in the sequence
    std::string op;
    ModeIndex from;
    ModeIndex to;
    int sign = +1;
    int interval_parity = 0; ///< spectator particles whose string factors do not cancel
    bool wrap = false;       ///< hop joins mode 1 and the last ring mode
};

struct SignLedger {
    std::vector<SignLedgerEntry> entries;
    std::size_t steps = 0; ///< operations applied, including ones where every term vanished

    /// Product of recorded signs. Only meaningful when every step has one
    /// term class, i.e. for definite-occupation inputs.
    [[nodiscard]] int product() const {
        int p = +1;
        for (const auto &e : entries) {
            p *= e.sign;
        }
        return p;
    }
};

/// Jordan-Wigner string sign of a ladder operator on `mode` acting on `state`.
inline int jw_sign(const FockBasisState &state, ModeIndex mode, const RegisterLayout &layout) {
    layout.check(mode);
    if (state.modes != layout.modes()) {
        throw UsageError("basis state does not match layout");
    }
    return layout.string_sign(state.bits, mode);
}

namespace detail {

/// Applies one ladder operator to a basis index. Returns false when the term vanishes.
inline bool ladder_on_index(const RegisterLayout &layout, const LadderOp &op, std::uint64_t &idx,
                            int &sign) {
    const std::uint64_t bit = op.mode.mask();
    const bool occ = (idx & bit) != 0;
    if (op.kind == LadderKind::annihilate ? !occ : occ) {
        return false;
    }
    sign *= layout.string_sign(idx, op.mode);
    idx ^= bit;
    return true;
}

struct HopOutcome {
    std::uint64_t index = 0;
    int sign = +1;
    int interval_parity = 0;
};

/**
 * Hop kernel on one basis index. The combined string of f_from and f†_to is
 * the mask difference string_mask(from) ^ string_mask(to), evaluated after
 * the annihilation; its popcount is the interval parity.
 */
inline bool hop_on_index(const RegisterLayout &layout, const Hop &h, std::uint64_t idx,
                         HopOutcome &out) {
    const std::uint64_t fb = h.from.mask();
    const std::uint64_t tb = h.to.mask();
    if (!(idx & fb) || (idx & tb)) {
        return false;
    }
    const std::uint64_t mid = idx ^ fb;
    const std::uint64_t strings = layout.string_mask(h.from) ^ layout.string_mask(h.to);
    out.interval_parity = std::popcount(mid & strings);
    out.sign = (out.interval_parity & 1) ? -1 : +1;
    out.index = mid | tb;
    return true;
}

inline void check_hop(const RegisterLayout &layout, const Hop &h) {
    layout.check(h.from);
    layout.check(h.to);
    if (h.from == h.to) {
        throw UsageError("hop endpoints must differ (" + h.to_string() + ")");
    }
}

} // namespace detail

/// Terms that are annihilated drop out; the zero vector is a valid result.
inline StateVector apply_ladder(const LadderOp &op, const StateVector &psi) {
    const auto &layout = psi.layout();
    layout.check(op.mode);
    std::vector<StateVector::Entry> out;
    out.reserve(psi.size());
    for (const auto &[idx, a] : psi.entries()) {
        std::uint64_t j = idx;
        int sign = +1;
        if (detail::ladder_on_index(layout, op, j, sign)) {
            out.emplace_back(j, sign > 0 ? a : -a);
        }
    }
    return {layout, std::move(out)};
}

/// Rightmost operator first. Each basis term is carried through the whole
/// string before the result is re-sorted.
inline StateVector apply_operator_string(const OperatorString &s, const StateVector &psi) {
    const auto &layout = psi.layout();
    for (const auto &op : s.ops) {
        layout.check(op.mode);
    }
    std::vector<StateVector::Entry> out;
    out.reserve(psi.size());
    for (const auto &[idx, a] : psi.entries()) {
        std::uint64_t j = idx;
        int sign = +1;
        bool alive = true;
        for (auto it = s.ops.rbegin(); it != s.ops.rend() && alive; ++it) {
            alive = detail::ladder_on_index(layout, *it, j, sign);
        }
        if (alive) {
            out.emplace_back(j, sign > 0 ? a : -a);
        }
    }
    return {layout, std::move(out)};
}

inline bool is_wrap_hop(const Hop &h, int ring_modes) {
    if (ring_modes <= 0) {
        return false;
    }
    const int lo = std::min(h.from.value, h.to.value);
    const int hi = std::max(h.from.value, h.to.value);
    return lo == 1 && hi == ring_modes && ring_modes > 2;
}

/**
 * Applies f†_to f_from and records one ledger entry per distinct
 * (sign, interval parity) class among the surviving terms. `ring_modes`
 * marks the register as a ring of that many modes for the wrap flag; 0
 * means an open chain.
 */
inline StateVector apply_hop(const Hop &h, const StateVector &psi, SignLedger &ledger,
                             int ring_modes = 0) {
    const auto &layout = psi.layout();
    detail::check_hop(layout, h);
    const std::size_t step = ++ledger.steps;
    std::vector<StateVector::Entry> out;
    out.reserve(psi.size());
    std::vector<std::pair<int, int>> classes;
    for (const auto &[idx, a] : psi.entries()) {
        detail::HopOutcome r;
        if (!detail::hop_on_index(layout, h, idx, r)) {
            continue;
        }
        out.emplace_back(r.index, r.sign > 0 ? a : -a);
        const std::pair<int, int> cls{r.sign, r.interval_parity};
        if (std::find(classes.begin(), classes.end(), cls) == classes.end()) {
            classes.push_back(cls);
        }
    }
    std::sort(classes.begin(), classes.end(),
              [](auto x, auto y) { return x.second < y.second; });
    for (const auto &[sign, parity] : classes) {
        ledger.entries.push_back(SignLedgerEntry{step, "hop(" + h.to_string() + ")", h.from, h.to,
                                                 sign, parity, is_wrap_hop(h, ring_modes)});
    }
    return {layout, std::move(out)};
}

struct HopRun {
    StateVector state;
    SignLedger ledger;
};

/// Hops applied strictly in list order.
inline HopRun apply_hop_sequence(const HopSequence &hops, const StateVector &psi,
                                 int ring_modes = 0) {
    HopRun run{psi, {}};
    for (const auto &h : hops) {
        run.state = apply_hop(h, run.state, run.ledger, ring_modes);
    }
    return run;
}

} // namespace exlab
