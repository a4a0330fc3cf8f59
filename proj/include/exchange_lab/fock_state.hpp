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

#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "layout.hpp"

namespace exlab {

/// Definite occupation configuration. Bit k-1 of `bits` is n_k.
struct FockBasisState {
    std::uint64_t bits = 0;
    int modes = 1;

    [[nodiscard]] bool occupied(ModeIndex m) const { return (bits & m.mask()) != 0; }
    [[nodiscard]] int particle_count() const { return std::popcount(bits); }

    friend bool operator==(const FockBasisState &, const FockBasisState &) = default;
};

namespace detail {
inline constexpr std::string_view kKetClose = "\xE2\x9F\xA9"; // U+27E9
} // namespace detail

/// Renders |n1 n2 ... nM> with mode 1 leftmost.
inline std::string to_ket(std::uint64_t bits, int modes) {
    std::string out = "|";
    for (int k = 0; k < modes; ++k) {
        out.push_back((bits >> k) & 1U ? '1' : '0');
    }
    out.append(detail::kKetClose);
    return out;
}

inline std::string to_ket(const FockBasisState &s) { return to_ket(s.bits, s.modes); }

/// Accepts "1010", "|1010>" and "|1010⟩". Mode 1 is the leftmost digit.
inline FockBasisState parse_ket(std::string_view text) {
    std::string_view body = text;
    if (!body.empty() && body.front() == '|') {
        body.remove_prefix(1);
    }
    if (body.ends_with(detail::kKetClose)) {
        body.remove_suffix(detail::kKetClose.size());
    } else if (!body.empty() && body.back() == '>') {
        body.remove_suffix(1);
    }
    if (body.empty()) {
        throw UsageError("empty ket '" + std::string(text) + "'");
    }
    if (static_cast<int>(body.size()) > kMaxFastModes) {
        throw UsageError("ket longer than the fast-path mode cap");
    }
    FockBasisState s{0, static_cast<int>(body.size())};
    for (std::size_t k = 0; k < body.size(); ++k) {
        if (body[k] == '1') {
            s.bits |= std::uint64_t{1} << k;
        } else if (body[k] != '0') {
            throw UsageError("ket '" + std::string(text) + "' must contain only 0/1 digits");
        }
    }
    return s;
}

/**
 * All C(M, k) configurations with exactly k particles, ascending by basis
 * index (Gosper's hack).
 */
inline std::vector<FockBasisState> enumerate_sector(int modes, int k) {
    if (modes < 1 || modes > kMaxFastModes) {
        throw UsageError("mode count out of range");
    }
    if (k < 0 || k > modes) {
        throw UsageError("particle count " + std::to_string(k) + " outside [0, " +
                         std::to_string(modes) + "]");
    }
    std::vector<FockBasisState> out;
    if (k == 0) {
        out.push_back({0, modes});
        return out;
    }
    const std::uint64_t limit = std::uint64_t{1} << modes;
    std::uint64_t v = (std::uint64_t{1} << k) - 1;
    while (v < limit) {
        out.push_back({v, modes});
        const std::uint64_t c = v & (~v + 1);
        const std::uint64_t r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    return out;
}

} // namespace exlab
