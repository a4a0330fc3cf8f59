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
 * Reusable invariant checks and random generators shared by `verify` and
 * the test suites.
 */

#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "fock_core.hpp"

namespace exlab {

/// Random legal hop walk followed by hops that restore the starting occupation.
inline HopSequence random_closed_loop(const FockBasisState &start, std::mt19937_64 &rng, int walk) {
    const int m = start.modes;
    std::uniform_int_distribution<int> pick(1, m);
    HopSequence hops;
    std::uint64_t occ = start.bits;
    auto occupied = [&](int q) { return (occ >> (q - 1)) & 1U; };
    for (int s = 0; s < walk; ++s) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            const int a = pick(rng);
            const int b = pick(rng);
            if (a != b && occupied(a) && !occupied(b)) {
                hops.emplace_back(a, b);
                occ ^= ModeIndex(a).mask() | ModeIndex(b).mask();
                break;
            }
        }
    }
    // Send strays back to vacated starting sites, in random order.
    std::vector<int> strays;
    std::vector<int> holes;
    for (int q = 1; q <= m; ++q) {
        const bool now = occupied(q);
        const bool was = (start.bits >> (q - 1)) & 1U;
        if (now && !was) {
            strays.push_back(q);
        }
        if (!now && was) {
            holes.push_back(q);
        }
    }
    std::shuffle(holes.begin(), holes.end(), rng);
    for (std::size_t k = 0; k < strays.size(); ++k) {
        hops.emplace_back(strays[k], holes[k]);
    }
    return hops;
}

/// Largest (anti)commutator residual over all mode pairs on `states`.
inline double exchange_residual(const RegisterLayout &layout, const std::vector<StateVector> &states) {
    double worst = 0.0;
    const int m = layout.modes();
    for (const auto &psi : states) {
        for (int i = 1; i <= m; ++i) {
            for (int j = 1; j <= m; ++j) {
                const LadderOp fi = annihilate(i);
                for (const LadderOp other : {annihilate(j), create(j)}) {
                    const StateVector ab = apply_ladder(fi, apply_ladder(other, psi));
                    const StateVector ba = apply_ladder(other, apply_ladder(fi, psi));
                    if (i == j) {
                        if (other.kind == LadderKind::create) {
                            worst = std::max(worst, max_deviation(ab + ba, psi));
                        } else {
                            worst = std::max(worst, ab.norm());
                        }
                        continue;
                    }
                    const double sigma =
                        layout.statistics().sign(layout.species_of(ModeIndex(i)), layout.species_of(ModeIndex(j)));
                    // f_i X = sigma X f_i for X in {f_j, f†_j}.
                    worst = std::max(worst, (ba - ab.scaled(sigma)).norm());
                }
            }
        }
    }
    return worst;
}

} // namespace exlab
