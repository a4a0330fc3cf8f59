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
 * Sparse complex state vector over the Fock basis of a register.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fock_state.hpp"
#include "layout.hpp"

namespace exlab {

using Amplitude = std::complex<double>;

/**
 * Entries are kept sorted by basis index with no duplicates and no
 * amplitude below kPruneThreshold, so iteration order (and therefore every
 * floating-point reduction over a vector) is deterministic.
 */
class StateVector {
  public:
    using Entry = std::pair<std::uint64_t, Amplitude>;

    explicit StateVector(RegisterLayout layout) : layout_(std::move(layout)) {}

    /// Canonicalizes arbitrary (index, amplitude) pairs: sorts, merges duplicates, prunes.
    StateVector(RegisterLayout layout, std::vector<Entry> entries)
        : layout_(std::move(layout)), entries_(std::move(entries)) {
        canonicalize();
    }

    static StateVector basis(const RegisterLayout &layout, const FockBasisState &s) {
        if (s.modes != layout.modes()) {
            throw UsageError("basis state has " + std::to_string(s.modes) +
                             " modes, layout has " + std::to_string(layout.modes()));
        }
        return StateVector(layout, {{s.bits, Amplitude{1.0, 0.0}}});
    }

    static StateVector basis(const RegisterLayout &layout, std::string_view ket) {
        return basis(layout, parse_ket(ket));
    }

    [[nodiscard]] const RegisterLayout &layout() const { return layout_; }
    [[nodiscard]] const std::vector<Entry> &entries() const { return entries_; }
    [[nodiscard]] std::size_t size() const { return entries_.size(); }

    /// True for the annihilated vector (no surviving terms).
    [[nodiscard]] bool is_zero() const { return entries_.empty(); }

    [[nodiscard]] double norm() const { return std::sqrt(norm_sq_); }

    [[nodiscard]] Amplitude amplitude(std::uint64_t index) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                                   [](const Entry &e, std::uint64_t i) { return e.first < i; });
        return (it != entries_.end() && it->first == index) ? it->second : Amplitude{};
    }

    [[nodiscard]] Amplitude amplitude(const FockBasisState &s) const { return amplitude(s.bits); }

    [[nodiscard]] StateVector scaled(Amplitude c) const {
        std::vector<Entry> out = entries_;
        for (auto &[idx, a] : out) {
            a *= c;
        }
        return {layout_, std::move(out)};
    }

    [[nodiscard]] StateVector normalized() const {
        if (is_zero()) {
            return *this;
        }
        return scaled(Amplitude{1.0 / norm(), 0.0});
    }

    /// Total particle count per basis term; conserved quantities are checked with this.
    [[nodiscard]] std::vector<int> particle_counts() const {
        std::vector<int> out;
        for (const auto &[idx, a] : entries_) {
            out.push_back(std::popcount(idx));
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// Occupation count of each species, one row per basis term.
    [[nodiscard]] std::vector<std::vector<int>> species_counts() const {
        const int k = layout_.statistics().species_count();
        std::vector<std::vector<int>> rows;
        for (const auto &[idx, a] : entries_) {
            std::vector<int> row(static_cast<std::size_t>(k), 0);
            for (int m = 1; m <= layout_.modes(); ++m) {
                if (idx & ModeIndex(m).mask()) {
                    ++row[static_cast<std::size_t>(layout_.species_of(ModeIndex(m)))];
                }
            }
            rows.push_back(std::move(row));
        }
        std::sort(rows.begin(), rows.end());
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        return rows;
    }

    /// The configuration when the vector is a single basis term.
    [[nodiscard]] bool is_basis_state() const { return entries_.size() == 1; }

    [[nodiscard]] FockBasisState leading_configuration() const {
        if (is_zero()) {
            throw UsageError("zero vector has no configuration");
        }
        return {entries_.front().first, layout_.modes()};
    }

    /// "-|0101⟩" for signed basis states, otherwise a sum of (re+imi)|ket⟩ terms.
    [[nodiscard]] std::string to_string() const {
        if (is_zero()) {
            return "0";
        }
        const int m = layout_.modes();
        if (entries_.size() == 1) {
            const Amplitude a = entries_.front().second;
            const std::string ket = to_ket(entries_.front().first, m);
            if (std::abs(a - Amplitude{1.0, 0.0}) < 1e-12) {
                return ket;
            }
            if (std::abs(a + Amplitude{1.0, 0.0}) < 1e-12) {
                return "-" + ket;
            }
        }
        std::ostringstream os;
        os.precision(12);
        bool first = true;
        for (const auto &[idx, a] : entries_) {
            if (!first) {
                os << " + ";
            }
            first = false;
            os << '(' << a.real() << (a.imag() < 0 ? "" : "+") << a.imag() << "i)"
               << to_ket(idx, m);
        }
        return os.str();
    }

  private:
    void canonicalize() {
        for (const auto &[idx, a] : entries_) {
            if (idx > layout_.full_mask()) {
                throw UsageError("basis index outside register");
            }
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                throw UsageError("non-finite amplitude");
            }
        }
        std::stable_sort(entries_.begin(), entries_.end(),
                         [](const Entry &a, const Entry &b) { return a.first < b.first; });
        std::vector<Entry> merged;
        merged.reserve(entries_.size());
        for (const auto &e : entries_) {
            if (!merged.empty() && merged.back().first == e.first) {
                merged.back().second += e.second;
            } else {
                merged.push_back(e);
            }
        }
        std::erase_if(merged, [](const Entry &e) { return std::abs(e.second) < kPruneThreshold; });
        entries_ = std::move(merged);
        norm_sq_ = 0.0;
        for (const auto &[idx, a] : entries_) {
            norm_sq_ += std::norm(a);
        }
    }

    RegisterLayout layout_;
    std::vector<Entry> entries_;
    double norm_sq_ = 0.0;
};

inline void require_same_layout(const StateVector &a, const StateVector &b) {
    if (!(a.layout() == b.layout())) {
        throw UsageError("state vectors belong to different register layouts");
    }
}

/// <psi|phi>, conjugating psi. Merge over the two sorted entry lists.
inline Amplitude inner_product(const StateVector &psi, const StateVector &phi) {
    require_same_layout(psi, phi);
    Amplitude acc{};
    auto a = psi.entries().begin();
    auto b = phi.entries().begin();
    while (a != psi.entries().end() && b != phi.entries().end()) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            acc += std::conj(a->second) * b->second;
            ++a;
            ++b;
        }
    }
    return acc;
}

/// Largest |psi_x - phi_x| over the union of supports.
inline double max_deviation(const StateVector &psi, const StateVector &phi) {
    require_same_layout(psi, phi);
    double worst = 0.0;
    for (const auto &[idx, a] : psi.entries()) {
        worst = std::max(worst, std::abs(a - phi.amplitude(idx)));
    }
    for (const auto &[idx, b] : phi.entries()) {
        worst = std::max(worst, std::abs(b - psi.amplitude(idx)));
    }
    return worst;
}

inline StateVector operator+(const StateVector &a, const StateVector &b) {
    require_same_layout(a, b);
    std::vector<StateVector::Entry> all = a.entries();
    all.insert(all.end(), b.entries().begin(), b.entries().end());
    return {a.layout(), std::move(all)};
}

inline StateVector operator-(const StateVector &a) { return a.scaled(Amplitude{-1.0, 0.0}); }

inline StateVector operator-(const StateVector &a, const StateVector &b) { return a + (-b); }

} // namespace exlab
