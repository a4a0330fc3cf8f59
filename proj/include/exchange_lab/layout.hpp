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
 * Mode register layout: global mode ordering, species assignment and the
 * pairwise exchange statistics between species.
 */

#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace exlab {

/// Raised for malformed arguments (bad mode index, layout mismatch, ...).
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

#ifndef EXLAB_MAX_FAST_MODES
#define EXLAB_MAX_FAST_MODES 28
#endif

/// Upper bound on the mode count of the bitmask fast path. Override at
/// build time with -DEXLAB_MAX_FAST_MODES=<n> (n <= 63).
inline constexpr int kMaxFastModes = EXLAB_MAX_FAST_MODES;
static_assert(kMaxFastModes >= 1 && kMaxFastModes <= 63);

/// Amplitudes below this magnitude are dropped from sparse state vectors.
inline constexpr double kPruneThreshold = 1e-15;

/**
 * 1-based mode label as written in kets |n1 n2 ... nM>. Storage is the
 * 0-based bit position `value - 1`.
 */
struct ModeIndex {
    int value = 1;

    constexpr ModeIndex() = default;
    constexpr explicit ModeIndex(int v) : value(v) {}

    [[nodiscard]] constexpr int bit() const { return value - 1; }
    [[nodiscard]] constexpr std::uint64_t mask() const {
        return std::uint64_t{1} << bit();
    }

    friend constexpr bool operator==(ModeIndex, ModeIndex) = default;
    friend constexpr auto operator<=>(ModeIndex, ModeIndex) = default;
};

struct SpeciesId {
    int id = 0;
    std::string label;
};

/// Exchange sign between two ladder operators on different modes.
enum class Exchange : std::int8_t { commute = +1, anticommute = -1 };

/**
 * Symmetric species-by-species matrix of exchange signs. Diagonal entries
 * set whether a species is fermionic (-1) or a hardcore boson (+1); every
 * mode is capped at occupancy one either way.
 */
class StatisticsMatrix {
  public:
    StatisticsMatrix() : StatisticsMatrix(1, Exchange::anticommute) {}

    StatisticsMatrix(int species, Exchange fill)
        : n_(species), entries_(static_cast<std::size_t>(species * species), fill) {
        if (species < 1) {
            throw UsageError("statistics matrix needs at least one species");
        }
    }

    /// Builds from explicit rows; rejects asymmetric input.
    explicit StatisticsMatrix(const std::vector<std::vector<Exchange>> &rows)
        : n_(static_cast<int>(rows.size())) {
        if (n_ < 1) {
            throw UsageError("statistics matrix needs at least one species");
        }
        entries_.reserve(static_cast<std::size_t>(n_ * n_));
        for (const auto &row : rows) {
            if (static_cast<int>(row.size()) != n_) {
                throw UsageError("statistics matrix must be square");
            }
            entries_.insert(entries_.end(), row.begin(), row.end());
        }
        for (int a = 0; a < n_; ++a) {
            for (int b = a + 1; b < n_; ++b) {
                if (at(a, b) != at(b, a)) {
                    throw UsageError("statistics matrix must be symmetric");
                }
            }
        }
    }

    static StatisticsMatrix fermions() { return {1, Exchange::anticommute}; }
    static StatisticsMatrix hardcore_bosons() { return {1, Exchange::commute}; }

    [[nodiscard]] int species_count() const { return n_; }

    [[nodiscard]] Exchange at(int a, int b) const {
        return entries_[static_cast<std::size_t>(a * n_ + b)];
    }
    [[nodiscard]] int sign(int a, int b) const { return static_cast<int>(at(a, b)); }

    [[nodiscard]] bool all_commuting() const {
        for (auto e : entries_) {
            if (e == Exchange::anticommute) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const StatisticsMatrix &, const StatisticsMatrix &) = default;

  private:
    int n_;
    std::vector<Exchange> entries_;
};

/**
 * Immutable description of an M-mode register. The order 1..M is the
 * ordering used by every Jordan-Wigner string.
 *
 * For each mode k the layout precomputes the mask of lower modes whose
 * species anticommutes with species(k); the string sign of a ladder
 * operator on k is then the parity of `occupation & string_mask(k)`.
 */
class RegisterLayout {
  public:
    RegisterLayout() : RegisterLayout(1) {}

    /// Single fermionic species on all modes.
    explicit RegisterLayout(int modes)
        : RegisterLayout(modes, std::vector<int>(static_cast<std::size_t>(modes > 0 ? modes : 0), 0),
                         {SpeciesId{0, "f"}}, StatisticsMatrix::fermions()) {}

    RegisterLayout(int modes, std::vector<int> species_of, std::vector<SpeciesId> species,
                   StatisticsMatrix statistics)
        : modes_(modes),
          species_of_(std::move(species_of)),
          species_(std::move(species)),
          statistics_(std::move(statistics)) {
        if (modes_ < 1 || modes_ > kMaxFastModes) {
            throw UsageError("mode count must be in [1, " + std::to_string(kMaxFastModes) +
                             "], got " + std::to_string(modes_));
        }
        if (static_cast<int>(species_of_.size()) != modes_) {
            throw UsageError("species assignment must cover every mode");
        }
        if (static_cast<int>(species_.size()) != statistics_.species_count()) {
            throw UsageError("species table does not match the statistics matrix");
        }
        for (int s : species_of_) {
            if (s < 0 || s >= statistics_.species_count()) {
                throw UsageError("mode assigned to unknown species " + std::to_string(s));
            }
        }
        string_masks_.resize(static_cast<std::size_t>(modes_));
        for (int k = 0; k < modes_; ++k) {
            std::uint64_t m = 0;
            for (int q = 0; q < k; ++q) {
                if (statistics_.at(species_of_[q], species_of_[k]) == Exchange::anticommute) {
                    m |= std::uint64_t{1} << q;
                }
            }
            string_masks_[static_cast<std::size_t>(k)] = m;
        }
    }

    static RegisterLayout fermions(int modes) { return RegisterLayout(modes); }

    static RegisterLayout hardcore_bosons(int modes) {
        return {modes, std::vector<int>(static_cast<std::size_t>(modes > 0 ? modes : 0), 0),
                {SpeciesId{0, "b"}}, StatisticsMatrix::hardcore_bosons()};
    }

    /// Species assigned in contiguous blocks: modes are split as evenly as
    /// possible, lower-numbered species first.
    static RegisterLayout blocked(int modes, const StatisticsMatrix &statistics) {
        const int k = statistics.species_count();
        if (modes < k) {
            throw UsageError("fewer modes than species");
        }
        std::vector<int> assignment;
        assignment.reserve(static_cast<std::size_t>(modes));
        for (int s = 0; s < k; ++s) {
            const int count = modes / k + (s < modes % k ? 1 : 0);
            assignment.insert(assignment.end(), static_cast<std::size_t>(count), s);
        }
        return {modes, std::move(assignment), default_species(k), statistics};
    }

    static std::vector<SpeciesId> default_species(int k) {
        std::vector<SpeciesId> out;
        for (int s = 0; s < k; ++s) {
            out.push_back({s, std::string(1, static_cast<char>('A' + s % 26))});
        }
        return out;
    }

    [[nodiscard]] int modes() const { return modes_; }
    [[nodiscard]] std::uint64_t dimension() const { return std::uint64_t{1} << modes_; }
    [[nodiscard]] std::uint64_t full_mask() const { return dimension() - 1; }
    [[nodiscard]] const StatisticsMatrix &statistics() const { return statistics_; }
    [[nodiscard]] const std::vector<SpeciesId> &species() const { return species_; }
    [[nodiscard]] const std::vector<int> &species_assignment() const { return species_of_; }

    [[nodiscard]] int species_of(ModeIndex m) const {
        check(m);
        return species_of_[static_cast<std::size_t>(m.bit())];
    }

    [[nodiscard]] bool contains(ModeIndex m) const { return m.value >= 1 && m.value <= modes_; }

    void check(ModeIndex m) const {
        if (!contains(m)) {
            throw UsageError("mode " + std::to_string(m.value) + " outside register of " +
                             std::to_string(modes_) + " modes");
        }
    }

    [[nodiscard]] std::uint64_t string_mask(ModeIndex m) const {
        return string_masks_[static_cast<std::size_t>(m.bit())];
    }

    /// +1 or -1: string sign picked up by a ladder operator on `m`.
    [[nodiscard]] int string_sign(std::uint64_t occupation, ModeIndex m) const {
        return (std::popcount(occupation & string_mask(m)) & 1) ? -1 : +1;
    }

    friend bool operator==(const RegisterLayout &a, const RegisterLayout &b) {
        return a.modes_ == b.modes_ && a.species_of_ == b.species_of_ &&
               a.statistics_ == b.statistics_;
    }

  private:
    int modes_;
    std::vector<int> species_of_;
    std::vector<SpeciesId> species_;
    StatisticsMatrix statistics_;
    std::vector<std::uint64_t> string_masks_;
};

} // namespace exlab
