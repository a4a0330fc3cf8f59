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
 * Optical-path and gravitational (COW) phase differences between two
 * interferometer arms. Phases are returned unwrapped.
 */

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "layout.hpp"

namespace exlab::interferometry {

namespace constants {
/// Reduced Planck constant, J s (CODATA 2018, exact via the SI definition of h).
inline constexpr double hbar = 1.054571817e-34;
/// Neutron mass, kg (CODATA 2018).
inline constexpr double neutron_mass = 1.67492749804e-27;
/// Standard gravity, m/s^2 (CGPM 1901 conventional value).
inline constexpr double standard_gravity = 9.80665;
} // namespace constants

struct Segment {
    double length = 0.0; ///< metres
    double index = 1.0;  ///< refractive index
};

struct PathProfile {
    std::vector<Segment> segments;
};

struct COWParams {
    double mass = constants::neutron_mass;
    double gravity = constants::standard_gravity;
    double height = 0.0;
    double time = 0.0;
};

namespace detail {
inline void check(const PathProfile &p) {
    for (const auto &s : p.segments) {
        if (!std::isfinite(s.length) || !std::isfinite(s.index) || s.length < 0.0) {
            throw UsageError("path segments need finite, non-negative lengths and finite indices");
        }
    }
}
} // namespace detail

/**
 * 2 pi (sum_p1 n dx - sum_p2 n dx) / lambda. The two optical lengths are
 * accumulated as one signed Neumaier sum so segments shared by both arms
 * cancel exactly.
 */
inline double optical_path_phase(const PathProfile &p1, const PathProfile &p2, double wavelength) {
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        throw UsageError("wavelength must be positive and finite");
    }
    detail::check(p1);
    detail::check(p2);
    double sum = 0.0;
    double comp = 0.0;
    auto add = [&](double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    };
    for (const auto &s : p1.segments) {
        add(s.index * s.length);
    }
    for (const auto &s : p2.segments) {
        add(-(s.index * s.length));
    }
    return 2.0 * std::numbers::pi * ((sum + comp) / wavelength);
}

/// m g h t / hbar.
inline double cow_phase(const COWParams &p) {
    for (double v : {p.mass, p.gravity, p.height, p.time}) {
        if (!std::isfinite(v)) {
            throw UsageError("COW parameters must be finite");
        }
    }
    if (p.mass < 0.0 || p.time < 0.0) {
        throw UsageError("COW mass and time must be non-negative");
    }
    return p.mass * p.gravity * p.height * p.time / constants::hbar;
}

} // namespace exlab::interferometry
