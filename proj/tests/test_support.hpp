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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "exchange_lab/oracle.hpp"

namespace exlab::testing {

inline constexpr double kTol = 1e-12;

/// Distance between two angles on the circle.
inline double angle_gap(double a, double b) {
    return std::abs(std::remainder(a - b, 2.0 * std::numbers::pi));
}

/// Dense-oracle image of a basis ket under a literal string.
inline oracle::DenseVector dense_on_ket(const RegisterLayout &layout, const OperatorString &s,
                                        const char *ket) {
    return oracle::dense_apply(layout, s, oracle::to_dense(StateVector::basis(layout, ket)));
}

inline ::testing::AssertionResult amplitudes_near(const StateVector &a, const StateVector &b,
                                                  double tol = kTol) {
    const double dev = max_deviation(a, b);
    if (dev <= tol) {
        return ::testing::AssertionSuccess();
    }
    return ::testing::AssertionFailure() << a.to_string() << " vs " << b.to_string()
                                         << " (max deviation " << dev << ")";
}

} // namespace exlab::testing
