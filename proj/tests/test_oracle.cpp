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

#include <cstdlib>
#include <random>

#include "gtest/gtest.h"

#include "exchange_lab/oracle.hpp"
#include "test_support.hpp"

using namespace exlab;
using exlab::oracle::DenseMatrix;
using exlab::testing::kTol;

namespace {

class ScopedEnv {
  public:
    ScopedEnv(const char *name, const char *value) : name_(name) {
        if (const char *old = std::getenv(name)) {
            old_ = old;
        }
        ::setenv(name, value, 1);
    }
    ~ScopedEnv() {
        if (old_.empty()) {
            ::unsetenv(name_);
        } else {
            ::setenv(name_, old_.c_str(), 1);
        }
    }

  private:
    const char *name_;
    std::string old_;
};

} // namespace

TEST(DenseLadder, SingleMode) {
    const auto f = oracle::dense_ladder(RegisterLayout::fermions(1), ModeIndex(1), LadderKind::annihilate);
    ASSERT_EQ(f.rows(), 2);
    EXPECT_EQ(f(0, 1), std::complex<double>(1.0));
    EXPECT_EQ(f(0, 0), std::complex<double>(0.0));
    EXPECT_EQ(f(1, 0), std::complex<double>(0.0));
    EXPECT_EQ(f(1, 1), std::complex<double>(0.0));
}

TEST(DenseLadder, TwoModeString) {
    // Index = n1 + 2 n2; f2|11> = -|10>, f2|01> = +|00>.
    const auto f2 = oracle::dense_ladder(RegisterLayout::fermions(2), ModeIndex(2), LadderKind::annihilate);
    EXPECT_EQ(f2(1, 3), std::complex<double>(-1.0));
    EXPECT_EQ(f2(0, 2), std::complex<double>(1.0));
    EXPECT_EQ((f2.cwiseAbs().array() > 0).count(), 2);
}

TEST(DenseLadder, AnticommutatorVanishes) {
    const auto layout = RegisterLayout::fermions(2);
    const auto f1 = oracle::dense_ladder(layout, ModeIndex(1), LadderKind::annihilate);
    const auto c2 = oracle::dense_ladder(layout, ModeIndex(2), LadderKind::create);
    EXPECT_LE(oracle::max_abs(f1 * c2 + c2 * f1), 1e-14);
}

TEST(DenseLadder, RelationsFollowStatisticsMatrix) {
    std::vector<RegisterLayout> layouts{
        RegisterLayout::fermions(4), RegisterLayout::hardcore_bosons(4),
        RegisterLayout::blocked(4, StatisticsMatrix({{Exchange::anticommute, Exchange::commute},
                                                     {Exchange::commute, Exchange::anticommute}})),
        RegisterLayout::blocked(5, StatisticsMatrix({{Exchange::commute, Exchange::anticommute},
                                                     {Exchange::anticommute, Exchange::anticommute}}))};
    for (const auto &layout : layouts) {
        const int m = layout.modes();
        const auto id = DenseMatrix::Identity(layout.dimension(), layout.dimension());
        for (int i = 1; i <= m; ++i) {
            const auto fi = oracle::dense_ladder(layout, ModeIndex(i), LadderKind::annihilate);
            for (int j = 1; j <= m; ++j) {
                const auto fj = oracle::dense_ladder(layout, ModeIndex(j), LadderKind::annihilate);
                const auto cj = oracle::dense_ladder(layout, ModeIndex(j), LadderKind::create);
                if (i == j) {
                    EXPECT_LE(oracle::max_abs(fi * cj + cj * fi - id), 1e-13);
                    continue;
                }
                const double s = layout.statistics().sign(layout.species_of(ModeIndex(i)),
                                                          layout.species_of(ModeIndex(j)));
                EXPECT_LE(oracle::max_abs(fi * fj - s * (fj * fi)), 1e-13);
                EXPECT_LE(oracle::max_abs(fi * cj - s * (cj * fi)), 1e-13);
            }
        }
    }
}

TEST(DenseString, CanonicalStringsAndIdentity) {
    const auto layout = RegisterLayout::fermions(4);
    const auto in = static_cast<Eigen::Index>(parse_ket("1010").bits);
    const auto out = static_cast<Eigen::Index>(parse_ket("0101").bits);
    const auto step_one = oracle::dense_string(layout, {create(4), annihilate(3), create(2), annihilate(1)});
    EXPECT_EQ(step_one(out, in), std::complex<double>(1.0));
    EXPECT_EQ(step_one.col(in).cwiseAbs().sum(), 1.0);
    const auto clockwise = oracle::dense_string(layout, {create(2), annihilate(3), create(4), annihilate(1)});
    EXPECT_EQ(clockwise(out, in), std::complex<double>(-1.0));
    EXPECT_LE(oracle::max_abs(oracle::dense_string(layout, {}) - DenseMatrix::Identity(16, 16)), 0.0);
}

TEST(DenseString, ApplyMatchesMatrixProduct) {
    const auto layout = RegisterLayout::fermions(5);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const auto s = oracle::random_string(layout, rng);
        const auto psi = oracle::to_dense(oracle::random_state(layout, rng));
        EXPECT_LE((oracle::dense_string(layout, s) * psi - oracle::dense_apply(layout, s, psi)).cwiseAbs().maxCoeff(),
                  1e-13);
    }
}

TEST(Cap, DefaultAndEnvironmentOverride) {
    EXPECT_EQ(oracle::max_modes(), oracle::kDefaultMaxModes);
    EXPECT_THROW(oracle::dense_ladder(RegisterLayout::fermions(13), ModeIndex(1), LadderKind::create),
                 oracle::CapExceeded);
    {
        ScopedEnv env(oracle::kMaxModesEnv, "3");
        EXPECT_EQ(oracle::max_modes(), 3);
        EXPECT_THROW(oracle::cross_check(4, 1, 1), oracle::CapExceeded);
    }
    {
        ScopedEnv env(oracle::kMaxModesEnv, "lots");
        EXPECT_THROW(oracle::max_modes(), UsageError);
    }
    EXPECT_EQ(oracle::max_modes(), oracle::kDefaultMaxModes);
}

TEST(CrossCheck, SmallRegisterManyTrials) {
    const auto r = oracle::cross_check(4, 1000, 7);
    EXPECT_TRUE(r.passed()) << r.worst_case << " deviation " << r.max_deviation;
    EXPECT_EQ(r.trials, 1000);
    EXPECT_GT(r.nonzero_results, 100);
}

TEST(CrossCheck, TenModes) {
    const auto r = oracle::cross_check(10, 200, 8);
    EXPECT_TRUE(r.passed()) << r.worst_case << " deviation " << r.max_deviation;
}

TEST(CrossCheck, ZeroTrialsPassTrivially) {
    const auto r = oracle::cross_check(4, 0, 1);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.trials, 0);
    EXPECT_EQ(r.max_deviation, 0.0);
}

TEST(CrossCheck, DeterministicPerSeed) {
    const auto a = oracle::cross_check(5, 50, 42);
    const auto b = oracle::cross_check(5, 50, 42);
    EXPECT_EQ(a.max_deviation, b.max_deviation);
    EXPECT_EQ(a.nonzero_results, b.nonzero_results);
    EXPECT_EQ(a.worst_case, b.worst_case);
}

TEST(CrossCheck, MixedStatistics) {
    const auto layout = RegisterLayout::blocked(
        6, StatisticsMatrix({{Exchange::anticommute, Exchange::commute}, {Exchange::commute, Exchange::commute}}));
    EXPECT_TRUE(oracle::cross_check(layout, 300, 9).passed());
    EXPECT_TRUE(oracle::cross_check(RegisterLayout::hardcore_bosons(6), 300, 9).passed());
}

TEST(Expm, ZeroIsIdentity) {
    const DenseMatrix z = DenseMatrix::Zero(4, 4);
    EXPECT_LE(oracle::max_abs(oracle::dense_expm_hermitian(z) - DenseMatrix::Identity(4, 4)), 1e-14);
}

TEST(Expm, PauliXClosedForm) {
    // exp(-i t X) = cos t I - i sin t X.
    for (double t : {0.3, 1.0, std::numbers::pi / 2, 2.7}) {
        DenseMatrix x = DenseMatrix::Zero(2, 2);
        x(0, 1) = x(1, 0) = t;
        const auto u = oracle::dense_expm_hermitian(x);
        EXPECT_NEAR(std::abs(u(0, 0) - std::cos(t)), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(u(1, 1) - std::cos(t)), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(u(0, 1) - std::complex<double>(0.0, -std::sin(t))), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(u(1, 0) - std::complex<double>(0.0, -std::sin(t))), 0.0, 1e-14);
    }
}

TEST(Expm, UnitaryAndRejectsNonHermitian) {
    const auto layout = RegisterLayout::fermions(6);
    HamiltonianSpec h{{{1, 2, 1.0}, {2, 3, 0.7}, {3, 6, -0.4}}};
    const auto u = oracle::dense_expm_hermitian(0.9 * oracle::dense_hopping_hamiltonian(layout, h));
    EXPECT_LE(oracle::max_abs(u.adjoint() * u - DenseMatrix::Identity(64, 64)), 1e-10);
    DenseMatrix bad = DenseMatrix::Zero(2, 2);
    bad(0, 1) = 1.0;
    EXPECT_THROW(oracle::dense_expm_hermitian(bad), UsageError);
    EXPECT_THROW(oracle::dense_expm_hermitian(DenseMatrix::Zero(2, 3)), UsageError);
}

TEST(Worldline, TracksLabelsAndParity) {
    const auto start = parse_ket("1010");
    const auto swap = oracle::worldline_parity(start, {{1, 2}, {3, 4}, {2, 3}, {4, 1}});
    EXPECT_TRUE(swap.closed);
    EXPECT_EQ(swap.parity, -1);
    const auto back = oracle::worldline_parity(start, {{1, 2}, {2, 1}});
    EXPECT_TRUE(back.closed);
    EXPECT_EQ(back.parity, +1);
    const auto open = oracle::worldline_parity(start, {{1, 2}});
    EXPECT_FALSE(open.closed);
    EXPECT_THROW(oracle::worldline_parity(start, {{2, 4}}), UsageError);
    EXPECT_THROW(oracle::worldline_parity(start, {{1, 3}}), UsageError);
}
