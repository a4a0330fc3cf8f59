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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "exchange_lab/cli.hpp"
#include "exchange_lab/dynamics.hpp"
#include "exchange_lab/interferometry.hpp"
#include "exchange_lab/invariants.hpp"
#include "exchange_lab/oracle.hpp"
#include "exchange_lab/protocols.hpp"

using namespace exlab;

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double angle_gap(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * kPi)); }

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool cond, const std::string &what) {
        if (!cond) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

bool phase_is(const ExperimentResult &r, double expected, double tol = 1e-10) {
    return r.valid && r.phase() && angle_gap(*r.phase(), expected) <= tol;
}

Amplitude dense_overlap(const RegisterLayout &layout, const FockBasisState &init, const HopSequence &b0,
                        const HopSequence &b1) {
    const auto v = oracle::to_dense(StateVector::basis(layout, init));
    return oracle::dense_apply(layout, as_string(b0), v).dot(oracle::dense_apply(layout, as_string(b1), v));
}

Verdict canonical_strings() {
    Verdict v;
    const auto layout = RegisterLayout::fermions(4);
    const StateVector in = StateVector::basis(layout, "1010");
    const StateVector out = StateVector::basis(layout, "0101");
    struct Case {
        const char *name;
        OperatorString s;
        StateVector expected;
    };
    const Case cases[] = {{"step-one", swap_step_one(), out},
                          {"counterclockwise", half_swap_counterclockwise(), out},
                          {"clockwise", half_swap_clockwise(), -out}};
    for (const auto &c : cases) {
        const auto t0 = Clock::now();
        const StateVector got = apply_operator_string(c.s, in);
        const double elapsed = seconds_since(t0);
        const double err = max_deviation(got, c.expected);
        v.detail << ' ' << c.name << '=' << got.to_string() << " err=" << err << " t=" << elapsed * 1e6 << "us";
        v.require(err <= 1e-12, std::string(c.name) + " amplitude");
        v.require(elapsed < 1e-3, std::string(c.name) + " runtime");
    }
    return v;
}

Verdict half_swap() {
    Verdict v;
    const auto r = experiment_half_swap_interference(RegisterLayout::fermions(4));
    v.require(phase_is(r, kPi), "phase");
    v.require(std::abs(r.visibility() - 1.0) <= 1e-12, "visibility");
    v.detail << " phase=" << cli::phase_text(r.phase()) << " V=" << r.visibility();
    return v;
}

Verdict full_swap() {
    Verdict v;
    const auto layout = RegisterLayout::fermions(4);
    const auto r = experiment_full_controlled_swap(layout);
    v.require(phase_is(r, kPi), "sequential phase");
    const HopSequence hops{{1, 2}, {3, 4}, {2, 3}, {4, 1}};
    v.require(angle_gap(std::arg(dense_overlap(layout, parse_ket("1010"), {}, hops)), kPi) <= 1e-12,
              "oracle sequential phase");

    const StateVector s0101 = StateVector::basis(layout, "0101");
    const StateVector literal = apply_operator_string(swap_step_two(), s0101);
    const double lit_err = max_deviation(literal, StateVector::basis(layout, "1010"));
    const double lit_oracle = oracle::deviation(
        literal, oracle::dense_apply(layout, swap_step_two(), oracle::to_dense(s0101)));
    v.require(lit_err <= 1e-12 && lit_oracle <= 1e-12, "literal step two = +|1010>");

    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_cli(std::vector<std::string>{"verify", "--modes", "4", "--trials", "10"}, out, err);
    const std::string report = out.str();
    v.require(code == 0, "verify exit code");
    v.require(report.find("step two (literal) f4 f†3 f2 f†1|0101⟩: = |1010⟩") != std::string::npos,
              "verify report literal value");
    v.require(report.find("sign-flipped reference result is -|1010⟩") != std::string::npos, "verify report discrepancy");
    v.detail << " sequential phase=" << cli::phase_text(r.phase()) << " literal step two=" << literal.to_string();
    return v;
}

Verdict ring() {
    Verdict v;
    const auto t0 = Clock::now();
    for (int n = 1; n <= 5; ++n) {
        const RingConfig cfg{n, RingTurn::single_step};
        const double expected = kPi * ((n - 1) % 2);
        const auto r = experiment_ring_rotation(cfg);
        const Amplitude dense = dense_overlap(RegisterLayout::fermions(cfg.modes()), cfg.initial(),
                                              ring_schedule(cfg, true), ring_schedule(cfg, false));
        v.require(phase_is(r, expected), "n=" + std::to_string(n) + " phase");
        v.require(std::abs(std::abs(dense) - 1.0) <= 1e-12 && angle_gap(std::arg(dense), expected) <= 1e-10,
                  "n=" + std::to_string(n) + " oracle");
        v.detail << " n=" << n << ":" << cli::phase_text(r.phase());
    }
    const double elapsed = seconds_since(t0);
    v.require(elapsed < 60.0, "runtime");
    v.detail << " t=" << elapsed << "s";
    return v;
}

Verdict statistics_contrast() {
    Verdict v;
    std::vector<std::pair<std::string, ExperimentResult>> bosons{
        {"full-swap", experiment_full_controlled_swap(RegisterLayout::hardcore_bosons(4))},
        {"half-swap", experiment_half_swap_interference(RegisterLayout::hardcore_bosons(4))},
        {"pulse", experiment_pulsed_half_swap(RegisterLayout::hardcore_bosons(4))}};
    for (int n = 1; n <= 5; ++n) {
        bosons.emplace_back("ring" + std::to_string(n),
                            experiment_ring_rotation({n, RingTurn::single_step}, RegisterLayout::hardcore_bosons(2 * n)));
    }
    for (const auto &[name, r] : bosons) {
        v.require(phase_is(r, 0.0), "boson " + name);
    }
    const auto mixed = experiment_full_controlled_swap(
        RegisterLayout::blocked(4, StatisticsMatrix(2, Exchange::anticommute)));
    v.require(phase_is(mixed, kPi), "mixed full swap");
    v.detail << " boson experiments=" << bosons.size() << " mixed full-swap phase=" << cli::phase_text(mixed.phase());
    return v;
}

Verdict oracle_equivalence() {
    Verdict v;
    const auto t0 = Clock::now();
    const std::pair<int, int> plan[] = {{4, 200}, {5, 200}, {6, 200}, {7, 150}, {8, 100}, {9, 100}, {10, 100}};
    int total = 0;
    double worst = 0.0;
    for (const auto &[m, trials] : plan) {
        const auto r = oracle::cross_check(m, trials, 1000 + static_cast<std::uint64_t>(m));
        total += r.trials;
        worst = std::max(worst, r.max_deviation);
    }
    const double elapsed = seconds_since(t0);
    v.require(total >= 1000, "trial count");
    v.require(worst <= 1e-12, "deviation");
    v.require(elapsed < 120.0, "runtime");
    v.detail << " trials=" << total << " max_dev=" << worst << " t=" << elapsed << "s";
    return v;
}

Verdict anticommutation() {
    Verdict v;
    const auto layout = RegisterLayout::fermions(8);
    std::mt19937_64 rng(77);
    std::vector<StateVector> states;
    for (int t = 0; t < 100; ++t) {
        states.push_back(oracle::random_state(layout, rng));
    }
    const double res = exchange_residual(layout, states);
    v.require(res <= 1e-12, "residual");
    v.detail << " states=100 M=8 max_residual=" << res;
    return v;
}

Verdict closed_loops() {
    Verdict v;
    std::mt19937_64 rng(88);
    int agree = 0;
    const int total = 500;
    for (int t = 0; t < total; ++t) {
        const int m = std::uniform_int_distribution<int>(2, 10)(rng);
        const int k = std::uniform_int_distribution<int>(1, m - 1)(rng);
        std::vector<int> sites(static_cast<std::size_t>(m));
        std::iota(sites.begin(), sites.end(), 1);
        std::shuffle(sites.begin(), sites.end(), rng);
        FockBasisState start{0, m};
        for (int q = 0; q < k; ++q) {
            start.bits |= ModeIndex(sites[static_cast<std::size_t>(q)]).mask();
        }
        const HopSequence loop = random_closed_loop(start, rng, 3 * m);
        const auto world = oracle::worldline_parity(start, loop);
        const auto run = apply_hop_sequence(loop, StateVector::basis(RegisterLayout::fermions(m), start));
        if (world.closed && run.ledger.product() == world.parity &&
            std::abs(run.state.amplitude(start) - Amplitude(world.parity)) <= 1e-12) {
            ++agree;
        }
    }
    v.require(agree == total, "agreement");
    v.detail << " " << agree << "/" << total << " loops";
    return v;
}

double trotter_slope(int order, double &max_norm_err) {
    const auto layout = RegisterLayout::fermions(6);
    const HamiltonianSpec h{{{1, 2, 1.0}, {2, 3, 0.7}, {3, 6, 1.3}}};
    const StateVector psi = StateVector::basis(layout, "101010");
    const StateVector exact = exact_evolve(h, 1.0, psi);
    max_norm_err = std::max(max_norm_err, std::abs(exact.norm() - 1.0));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int steps[] = {8, 16, 32, 64};
    for (int s : steps) {
        const StateVector approx = trotter_evolve(h, 1.0, s, order, psi);
        max_norm_err = std::max(max_norm_err, std::abs(approx.norm() - 1.0));
        const double x = std::log(s);
        const double y = std::log((approx - exact).norm());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
}

Verdict dynamics() {
    Verdict v;
    const auto layout = RegisterLayout::fermions(4);
    const auto pulsed = experiment_pulsed_half_swap(layout);
    const auto algebraic = experiment_half_swap_interference(layout);
    v.require(pulsed.phase() && algebraic.phase() && std::abs(*pulsed.phase() - *algebraic.phase()) <= 1e-10,
              "pulsed phase");
    double norm_err = 0.0;
    for (const auto &b : pulsed.branches) {
        norm_err = std::max(norm_err, std::abs(b.state.norm() - 1.0));
    }
    const double s1 = trotter_slope(1, norm_err);
    const double s2 = trotter_slope(2, norm_err);
    v.require(std::abs(s1 + 1.0) <= 0.3, "order-1 slope");
    v.require(std::abs(s2 + 2.0) <= 0.3, "order-2 slope");
    v.require(norm_err <= 1e-10, "norm");
    v.detail << " pulsed phase=" << cli::phase_text(pulsed.phase()) << " slope1=" << s1 << " slope2=" << s2
             << " max_norm_err=" << norm_err;
    return v;
}

Verdict reference_formulas() {
    Verdict v;
    using namespace interferometry;
    const double lambda = 500e-9;
    const PathProfile arm{{{1.0, 1.0}}};
    PathProfile plate = arm;
    plate.segments.push_back({lambda / 2, 1.0});
    const double hw = optical_path_phase(plate, arm, lambda);
    v.require(hw == kPi, "half-wave plate");
    // Independent evaluation of 1.67492749804e-27 * 9.80665 * 0.01 * 1e-3 / 1.054571817e-34.
    const double expected = 1557.5447289479353;
    const double cow = cow_phase({constants::neutron_mass, constants::standard_gravity, 0.01, 1e-3});
    v.require(std::abs(cow - expected) <= 1e-12 * expected, "cow phase");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", cow);
    v.detail << " half_wave=" << hw << " cow=" << buf;
    return v;
}

} // namespace

int main() {
    const std::pair<const char *, std::function<Verdict()>> criteria[] = {
        {"1 canonical operator strings", canonical_strings},
        {"2 half-swap interference", half_swap},
        {"3 full controlled swap", full_swap},
        {"4 ring rotation law", ring},
        {"5 statistics contrast", statistics_contrast},
        {"6 oracle equivalence", oracle_equivalence},
        {"7 anticommutation suite", anticommutation},
        {"8 closed-loop parity", closed_loops},
        {"9 dynamics", dynamics},
        {"10 reference formulas", reference_formulas},
    };
    int failures = 0;
    for (const auto &[name, run] : criteria) {
        Verdict v;
        try {
            v = run();
        } catch (const std::exception &e) {
            v.pass = false;
            v.detail << " exception: " << e.what();
        }
        failures += v.pass ? 0 : 1;
        std::printf("%s criterion %s:%s\n", v.pass ? "PASS" : "FAIL", name, v.detail.str().c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}
