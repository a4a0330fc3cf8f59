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
 * Command-line front end: `run`, `verify`, `attribute` and `reference`.
 *
 * Exit codes: 0 success, 1 verification failure, 2 bad input, 3 invalid
 * experiment result.
 */

#pragma once

#include <cmath>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynamics.hpp"
#include "fock_core.hpp"
#include "interferometry.hpp"
#include "invariants.hpp"
#include "oracle.hpp"
#include "protocols.hpp"
#include "result_json.hpp"

namespace exlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitInvalidResult = 3;

/// Thrown when a result cannot be produced (a branch annihilated the state).
class InvalidResult : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string experiment;
    std::optional<int> modes;
    int n = 2;
    std::string statistics = "fermion";
    std::string mode = "sequential";
    std::optional<double> theta;
    std::optional<std::int64_t> shots;
    std::optional<std::uint64_t> seed;
    std::string basis = "X";
    std::string format;
    std::string schedule_file;
    std::string turn = "step";
};

/**
 * Statistics spec: "fermion", "boson", "mixed" (two mutually anticommuting
 * fermionic species in contiguous blocks) or "mixed:<rows>[@<assignment>]"
 * with rows of '+'/'-' separated by ',' (e.g. "mixed:-+,+-@0011").
 */
inline RegisterLayout parse_statistics(const std::string &spec, int modes) {
    if (spec == "fermion") {
        return RegisterLayout::fermions(modes);
    }
    if (spec == "boson") {
        return RegisterLayout::hardcore_bosons(modes);
    }
    if (spec == "mixed") {
        return RegisterLayout::blocked(modes, StatisticsMatrix(2, Exchange::anticommute));
    }
    if (!spec.starts_with("mixed:")) {
        throw UsageError("unknown statistics '" + spec + "' (fermion|boson|mixed[:<matrix>])");
    }
    std::string body = spec.substr(6);
    std::string assignment;
    if (const auto at = body.find('@'); at != std::string::npos) {
        assignment = body.substr(at + 1);
        body = body.substr(0, at);
    }
    std::vector<std::vector<Exchange>> rows;
    std::stringstream ss(body);
    std::string row;
    while (std::getline(ss, row, ',')) {
        std::vector<Exchange> r;
        for (char c : row) {
            if (c == '+') {
                r.push_back(Exchange::commute);
            } else if (c == '-') {
                r.push_back(Exchange::anticommute);
            } else {
                throw UsageError("statistics matrix entries must be '+' or '-'");
            }
        }
        rows.push_back(std::move(r));
    }
    StatisticsMatrix matrix(rows);
    if (assignment.empty()) {
        return RegisterLayout::blocked(modes, matrix);
    }
    if (static_cast<int>(assignment.size()) != modes) {
        throw UsageError("species assignment must list one species per mode");
    }
    std::vector<int> species_of;
    for (char c : assignment) {
        if (c < '0' || c > '9') {
            throw UsageError("species assignment must be digits");
        }
        species_of.push_back(c - '0');
    }
    return {modes, std::move(species_of), RegisterLayout::default_species(matrix.species_count()),
            matrix};
}

inline EvaluationMode parse_mode(const std::string &m) {
    if (m == "literal") {
        return EvaluationMode::literal;
    }
    if (m == "sequential") {
        return EvaluationMode::sequential;
    }
    throw UsageError("mode must be literal or sequential");
}

namespace detail {

inline std::string read_text(const std::string &path) {
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nlohmann::json parse_json(const std::string &text, const std::string &what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw UsageError(what + " is not valid JSON: " + e.what());
    }
}

inline void only_fields(const nlohmann::json &obj, std::initializer_list<const char *> allowed,
                        const std::string &what) {
    if (!obj.is_object()) {
        throw UsageError(what + " must be a JSON object");
    }
    for (const auto &[key, value] : obj.items()) {
        bool ok = false;
        for (const char *a : allowed) {
            ok = ok || key == a;
        }
        if (!ok) {
            throw UsageError("unknown field '" + key + "' in " + what);
        }
    }
}

inline double number_field(const nlohmann::json &obj, const char *key, const std::string &what) {
    if (!obj.contains(key) || !obj.at(key).is_number()) {
        throw UsageError(what + " needs numeric field '" + key + "'");
    }
    return obj.at(key).get<double>();
}

inline Schedule parse_schedule_array(const nlohmann::json &arr, const std::string &what) {
    if (!arr.is_array()) {
        throw UsageError(what + " must be an array of pulses");
    }
    Schedule s;
    for (const auto &p : arr) {
        only_fields(p, {"from", "to", "theta"}, what + " pulse");
        if (!p.contains("from") || !p.contains("to") || !p.at("from").is_number_integer() ||
            !p.at("to").is_number_integer()) {
            throw UsageError(what + " pulse needs integer 'from' and 'to'");
        }
        const double theta = p.contains("theta") ? number_field(p, "theta", what + " pulse")
                                                 : std::numbers::pi / 2;
        s.emplace_back(p.at("from").get<int>(), p.at("to").get<int>(), theta);
    }
    return s;
}

struct PulseFile {
    Schedule branch0;
    Schedule branch1;
    std::optional<FockBasisState> initial;
};

/// {"branch0": [...], "branch1": [...], "initial": "|1010⟩"} with "initial" optional.
inline PulseFile parse_pulse_file(const nlohmann::json &j) {
    only_fields(j, {"branch0", "branch1", "initial"}, "schedule file");
    if (!j.contains("branch0") || !j.contains("branch1")) {
        throw UsageError("schedule file needs 'branch0' and 'branch1'");
    }
    PulseFile f{parse_schedule_array(j.at("branch0"), "branch0"),
                parse_schedule_array(j.at("branch1"), "branch1"), std::nullopt};
    if (j.contains("initial")) {
        if (!j.at("initial").is_string()) {
            throw UsageError("'initial' must be a ket string");
        }
        f.initial = parse_ket(j.at("initial").get<std::string>());
    }
    return f;
}

inline void reject_flag(bool present, const char *flag, const std::string &experiment) {
    if (present) {
        throw UsageError(std::string(flag) + " does not apply to experiment '" + experiment + "'");
    }
}

} // namespace detail

/// Validates a RunConfig and runs it. Throws UsageError on bad input.
inline ExperimentResult execute(const RunConfig &cfg) {
    const EvaluationMode mode = parse_mode(cfg.mode);
    if (cfg.shots && !cfg.seed) {
        throw UsageError("--shots requires --seed");
    }
    if (cfg.basis != "X" && cfg.basis != "Y") {
        throw UsageError("--basis must be X or Y");
    }
    const std::string &ex = cfg.experiment;
    ExperimentResult result;
    if (ex == "full-swap" || ex == "half-swap") {
        detail::reject_flag(cfg.theta.has_value(), "--theta", ex);
        detail::reject_flag(!cfg.schedule_file.empty(), "--schedule", ex);
        detail::reject_flag(cfg.turn != "step", "--turn", ex);
        const int modes = cfg.modes.value_or(4);
        if (modes != 4) {
            throw UsageError(ex + " is defined on 4 modes");
        }
        const RegisterLayout layout = parse_statistics(cfg.statistics, modes);
        result = ex == "full-swap" ? experiment_full_controlled_swap(layout, mode)
                                   : experiment_half_swap_interference(layout, mode);
    } else if (ex == "ring") {
        detail::reject_flag(cfg.theta.has_value(), "--theta", ex);
        detail::reject_flag(!cfg.schedule_file.empty(), "--schedule", ex);
        if (cfg.n < 1 || cfg.n > kMaxFastModes / 2) {
            throw UsageError("--n must be in [1, " + std::to_string(kMaxFastModes / 2) + "]");
        }
        RingConfig ring{cfg.n, RingTurn::single_step};
        if (cfg.turn == "revolution") {
            ring.turn = RingTurn::full_revolution;
        } else if (cfg.turn != "step") {
            throw UsageError("--turn must be step or revolution");
        }
        if (cfg.modes && *cfg.modes != ring.modes()) {
            throw UsageError("ring with --n " + std::to_string(cfg.n) + " uses " +
                             std::to_string(ring.modes()) + " modes");
        }
        result = experiment_ring_rotation(ring, parse_statistics(cfg.statistics, ring.modes()), mode);
    } else if (ex == "pulse") {
        detail::reject_flag(cfg.turn != "step", "--turn", ex);
        if (mode == EvaluationMode::literal) {
            throw UsageError("pulse schedules have no literal evaluation");
        }
        if (!cfg.schedule_file.empty()) {
            detail::reject_flag(cfg.theta.has_value(), "--theta (with --schedule)", ex);
            const auto file = detail::parse_pulse_file(
                detail::parse_json(detail::read_text(cfg.schedule_file), "schedule file"));
            const FockBasisState initial = file.initial.value_or(parse_ket("1010"));
            const int modes = cfg.modes.value_or(initial.modes);
            if (modes != initial.modes) {
                throw UsageError("--modes disagrees with the schedule's initial ket");
            }
            result = run_pulse_interference(file.branch0, file.branch1,
                                            parse_statistics(cfg.statistics, modes), initial);
        } else {
            const int modes = cfg.modes.value_or(4);
            if (modes != 4) {
                throw UsageError("the built-in pulsed half-swap uses 4 modes");
            }
            const double theta = cfg.theta.value_or(std::numbers::pi / 2);
            if (!std::isfinite(theta)) {
                throw UsageError("--theta must be finite");
            }
            result = experiment_pulsed_half_swap(parse_statistics(cfg.statistics, modes), theta);
        }
    } else {
        throw UsageError("unknown experiment '" + ex + "' (full-swap|half-swap|ring|pulse)");
    }
    result.params["statistics"] = cfg.statistics;
    result.seed = cfg.seed;
    if (!result.valid) {
        throw InvalidResult(result.invalid_reason);
    }
    return result;
}

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out.push_back(c);
        }
    }
    out += "\"";
    return out;
}

inline std::string format_double(double v) {
    nlohmann::json j = v;
    return j.dump();
}

inline std::string phase_text(const std::optional<double> &phase) {
    return phase ? format_double(*phase) : std::string("null");
}

inline void write_run(const ExperimentResult &r, const std::optional<MeasurementOutcome> &m,
                      const std::string &format, std::ostream &out) {
    if (format == "csv") {
        out << "experiment,phase_rad,visibility,branch0_final,branch1_final,x_plus,y_plus,seed\r\n";
        out << csv_field(r.experiment) << ',' << phase_text(r.reading.phase) << ','
            << format_double(r.reading.visibility) << ',' << csv_field(r.branches[0].state.to_string())
            << ',' << csv_field(r.branches[1].state.to_string()) << ','
            << format_double(r.probabilities.x_plus) << ',' << format_double(r.probabilities.y_plus)
            << ',' << (r.seed ? std::to_string(*r.seed) : std::string()) << "\r\n";
        return;
    }
    out << to_json(r, m).dump(2) << '\n';
}

/// Rows of the sign-attribution table plus per-branch and relative totals.
inline void write_attribution(const ExperimentResult &r, const std::string &format, std::ostream &out) {
    const int p0 = r.branches[0].ledger.product();
    const int p1 = r.branches[1].ledger.product();
    if (format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto &b : r.branches) {
            for (const auto &e : b.ledger.entries) {
                rows.push_back({{"branch", b.label},
                                {"step", e.step},
                                {"from", e.from.value},
                                {"to", e.to.value},
                                {"interval_parity", e.interval_parity},
                                {"sign", e.sign},
                                {"wrap", e.wrap}});
            }
        }
        nlohmann::json j = {
            {"experiment", r.experiment},
            {"rows", rows},
            {"branch_products",
             {{{"branch", r.branches[0].label}, {"sign", p0}}, {{"branch", r.branches[1].label}, {"sign", p1}}}},
            {"relative_sign", p0 * p1},
            {"phase_rad", r.reading.phase ? nlohmann::json(*r.reading.phase) : nlohmann::json(nullptr)},
            {"version", r.version}};
        out << j.dump(2) << '\n';
        return;
    }
    out << "branch,step,from,to,interval_parity,sign,wrap,phase_rad\r\n";
    for (const auto &b : r.branches) {
        for (const auto &e : b.ledger.entries) {
            out << csv_field(b.label) << ',' << e.step << ',' << e.from.value << ',' << e.to.value << ','
                << e.interval_parity << ',' << e.sign << ',' << (e.wrap ? "true" : "false") << ",\r\n";
        }
    }
    out << csv_field(r.branches[0].label) << ",total,,,," << p0 << ",,\r\n";
    out << csv_field(r.branches[1].label) << ",total,,,," << p1 << ",,\r\n";
    out << "relative,total,,,," << p0 * p1 << ",," << phase_text(r.reading.phase) << "\r\n";
}

struct VerifyOptions {
    int modes = 6;
    int trials = 200;
    std::uint64_t seed = 1;
    std::string statistics = "fermion";
};

inline int cmd_verify(const VerifyOptions &opt, std::ostream &out, std::ostream &err) {
    if (opt.trials < 0) {
        err << "error: --trials must be non-negative\n";
        return kExitBadInput;
    }
    RegisterLayout layout;
    try {
        oracle::require_cap(opt.modes);
        layout = parse_statistics(opt.statistics, opt.modes);
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    }
    bool ok = true;
    auto line = [&](const std::string &name, bool pass, const std::string &detail) {
        ok = ok && pass;
        out << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
    };
    std::ostringstream os;

    const auto cc = oracle::cross_check(layout, opt.trials, opt.seed);
    os.str("");
    os << "trials=" << cc.trials << " nonzero=" << cc.nonzero_results << " max_dev=" << cc.max_deviation;
    line("oracle cross-check M=" + std::to_string(opt.modes), cc.passed(), os.str());

    std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<StateVector> states;
    for (int t = 0; t < std::min(opt.trials, 100); ++t) {
        states.push_back(oracle::random_state(layout, rng));
    }
    const double res = exchange_residual(layout, states);
    os.str("");
    os << "states=" << states.size() << " max_residual=" << res;
    line("exchange relations", res <= 1e-12, os.str());

    if (layout.statistics().all_commuting() ||
        layout.statistics() == StatisticsMatrix::fermions()) {
        const bool bosons = layout.statistics().all_commuting();
        int agree = 0;
        std::uniform_int_distribution<int> count(1, std::max(1, opt.modes - 1));
        for (int t = 0; t < opt.trials; ++t) {
            const int k = count(rng);
            std::vector<int> sites(static_cast<std::size_t>(opt.modes));
            std::iota(sites.begin(), sites.end(), 1);
            std::shuffle(sites.begin(), sites.end(), rng);
            FockBasisState start{0, opt.modes};
            for (int q = 0; q < k && q < opt.modes; ++q) {
                start.bits |= ModeIndex(sites[static_cast<std::size_t>(q)]).mask();
            }
            const HopSequence loop = random_closed_loop(start, rng, 2 * opt.modes);
            const auto run = apply_hop_sequence(loop, StateVector::basis(layout, start));
            const int expected = bosons ? +1 : oracle::worldline_parity(start, loop).parity;
            const Amplitude amp = run.state.amplitude(start);
            if (run.ledger.product() == expected && std::abs(amp - Amplitude(expected)) <= 1e-12) {
                ++agree;
            }
        }
        line("closed-loop parity", agree == opt.trials,
             std::to_string(agree) + "/" + std::to_string(opt.trials) + " loops match world-line parity");
    }

    // Canonical four-mode strings, fast path against the dense oracle.
    const RegisterLayout four = RegisterLayout::fermions(4);
    const StateVector s1010 = StateVector::basis(four, "1010");
    const StateVector s0101 = StateVector::basis(four, "0101");
    struct StringCase {
        const char *name;
        OperatorString s;
        const StateVector *input;
        StateVector expected;
    };
    const StringCase cases[] = {
        {"step one f†4 f3 f†2 f1|1010⟩", swap_step_one(), &s1010, s0101},
        {"counterclockwise f†4 f3 f†2 f1|1010⟩", half_swap_counterclockwise(), &s1010, s0101},
        {"clockwise f†2 f3 f†4 f1|1010⟩", half_swap_clockwise(), &s1010, -s0101},
        {"step two (literal) f4 f†3 f2 f†1|0101⟩", swap_step_two(), &s0101, s1010},
    };
    for (const auto &c : cases) {
        const StateVector fast = apply_operator_string(c.s, *c.input);
        const double dev = std::max(max_deviation(fast, c.expected),
                                    oracle::deviation(fast, oracle::dense_apply(four, c.s, oracle::to_dense(*c.input))));
        line(c.name, dev <= 1e-12, "= " + fast.to_string());
    }
    out << "NOTE step two: literal evaluation gives +|1010⟩ while the sign-flipped reference result is -|1010⟩; "
           "sequential hops (2->3),(4->1) give -|1010⟩\n";

    const HopSequence swap_hops{{1, 2}, {3, 4}, {2, 3}, {4, 1}};
    const auto seq = apply_hop_sequence(swap_hops, s1010, 4);
    const double seq_dev = std::max(
        max_deviation(seq.state, -s1010),
        oracle::deviation(seq.state, oracle::dense_apply(four, as_string(swap_hops), oracle::to_dense(s1010))));
    line("sequential full swap", seq_dev <= 1e-12, "= " + seq.state.to_string());

    const int ring_max = std::min(5, oracle::max_modes() / 2);
    for (int n = 1; n <= ring_max; ++n) {
        const RingConfig cfg{n, RingTurn::single_step};
        const auto r = experiment_ring_rotation(cfg);
        const RegisterLayout lay = RegisterLayout::fermions(cfg.modes());
        const StateVector init = StateVector::basis(lay, cfg.initial());
        const Amplitude dense_overlap =
            oracle::dense_apply(lay, as_string(ring_schedule(cfg, true)), oracle::to_dense(init))
                .dot(oracle::dense_apply(lay, as_string(ring_schedule(cfg, false)), oracle::to_dense(init)));
        const double expected = std::numbers::pi * ((n - 1) % 2);
        const bool pass = r.phase() && std::abs(wrap_phase(*r.phase() - expected)) <= 1e-10 &&
                          std::abs(wrap_phase(std::arg(dense_overlap) - expected)) <= 1e-10;
        line("ring n=" + std::to_string(n), pass, "phase=" + phase_text(r.phase()));
    }

    out << (ok ? "verify: PASS" : "verify: FAIL") << '\n';
    return ok ? kExitOk : kExitVerifyFailed;
}

inline nlohmann::json run_reference(const nlohmann::json &in) {
    using namespace interferometry;
    detail::only_fields(in, {"optical", "cow"}, "reference input");
    nlohmann::json out = nlohmann::json::object();
    if (in.contains("optical")) {
        const auto &o = in.at("optical");
        detail::only_fields(o, {"p1", "p2", "wavelength"}, "optical");
        auto path = [](const nlohmann::json &arr, const char *name) {
            if (!arr.is_array()) {
                throw UsageError(std::string(name) + " must be an array of segments");
            }
            PathProfile p;
            for (const auto &s : arr) {
                detail::only_fields(s, {"length", "index"}, "segment");
                p.segments.push_back({detail::number_field(s, "length", "segment"),
                                      detail::number_field(s, "index", "segment")});
            }
            return p;
        };
        const PathProfile p1 = path(o.contains("p1") ? o.at("p1") : nlohmann::json::array(), "p1");
        const PathProfile p2 = path(o.contains("p2") ? o.at("p2") : nlohmann::json::array(), "p2");
        out["optical"] = {{"delta_phi_rad",
                           optical_path_phase(p1, p2, detail::number_field(o, "wavelength", "optical"))}};
    }
    if (in.contains("cow")) {
        const auto &c = in.at("cow");
        detail::only_fields(c, {"mass", "gravity", "height", "time"}, "cow");
        COWParams p;
        if (c.contains("mass")) {
            p.mass = detail::number_field(c, "mass", "cow");
        }
        if (c.contains("gravity")) {
            p.gravity = detail::number_field(c, "gravity", "cow");
        }
        p.height = detail::number_field(c, "height", "cow");
        p.time = detail::number_field(c, "time", "cow");
        out["cow"] = {{"phi_rad", cow_phase(p)}};
    }
    out["version"] = kVersion;
    return out;
}

/// Built-in reference input: a half-wave plate and a neutron COW geometry.
inline nlohmann::json default_reference_input() {
    return {{"optical",
             {{"p1", {{{"length", 1.0}, {"index", 1.0}}, {{"length", 250e-9}, {"index", 1.0}}}},
              {"p2", {{{"length", 1.0}, {"index", 1.0}}}},
              {"wavelength", 500e-9}}},
            {"cow", {{"height", 0.01}, {"time", 1e-3}}}};
}

inline int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Exact fermionic exchange-phase interference simulator", "exchange_lab"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_experiment_flags = [&cfg](CLI::App *sub) {
        sub->add_option("experiment", cfg.experiment, "full-swap | half-swap | ring | pulse")->required();
        sub->add_option("--modes", cfg.modes, "register size");
        sub->add_option("--n", cfg.n, "ring particle count");
        sub->add_option("--statistics", cfg.statistics, "fermion | boson | mixed[:<matrix>[@<assignment>]]");
        sub->add_option("--mode", cfg.mode, "literal | sequential");
        sub->add_option("--theta", cfg.theta, "pulse angle in radians");
        sub->add_option("--shots", cfg.shots, "sampled ancilla shots (needs --seed)");
        sub->add_option("--seed", cfg.seed, "RNG seed");
        sub->add_option("--basis", cfg.basis, "ancilla basis for --shots: X | Y");
        sub->add_option("--format", cfg.format, "json | csv");
        sub->add_option("--schedule", cfg.schedule_file, "pulse schedule JSON file");
        sub->add_option("--turn", cfg.turn, "ring rotation: step | revolution");
    };
    auto *run = app.add_subcommand("run", "run a named experiment and print its result");
    add_experiment_flags(run);
    auto *attribute = app.add_subcommand("attribute", "print the per-hop sign ledger");
    add_experiment_flags(attribute);

    VerifyOptions vopt;
    auto *verify = app.add_subcommand("verify", "cross-check the fast path against the dense oracle");
    verify->add_option("--modes", vopt.modes, "register size");
    verify->add_option("--trials", vopt.trials, "random trials");
    verify->add_option("--seed", vopt.seed, "RNG seed");
    verify->add_option("--statistics", vopt.statistics, "fermion | boson | mixed[:<matrix>]");

    std::string ref_input;
    auto *reference = app.add_subcommand("reference", "evaluate optical-path and COW phases (JSON in/out)");
    reference->add_option("--input", ref_input, "input JSON file, '-' for stdin");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    }

    try {
        if (verify->parsed()) {
            return cmd_verify(vopt, out, err);
        }
        if (reference->parsed()) {
            const nlohmann::json in = ref_input.empty()
                                          ? default_reference_input()
                                          : detail::parse_json(detail::read_text(ref_input), "reference input");
            out << run_reference(in).dump(2) << '\n';
            return kExitOk;
        }
        const bool attributing = attribute->parsed();
        const std::string format = cfg.format.empty() ? (attributing ? "csv" : "json") : cfg.format;
        if (format != "json" && format != "csv") {
            throw UsageError("--format must be json or csv");
        }
        if (attributing && parse_mode(cfg.mode) == EvaluationMode::literal) {
            throw UsageError("attribute needs sequential evaluation; literal strings have no per-hop ledger");
        }
        const ExperimentResult result = execute(cfg);
        if (attributing) {
            write_attribution(result, format, out);
            return kExitOk;
        }
        std::optional<MeasurementOutcome> sampled;
        if (cfg.shots) {
            sampled = ancilla_measure(result, cfg.basis == "X" ? MeasurementBasis::x : MeasurementBasis::y,
                                      cfg.shots, cfg.seed);
        }
        write_run(result, sampled, format, out);
        return kExitOk;
    } catch (const InvalidResult &e) {
        err << "error: invalid experiment result: " << e.what() << '\n';
        return kExitInvalidResult;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    }
}

inline int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    std::vector<const char *> argv;
    argv.push_back("exchange_lab");
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace exlab::cli
