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
 * JSON form of ExperimentResult:
 *
 *   {experiment, params, phase_rad (number|null), visibility,
 *    branch_final: [ket, ket], ledgers: [[{step, op, sign, interval_parity, wrap}]],
 *    probabilities, seed (number|null), version}
 *
 * Keys are emitted sorted (nlohmann::json objects are ordered maps).
 */

#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "protocols.hpp"

namespace exlab {

inline nlohmann::json ledger_to_json(const SignLedger &ledger) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &e : ledger.entries) {
        rows.push_back({{"step", e.step},
                        {"op", e.op},
                        {"sign", e.sign},
                        {"interval_parity", e.interval_parity},
                        {"wrap", e.wrap}});
    }
    return rows;
}

inline nlohmann::json to_json(const ExperimentResult &r,
                              const std::optional<MeasurementOutcome> &sampled = std::nullopt) {
    nlohmann::json j;
    j["experiment"] = r.experiment;
    j["params"] = r.params;
    j["phase_rad"] = r.reading.phase ? nlohmann::json(*r.reading.phase) : nlohmann::json(nullptr);
    j["visibility"] = r.reading.visibility;
    j["branch_final"] = {r.branches[0].state.to_string(), r.branches[1].state.to_string()};
    j["ledgers"] = {ledger_to_json(r.branches[0].ledger), ledger_to_json(r.branches[1].ledger)};
    nlohmann::json probs = {{"x_plus", r.probabilities.x_plus}, {"y_plus", r.probabilities.y_plus}};
    if (sampled && sampled->shots) {
        probs["basis"] = sampled->basis == MeasurementBasis::x ? "X" : "Y";
        probs["shots"] = *sampled->shots;
        probs["plus_count"] = *sampled->plus_count;
    }
    j["probabilities"] = std::move(probs);
    j["seed"] = r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr);
    j["version"] = r.version;
    return j;
}

/// Empty string when `j` conforms to the result schema, otherwise the first problem found.
inline std::string check_result_schema(const nlohmann::json &j) {
    if (!j.is_object()) {
        return "result is not an object";
    }
    const char *required[] = {"experiment", "params",  "phase_rad",     "visibility", "branch_final",
                              "ledgers",    "probabilities", "seed", "version"};
    for (const char *k : required) {
        if (!j.contains(k)) {
            return std::string("missing field '") + k + "'";
        }
    }
    if (j.size() != std::size(required)) {
        return "unexpected extra fields";
    }
    if (!j["experiment"].is_string() || !j["version"].is_string()) {
        return "experiment/version must be strings";
    }
    if (!j["params"].is_object() || !j["probabilities"].is_object()) {
        return "params/probabilities must be objects";
    }
    if (!(j["phase_rad"].is_number() || j["phase_rad"].is_null())) {
        return "phase_rad must be a number or null";
    }
    if (!j["visibility"].is_number()) {
        return "visibility must be a number";
    }
    if (!(j["seed"].is_number_unsigned() || j["seed"].is_number_integer() || j["seed"].is_null())) {
        return "seed must be an integer or null";
    }
    const auto &finals = j["branch_final"];
    if (!finals.is_array() || finals.size() != 2 || !finals[0].is_string() || !finals[1].is_string()) {
        return "branch_final must hold two kets";
    }
    const auto &ledgers = j["ledgers"];
    if (!ledgers.is_array() || ledgers.size() != 2) {
        return "ledgers must hold two arrays";
    }
    for (const auto &ledger : ledgers) {
        if (!ledger.is_array()) {
            return "ledger must be an array";
        }
        for (const auto &row : ledger) {
            auto field = [&row](const char *k) {
                return row.contains(k) ? row.at(k) : nlohmann::json();
            };
            if (!row.is_object() || row.size() != 5 || !field("step").is_number_integer() ||
                !field("op").is_string() || !field("sign").is_number_integer() ||
                !field("interval_parity").is_number_integer() || !field("wrap").is_boolean()) {
                return "malformed ledger row";
            }
        }
    }
    return {};
}

} // namespace exlab
