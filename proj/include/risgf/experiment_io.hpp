// Copyright 2026 The risgf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "risgf/errors.hpp"
#include "risgf/outage.hpp"
#include "risgf/phase_search.hpp"

namespace risgf {

//---------------------------------------------------------------------------//
// Experiment files and CSV output.
//
// An experiment file is a flat JSON object:
//
//   {
//     "sensors": 5, "slots": 6, "ris_elements": [0, 6], "phase_bits": 1,
//     "scheme": "shared", "retransmissions": 0,
//     "receivers": ["zf", "mmse", "mmse-sic"], "rate": 2,
//     "snr_db": [0, 5, 10], "trials": 200000, "seed": 1,
//     "phase_mode": "fixed", "phase_indices": [0, 0, 0, 0, 0, 0]
//   }
//
// scheme, receiver(s) and ris_elements accept a scalar or a list; a sweep
// runs their Cartesian product.
//---------------------------------------------------------------------------//

enum class PhaseMode { None, Fixed, Enumerate };

inline PhaseMode parse_phase_mode(std::string_view text)
{
    if (text == "none") {
        return PhaseMode::None;
    }
    if (text == "fixed") {
        return PhaseMode::Fixed;
    }
    if (text == "enumerate") {
        return PhaseMode::Enumerate;
    }
    throw ConfigError("unknown phase_mode '" + std::string(text) + "'");
}

struct ExperimentFile {
    PhaseMode phase_mode = PhaseMode::None;
    unsigned phase_bits = 1;
    /// scheme x receiver x ris_elements, in that nesting order.
    std::vector<ExperimentConfig> variants;
};

namespace detail {

template <class T>
std::vector<T> scalar_or_list(const nlohmann::json& v, const char* key)
{
    try {
        if (v.is_array()) {
            if (v.empty()) {
                throw ConfigError(std::string(key) + " must not be empty");
            }
            return v.get<std::vector<T>>();
        }
        return {v.get<T>()};
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

template <class T>
T required(const nlohmann::json& doc, const char* key)
{
    if (!doc.contains(key)) {
        throw ConfigError(std::string("missing required key '") + key + "'");
    }
    try {
        return doc.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

template <class T>
T optional_value(const nlohmann::json& doc, const char* key, T fallback)
{
    return doc.contains(key) ? required<T>(doc, key) : fallback;
}

}  // namespace detail

/// Parses and validates an experiment document. Throws ConfigError for
/// malformed input and CapacityError for infeasible dedicated plans.
inline ExperimentFile parse_experiment(const nlohmann::json& doc)
{
    using detail::optional_value;
    using detail::required;

    if (!doc.is_object()) {
        throw ConfigError("experiment file must be a JSON object");
    }
    static const std::set<std::string> known = {
        "sensors", "slots", "ris_elements", "phase_bits", "scheme", "retransmissions",
        "receiver", "receivers", "rate", "snr_db", "trials", "seed", "phase_mode",
        "phase_indices"};
    for (const auto& item : doc.items()) {
        if (!known.contains(item.key())) {
            throw ConfigError("unknown key '" + item.key() + "'");
        }
    }
    if (doc.contains("receiver") && doc.contains("receivers")) {
        throw ConfigError("give either 'receiver' or 'receivers', not both");
    }

    const auto sensors = required<std::size_t>(doc, "sensors");
    const auto slots = required<std::size_t>(doc, "slots");
    const auto ks = doc.contains("ris_elements")
                        ? detail::scalar_or_list<std::size_t>(doc["ris_elements"], "ris_elements")
                        : std::vector<std::size_t>{0};
    const auto schemes = detail::scalar_or_list<std::string>(
        doc.contains("scheme") ? doc["scheme"] : nlohmann::json("shared"), "scheme");
    const char* rx_key = doc.contains("receiver") ? "receiver" : "receivers";
    if (!doc.contains(rx_key)) {
        throw ConfigError("missing required key 'receivers'");
    }
    const auto receivers = detail::scalar_or_list<std::string>(doc[rx_key], rx_key);
    if (!doc.contains("snr_db")) {
        throw ConfigError("missing required key 'snr_db'");
    }
    const auto snrs = detail::scalar_or_list<double>(doc["snr_db"], "snr_db");

    ExperimentFile file;
    file.phase_bits = optional_value<unsigned>(doc, "phase_bits", 1);
    bool any_ris = false;
    for (auto k : ks) {
        any_ris = any_ris || k > 0;
    }
    file.phase_mode = parse_phase_mode(
        optional_value<std::string>(doc, "phase_mode", any_ris ? "fixed" : "none"));
    if (file.phase_mode == PhaseMode::None && any_ris) {
        throw ConfigError("phase_mode 'none' requires ris_elements = 0");
    }
    const auto fixed_indices = doc.contains("phase_indices")
                                   ? required<std::vector<unsigned>>(doc, "phase_indices")
                                   : std::vector<unsigned>{};

    ExperimentConfig proto;
    proto.retransmissions = optional_value<std::size_t>(doc, "retransmissions", 0);
    proto.rate = required<double>(doc, "rate");
    proto.snr_db = snrs;
    proto.trials = required<std::uint64_t>(doc, "trials");
    proto.seed = optional_value<std::uint64_t>(doc, "seed", 0);

    for (const auto& s : schemes) {
        for (const auto& r : receivers) {
            for (auto k : ks) {
                ExperimentConfig cfg = proto;
                cfg.dims = {sensors, slots, k};
                cfg.scheme = parse_scheme(s);
                cfg.receiver = parse_receiver(r);
                if (k > 0) {
                    if (!fixed_indices.empty() && fixed_indices.size() != k) {
                        throw ConfigError("phase_indices has " +
                                          std::to_string(fixed_indices.size()) +
                                          " entries, ris_elements = " + std::to_string(k));
                    }
                    try {
                        cfg.phase = fixed_indices.empty()
                                        ? PhaseConfig::uniform(k, file.phase_bits)
                                        : PhaseConfig(file.phase_bits, fixed_indices);
                    } catch (const std::invalid_argument& e) {
                        throw ConfigError(e.what());
                    }
                }
                cfg.validate();
                file.variants.push_back(std::move(cfg));
            }
        }
    }
    return file;
}

//---------------------------------------------------------------------------//
// CSV
//---------------------------------------------------------------------------//

inline constexpr std::string_view kCsvHeader =
    "snr_db,scheme,receiver,ris_elements,phase_bits,phase_indices,sensor_id,trials,outage,"
    "std_err,rate";

namespace detail {

inline std::string format_number(double v, const char* fmt)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

}  // namespace detail

inline std::string csv_row(double snr_db, const ExperimentConfig& cfg, const PhaseConfig* phase,
                           const OutageEstimate& est)
{
    std::string row;
    row += detail::format_number(snr_db, "%.6g");
    row += ',';
    row += to_string(cfg.scheme);
    row += ',';
    row += to_string(cfg.receiver);
    row += ',';
    row += std::to_string(cfg.dims.ris_elements);
    row += ',';
    row += phase ? std::to_string(phase->bits()) : "0";
    row += ',';
    row += phase ? phase->label() : "";
    row += ',';
    row += std::to_string(est.sensor_id);
    row += ',';
    row += std::to_string(est.trials);
    row += ',';
    row += detail::format_number(est.p_hat, "%.10g");
    row += ',';
    row += detail::format_number(est.std_err, "%.10g");
    row += ',';
    row += detail::format_number(cfg.rate, "%.6g");
    return row;
}

/// Runs every variant over its SNR grid and writes one row per
/// (variant, snr, sensor). progress, when set, receives one line per point.
inline void run_sweep(const ExperimentFile& file, const EngineOptions& options, std::ostream& csv,
                      std::ostream* progress = nullptr)
{
    csv << kCsvHeader << '\n';
    for (std::size_t v = 0; v < file.variants.size(); ++v) {
        const auto& cfg = file.variants[v];
        EngineOptions opt = options;
        opt.variant_tag = v;
        const PhaseConfig* phase = cfg.phase ? &*cfg.phase : nullptr;
        for (std::size_t s = 0; s < cfg.snr_db.size(); ++s) {
            if (progress) {
                *progress << "[sweep] " << to_string(cfg.scheme) << ' ' << to_string(cfg.receiver)
                          << " K=" << cfg.dims.ris_elements << " snr=" << cfg.snr_db[s]
                          << " dB\n";
            }
            for (const auto& est : estimate_outage(cfg, cfg.snr_db[s], s, opt)) {
                csv << csv_row(cfg.snr_db[s], cfg, phase, est) << '\n';
            }
        }
    }
}

/// Checks that a file describes exactly one phase-table scenario.
inline const ExperimentConfig& phase_table_config(const ExperimentFile& file)
{
    if (file.variants.size() != 1) {
        throw ConfigError("phase-table needs a single scheme, receiver and ris_elements value");
    }
    const auto& cfg = file.variants.front();
    if (cfg.snr_db.size() != 1) {
        throw ConfigError("phase-table needs exactly one snr_db value");
    }
    if (cfg.dims.ris_elements < 1) {
        throw ConfigError("phase-table needs ris_elements >= 1");
    }
    return cfg;
}

/// Ranked table, one row per configuration carrying its worst sensor.
inline void run_phase_table(const ExperimentFile& file, const EngineOptions& options,
                            std::ostream& csv)
{
    const auto& cfg = phase_table_config(file);
    const auto rows = evaluate_configs(cfg, cfg.snr_db.front(), options);
    csv << kCsvHeader << '\n';
    for (const auto& row : rows) {
        csv << csv_row(cfg.snr_db.front(), cfg, &row.phase, row.worst_sensor_outage) << '\n';
    }
}

/// JSON echo of a resolved configuration, for run manifests.
inline nlohmann::json to_json(const ExperimentConfig& cfg)
{
    nlohmann::json j;
    j["sensors"] = cfg.dims.sensors;
    j["slots"] = cfg.dims.slots;
    j["ris_elements"] = cfg.dims.ris_elements;
    j["scheme"] = std::string(to_string(cfg.scheme));
    j["retransmissions"] = cfg.retransmissions;
    j["receiver"] = std::string(to_string(cfg.receiver));
    j["rate"] = cfg.rate;
    j["snr_db"] = cfg.snr_db;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    if (cfg.phase) {
        j["phase_bits"] = cfg.phase->bits();
        j["phase_indices"] = std::vector<unsigned>(cfg.phase->indices().begin(),
                                                   cfg.phase->indices().end());
    }
    return j;
}

}  // namespace risgf
