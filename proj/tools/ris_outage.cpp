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

// ris_outage: experiment runner for RIS-aided grant-free outage simulations.
//
//   ris_outage sweep       --config fig2.json --out fig2.csv
//   ris_outage phase-table --config table.json --out table.csv
//   ris_outage validate
//
// Exit codes: 0 ok, 1 validation failure, 2 configuration/usage error,
// 3 capacity or dimension error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "risgf/experiment_io.hpp"
#include "risgf/self_check.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kOk = 0,
    kValidationFailed = 1,
    kConfigError = 2,
    kCapacityError = 3,
};

struct Options {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
    bool independent_streams = false;
};

risgf::ExperimentFile load(const Options& opt)
{
    std::ifstream in(opt.config_path);
    if (!in) {
        throw risgf::ConfigError("cannot read config file '" + opt.config_path + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw risgf::ConfigError(std::string("config parse error: ") + e.what());
    }
    auto file = risgf::parse_experiment(doc);
    if (opt.seed) {
        for (auto& v : file.variants) {
            v.seed = *opt.seed;
        }
    }
    return file;
}

risgf::EngineOptions engine_options(const Options& opt)
{
    risgf::EngineOptions e;
    e.workers = opt.workers;
    e.common_random_numbers = !opt.independent_streams;
    return e;
}

/// Writes CSV (to --out or stdout) and a manifest next to it.
template <class Body>
int run_to_csv(const std::string& subcommand, const Options& opt, Body&& body)
{
    const auto start = std::chrono::steady_clock::now();
    const auto file = load(opt);

    std::ostringstream csv;
    body(file, csv);

    if (opt.out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(opt.out_path, std::ios::binary);
        if (!out) {
            throw risgf::ConfigError("cannot write '" + opt.out_path + "'");
        }
        out << csv.str();
    }

    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    nlohmann::json manifest;
    manifest["tool"] = "ris_outage";
    manifest["version"] = kVersion;
    manifest["subcommand"] = subcommand;
    manifest["config_path"] = opt.config_path;
    manifest["seed"] = file.variants.front().seed;
    manifest["common_random_numbers"] = !opt.independent_streams;
    manifest["wall_seconds"] = elapsed.count();
    for (const auto& v : file.variants) {
        manifest["configs"].push_back(risgf::to_json(v));
    }
    if (!opt.out_path.empty()) {
        const std::string manifest_path = opt.out_path + ".manifest.json";
        std::ofstream(manifest_path) << manifest.dump(2) << '\n';
        std::cout << opt.out_path << '\n' << manifest_path << '\n';
    } else {
        std::cerr << manifest.dump(2) << '\n';
    }
    return kOk;
}

int run_validate(const Options& opt, std::uint64_t siso_trials, std::size_t channels)
{
    const std::uint64_t seed = opt.seed.value_or(1);
    const auto checks = risgf::run_self_checks(seed, siso_trials, channels, opt.workers);
    bool ok = true;
    for (const auto& c : checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": observed " << std::setprecision(4)
                  << c.observed << ", limit " << c.limit << ", margin " << c.margin << '\n';
        ok = ok && c.passed;
    }
    return ok ? kOk : kValidationFailed;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo outage simulator for RIS-aided grant-free uplink"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Options opt;
    std::uint64_t seed_value = 0;
    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", opt.config_path, "experiment JSON file");
        if (needs_config) {
            c->required()->check(CLI::ExistingFile);
        }
        sub->add_option("--out", opt.out_path, "CSV output path (stdout if omitted)");
        sub->add_option("--seed", seed_value, "override the file's seed");
        sub->add_option("--workers", opt.workers, "worker threads")->check(CLI::Range(1u, 1024u));
        sub->add_flag("--independent-streams", opt.independent_streams,
                      "draw fresh channels per SNR point and variant");
    };

    auto* sweep = app.add_subcommand("sweep", "outage vs SNR for every configured variant");
    add_common(sweep, true);
    auto* table = app.add_subcommand("phase-table", "rank all discrete RIS phase configurations");
    add_common(table, true);
    auto* validate = app.add_subcommand("validate", "analytic oracle and invariant self-test");
    add_common(validate, false);
    std::uint64_t siso_trials = 200000;
    std::size_t channels = 1000;
    validate->add_option("--siso-trials", siso_trials, "trials per SISO oracle point");
    validate->add_option("--channels", channels, "random channels per algebraic check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }
    for (auto* sub : {sweep, table, validate}) {
        if (sub->parsed() && sub->count("--seed") > 0) {
            opt.seed = seed_value;
        }
    }

    try {
        if (sweep->parsed()) {
            return run_to_csv("sweep", opt, [&](const auto& file, std::ostream& csv) {
                risgf::run_sweep(file, engine_options(opt), csv, &std::cerr);
            });
        }
        if (table->parsed()) {
            return run_to_csv("phase-table", opt, [&](const auto& file, std::ostream& csv) {
                std::cerr << "[phase-table] K=" << risgf::phase_table_config(file).dims.ris_elements
                          << " b=" << file.phase_bits << '\n';
                risgf::run_phase_table(file, engine_options(opt), csv);
            });
        }
        return run_validate(opt, siso_trials, channels);
    } catch (const risgf::CapacityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kCapacityError;
    } catch (const risgf::DimensionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kCapacityError;
    } catch (const risgf::EnumerationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const risgf::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
}
