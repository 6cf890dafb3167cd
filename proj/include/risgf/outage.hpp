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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "risgf/allocation.hpp"
#include "risgf/channel.hpp"
#include "risgf/errors.hpp"
#include "risgf/receivers.hpp"

namespace risgf {

/// One simulated scenario: geometry, allocation, receiver, RIS phases, rate and
/// the SNR grid (P_x / sigma^2 in dB with P_x = 1).
struct ExperimentConfig {
    SystemDims dims;
    Scheme scheme = Scheme::Shared;
    std::size_t retransmissions = 0;
    Receiver receiver = Receiver::MMSE;
    std::optional<PhaseConfig> phase;  ///< absent means no RIS (K = 0)
    double rate = 2.0;                 ///< bits/s/Hz
    std::vector<double> snr_db;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;

    /// Phase vector used for composition; empty when there is no RIS.
    PhaseConfig effective_phase() const { return phase.value_or(PhaseConfig{}); }

    /// Throws ConfigError, or CapacityError for an infeasible dedicated plan.
    void validate() const
    {
        dims.validate();
        if (trials < 1) {
            throw ConfigError("trials must be >= 1");
        }
        if (!(rate >= 0.0) || !std::isfinite(rate)) {
            throw ConfigError("rate must be a finite non-negative number");
        }
        const std::size_t k = phase ? phase->size() : 0;
        if (k != dims.ris_elements) {
            throw ConfigError("phase vector has " + std::to_string(k) + " entries, ris_elements = " +
                              std::to_string(dims.ris_elements));
        }
        for (double s : snr_db) {
            if (!std::isfinite(s)) {
                throw ConfigError("snr_db entries must be finite");
            }
        }
        (void)build_plan(scheme, dims, retransmissions);
    }
};

struct OutageEstimate {
    std::size_t sensor_id = 0;
    std::uint64_t outage_events = 0;
    std::uint64_t trials = 0;
    double p_hat = 0.0;
    double std_err = 0.0;

    static OutageEstimate from_counts(std::size_t sensor, std::uint64_t events,
                                      std::uint64_t trials)
    {
        const double p = static_cast<double>(events) / static_cast<double>(trials);
        return {sensor, events, trials, p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
    }

    friend bool operator==(const OutageEstimate&, const OutageEstimate&) = default;
};

/// Shannon rate log2(1 + SINR).
inline double max_rate(double sinr) noexcept { return std::log2(1.0 + sinr); }

/// Exact outage of a unit-variance Rayleigh scalar link: 1 - exp(-(2^R - 1)/snr).
inline double siso_outage_closed_form(double snr_linear, double rate) noexcept
{
    return -std::expm1(-(std::exp2(rate) - 1.0) / snr_linear);
}

/// Per-trial callback: (variant index, trial index, realization). Invoked from
/// worker threads; the callee synchronizes.
using TrialObserver =
    std::function<void(std::size_t, std::uint64_t, const ChannelRealization&)>;

struct EngineOptions {
    unsigned workers = 1;
    /// Reuse the same channel draws across SNR points and variants.
    bool common_random_numbers = true;
    /// Distinguishes variants when common_random_numbers is off.
    std::uint64_t variant_tag = 0;
    TrialObserver observer;
};

/// Stream identifier of a (variant, SNR point) pair. With common random numbers
/// every pair maps to stream 0.
inline std::uint64_t stream_id(const EngineOptions& opt, std::size_t snr_index) noexcept
{
    if (opt.common_random_numbers) {
        return 0;
    }
    return ((opt.variant_tag + 1) << 32) | static_cast<std::uint64_t>(snr_index);
}

namespace detail {

/// Marks outage[i] for each stream of an allocated effective channel.
inline void score_outage(const ComplexMatrix& h_eff, Receiver receiver, double rate,
                         const LinkParams& link, std::span<std::uint8_t> outage)
{
    try {
        const auto report = compute_sinr(receiver, h_eff, link);
        for (std::size_t i = 0; i < outage.size(); ++i) {
            outage[i] = rate > max_rate(report.per_stream_sinr[i]) ? 1 : 0;
        }
    } catch (const SingularMatrixError&) {
        // undetectable realization: no reliable rate for anyone
        std::fill(outage.begin(), outage.end(), std::uint8_t{1});
    }
}

/// Runs body(begin, end, worker) over [0, trials) split into contiguous chunks.
template <class Body>
void parallel_trials(std::uint64_t trials, unsigned workers, Body&& body)
{
    workers = std::max(1u, workers);
    if (workers == 1 || trials < 2) {
        body(std::uint64_t{0}, trials, 0u);
        return;
    }
    const auto w = static_cast<std::uint64_t>(workers);
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        const std::uint64_t begin = trials * t / w;
        const std::uint64_t end = trials * (t + 1) / w;
        pool.emplace_back([&body, begin, end, t] { body(begin, end, t); });
    }
}

}  // namespace detail

/// One Monte Carlo trial: sample, compose, allocate, detect, and compare each
/// stream's rate against R. Returns one flag per sensor (true = outage).
inline std::vector<bool> run_trial(const TrialStream& stream, const ExperimentConfig& config,
                                   double snr_db)
{
    const auto plan = build_plan(config.scheme, config.dims, config.retransmissions);
    const auto real = sample_realization(stream, config.dims);
    const auto h = apply_plan(effective_channel(real, config.effective_phase()), plan);
    std::vector<std::uint8_t> flags(config.dims.sensors);
    detail::score_outage(h, config.receiver, config.rate, LinkParams::from_snr_db(snr_db), flags);
    return {flags.begin(), flags.end()};
}

/// Per-sensor Monte Carlo outage at one SNR point.
///
/// Trial t draws from substream (seed, stream_id(options, snr_index), t), so the
/// result is bit-identical for every worker count.
inline std::vector<OutageEstimate> estimate_outage(const ExperimentConfig& config, double snr_db,
                                                   std::size_t snr_index = 0,
                                                   const EngineOptions& options = {})
{
    config.validate();
    const auto plan = build_plan(config.scheme, config.dims, config.retransmissions);
    const auto phase = config.effective_phase();
    const auto link = LinkParams::from_snr_db(snr_db);
    const std::size_t n = config.dims.sensors;
    const std::uint64_t stream = stream_id(options, snr_index);

    const unsigned workers = std::max(1u, options.workers);
    std::vector<std::vector<std::uint64_t>> counts(workers, std::vector<std::uint64_t>(n, 0));

    detail::parallel_trials(config.trials, workers,
                            [&](std::uint64_t begin, std::uint64_t end, unsigned worker) {
        std::vector<std::uint8_t> flags(n);
        auto& local = counts[worker];
        for (std::uint64_t t = begin; t < end; ++t) {
            const auto real = sample_realization(TrialStream{config.seed, stream, t}, config.dims);
            if (options.observer) {
                options.observer(0, t, real);
            }
            const auto h = apply_plan(effective_channel(real, phase), plan);
            detail::score_outage(h, config.receiver, config.rate, link, flags);
            for (std::size_t i = 0; i < n; ++i) {
                local[i] += flags[i];
            }
        }
    });

    std::vector<OutageEstimate> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t events = 0;
        for (const auto& c : counts) {
            events += c[i];
        }
        out.push_back(OutageEstimate::from_counts(i, events, config.trials));
    }
    return out;
}

/// Pools symmetric sensors into one estimate over sensors * trials samples.
inline OutageEstimate pooled(std::span<const OutageEstimate> per_sensor)
{
    std::uint64_t events = 0, samples = 0;
    for (const auto& e : per_sensor) {
        events += e.outage_events;
        samples += e.trials;
    }
    return OutageEstimate::from_counts(0, events, samples);
}

/// Highest per-sensor outage; lowest sensor id on ties.
inline OutageEstimate worst_sensor(std::span<const OutageEstimate> per_sensor)
{
    if (per_sensor.empty()) {
        throw std::invalid_argument("worst_sensor: no estimates");
    }
    const OutageEstimate* worst = &per_sensor.front();
    for (const auto& e : per_sensor) {
        if (e.p_hat > worst->p_hat) {
            worst = &e;
        }
    }
    return *worst;
}

}  // namespace risgf
