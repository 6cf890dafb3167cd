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
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "risgf/channel.hpp"
#include "risgf/errors.hpp"
#include "risgf/outage.hpp"

namespace risgf {

inline constexpr unsigned kMaxEnumerationBits = 24;

struct PhaseTableRow {
    PhaseConfig phase;
    OutageEstimate worst_sensor_outage;
    std::vector<OutageEstimate> per_sensor;
};

/// All 2^(bK) phase configurations in lexicographic order of (m_1, ..., m_K).
inline std::vector<PhaseConfig> enumerate_configs(std::size_t elements, unsigned bits)
{
    if (elements < 1) {
        throw std::invalid_argument("enumerate_configs: need at least one RIS element");
    }
    (void)phase_set(bits);
    if (bits * elements > kMaxEnumerationBits) {
        throw EnumerationError("enumerate_configs: 2^" + std::to_string(bits * elements) +
                               " configurations exceeds the 2^24 guard");
    }
    const std::uint64_t levels = std::uint64_t{1} << bits;
    const std::uint64_t total = std::uint64_t{1} << (bits * elements);
    std::vector<PhaseConfig> out;
    out.reserve(total);
    std::vector<unsigned> idx(elements);
    for (std::uint64_t code = 0; code < total; ++code) {
        // element 0 is the most significant digit
        std::uint64_t rest = code;
        for (std::size_t k = elements; k-- > 0;) {
            idx[k] = static_cast<unsigned>(rest % levels);
            rest /= levels;
        }
        out.emplace_back(bits, idx);
    }
    return out;
}

namespace detail {

inline bool lexicographically_less(const PhaseConfig& a, const PhaseConfig& b)
{
    return std::lexicographical_compare(a.indices().begin(), a.indices().end(),
                                        b.indices().begin(), b.indices().end());
}

}  // namespace detail

/// Evaluates every phase configuration of base.dims.ris_elements elements at
/// base.phase's resolution (1 bit when unset).
///
/// All configurations see the same realization in trial t: the channel is drawn
/// once per trial and scored under each configuration in turn. The observer's
/// variant index is the configuration's enumeration index. Rows come back
/// sorted by worst-sensor outage, ties in enumeration order.
inline std::vector<PhaseTableRow> evaluate_configs(const ExperimentConfig& base, double snr_db,
                                                   const EngineOptions& options = {})
{
    if (base.dims.ris_elements < 1) {
        throw ConfigError("phase table needs ris_elements >= 1");
    }
    const unsigned bits = base.phase ? base.phase->bits() : 1;
    const auto configs = enumerate_configs(base.dims.ris_elements, bits);

    ExperimentConfig probe = base;
    probe.phase = configs.front();
    probe.validate();

    const auto plan = build_plan(base.scheme, base.dims, base.retransmissions);
    const auto link = LinkParams::from_snr_db(snr_db);
    const std::size_t n = base.dims.sensors;
    const std::size_t c_count = configs.size();
    const unsigned workers = std::max(1u, options.workers);
    const std::uint64_t stream = stream_id(EngineOptions{}, 0);

    std::vector<std::vector<std::uint64_t>> counts(
        workers, std::vector<std::uint64_t>(c_count * n, 0));

    detail::parallel_trials(base.trials, workers,
                            [&](std::uint64_t begin, std::uint64_t end, unsigned worker) {
        std::vector<std::uint8_t> flags(n);
        auto& local = counts[worker];
        for (std::uint64_t t = begin; t < end; ++t) {
            const auto real = sample_realization(TrialStream{base.seed, stream, t}, base.dims);
            for (std::size_t c = 0; c < c_count; ++c) {
                if (options.observer) {
                    options.observer(c, t, real);
                }
                const auto h = apply_plan(effective_channel(real, configs[c]), plan);
                detail::score_outage(h, base.receiver, base.rate, link, flags);
                for (std::size_t i = 0; i < n; ++i) {
                    local[c * n + i] += flags[i];
                }
            }
        }
    });

    std::vector<PhaseTableRow> rows;
    rows.reserve(c_count);
    for (std::size_t c = 0; c < c_count; ++c) {
        PhaseTableRow row{configs[c], {}, {}};
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t events = 0;
            for (const auto& w : counts) {
                events += w[c * n + i];
            }
            row.per_sensor.push_back(OutageEstimate::from_counts(i, events, base.trials));
        }
        row.worst_sensor_outage = worst_sensor(row.per_sensor);
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.worst_sensor_outage.p_hat < b.worst_sensor_outage.p_hat;
    });
    return rows;
}

/// Configuration with the lowest worst-sensor outage; lexicographically
/// smallest index tuple on ties. Independent of row order.
inline PhaseConfig best_config(const std::vector<PhaseTableRow>& rows)
{
    if (rows.empty()) {
        throw std::invalid_argument("best_config: empty table");
    }
    const PhaseTableRow* best = &rows.front();
    for (const auto& r : rows) {
        const double p = r.worst_sensor_outage.p_hat;
        const double q = best->worst_sensor_outage.p_hat;
        if (p < q || (p == q && detail::lexicographically_less(r.phase, best->phase))) {
            best = &r;
        }
    }
    return best->phase;
}

}  // namespace risgf
