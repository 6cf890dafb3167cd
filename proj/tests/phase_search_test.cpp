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

#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "risgf/phase_search.hpp"
#include "test_util.hpp"

namespace risgf {
namespace {

using namespace std::complex_literals;

TEST(EnumerateConfigs, TwoElementsOneBit)
{
    const auto cfgs = enumerate_configs(2, 1);
    ASSERT_EQ(cfgs.size(), 4u);
    const std::vector<std::vector<Complex>> expected{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(std::vector<Complex>(cfgs[i].coefficients().begin(), cfgs[i].coefficients().end()),
                  expected[i]);
    }
}

TEST(EnumerateConfigs, ThreeElementOneBitOrder)
{
    // +1 <-> index 0, -1 <-> index 1, first element most significant
    const std::vector<std::vector<double>> table{{1, 1, 1},   {1, 1, -1},  {1, -1, 1},
                                                 {1, -1, -1}, {-1, 1, 1},  {-1, 1, -1},
                                                 {-1, -1, 1}, {-1, -1, -1}};
    const auto cfgs = enumerate_configs(3, 1);
    ASSERT_EQ(cfgs.size(), 8u);
    for (std::size_t row = 0; row < 8; ++row) {
        for (std::size_t k = 0; k < 3; ++k) {
            EXPECT_EQ(cfgs[row].coefficients()[k], Complex(table[row][k]));
        }
    }
}

TEST(EnumerateConfigs, OneElementTwoBits)
{
    const auto cfgs = enumerate_configs(1, 2);
    ASSERT_EQ(cfgs.size(), 4u);
    const std::vector<Complex> expected{1, 1i, -1, -1i};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(cfgs[i].coefficients()[0], expected[i]);
    }
}

TEST(EnumerateConfigs, CountAndDistinct)
{
    for (unsigned b = 1; b <= 3; ++b) {
        for (std::size_t k = 1; k * b <= 9; ++k) {
            const auto cfgs = enumerate_configs(k, b);
            EXPECT_EQ(cfgs.size(), std::size_t{1} << (b * k));
            std::set<std::vector<unsigned>> seen;
            for (const auto& c : cfgs) {
                seen.emplace(c.indices().begin(), c.indices().end());
            }
            EXPECT_EQ(seen.size(), cfgs.size());
            EXPECT_TRUE(std::is_sorted(cfgs.begin(), cfgs.end(), [](const auto& a, const auto& c) {
                return std::lexicographical_compare(a.indices().begin(), a.indices().end(),
                                                    c.indices().begin(), c.indices().end());
            }));
        }
    }
}

TEST(EnumerateConfigs, Guard)
{
    EXPECT_THROW(enumerate_configs(25, 1), EnumerationError);
    EXPECT_THROW(enumerate_configs(9, 3), EnumerationError);
    EXPECT_THROW(enumerate_configs(0, 1), std::invalid_argument);
}

ExperimentConfig small_base()
{
    ExperimentConfig base;
    base.dims = {2, 3, 2};
    base.scheme = Scheme::Shared;
    base.receiver = Receiver::MmseSic;
    base.rate = 2.0;
    base.trials = 5000;
    base.seed = 17;
    return base;
}

TEST(EvaluateConfigs, SortedDeterministicAndComplete)
{
    const auto base = small_base();
    const auto rows = evaluate_configs(base, 5.0);
    ASSERT_EQ(rows.size(), 4u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_LE(rows[i - 1].worst_sensor_outage.p_hat, rows[i].worst_sensor_outage.p_hat);
    }
    for (const auto& r : rows) {
        EXPECT_EQ(r.per_sensor.size(), 2u);
        EXPECT_EQ(r.worst_sensor_outage, worst_sensor(r.per_sensor));
    }

    EngineOptions opt;
    opt.workers = 3;
    const auto again = evaluate_configs(base, 5.0, opt);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(again[i].phase, rows[i].phase);
        EXPECT_EQ(again[i].per_sensor, rows[i].per_sensor);
    }
}

TEST(EvaluateConfigs, MatchesPerConfigEstimates)
{
    const auto base = small_base();
    for (const auto& row : evaluate_configs(base, 5.0)) {
        auto cfg = base;
        cfg.phase = row.phase;
        EXPECT_EQ(estimate_outage(cfg, 5.0), row.per_sensor) << row.phase.label();
    }
}

TEST(EvaluateConfigs, PairedRealizations)
{
    const auto base = small_base();
    std::mutex mu;
    std::map<std::uint64_t, std::vector<ChannelRealization>> by_trial;
    EngineOptions opt;
    opt.workers = 2;
    opt.observer = [&](std::size_t, std::uint64_t t, const ChannelRealization& r) {
        std::lock_guard lock(mu);
        by_trial[t].push_back(r);
    };
    evaluate_configs(base, 5.0, opt);
    ASSERT_EQ(by_trial.size(), base.trials);
    for (const auto& [t, reals] : by_trial) {
        ASSERT_EQ(reals.size(), 4u);
        for (const auto& r : reals) {
            EXPECT_EQ(r, reals.front());
        }
    }
}

TEST(EvaluateConfigs, SingleElementSignIsAbsorbed)
{
    // A lone element's sign flip maps H2 -> -H2, which has the same law.
    ExperimentConfig base;
    base.dims = {1, 1, 1};
    base.receiver = Receiver::MMSE;
    base.rate = 2.0;
    base.trials = 200'000;
    base.seed = 3;
    const auto rows = evaluate_configs(base, 5.0);
    ASSERT_EQ(rows.size(), 2u);
    const auto& a = rows[0].worst_sensor_outage;
    const auto& b = rows[1].worst_sensor_outage;
    EXPECT_LE(std::abs(a.p_hat - b.p_hat), 3.0 * testing::combined_se(a.std_err, b.std_err));
}

TEST(EvaluateConfigs, RequiresRis)
{
    auto base = small_base();
    base.dims.ris_elements = 0;
    EXPECT_THROW(evaluate_configs(base, 5.0), ConfigError);
}

PhaseTableRow row_with(std::vector<unsigned> idx, double p)
{
    PhaseTableRow r{PhaseConfig(1, std::move(idx)), {}, {}};
    r.worst_sensor_outage = OutageEstimate::from_counts(0, static_cast<std::uint64_t>(p * 1000), 1000);
    r.per_sensor = {r.worst_sensor_outage};
    return r;
}

TEST(BestConfig, Examples)
{
    EXPECT_EQ(best_config({row_with({1, 0}, 0.3)}), PhaseConfig(1, {1, 0}));
    EXPECT_EQ(best_config({row_with({0, 0}, 0.2), row_with({1, 1}, 0.1)}), PhaseConfig(1, {1, 1}));
    EXPECT_EQ(best_config({row_with({1, 0}, 0.1), row_with({0, 1}, 0.1)}), PhaseConfig(1, {0, 1}));
    EXPECT_THROW(best_config({}), std::invalid_argument);
}

TEST(BestConfig, PermutationStable)
{
    std::vector<PhaseTableRow> rows;
    const auto cfgs = enumerate_configs(3, 1);
    const std::vector<double> p{0.3, 0.1, 0.2, 0.1, 0.5, 0.1, 0.4, 0.2};
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        rows.push_back(row_with({cfgs[i].indices().begin(), cfgs[i].indices().end()}, p[i]));
    }
    const auto expected = best_config(rows);
    EXPECT_EQ(expected, PhaseConfig(1, {0, 0, 1}));
    std::mt19937 gen(1);
    for (int rep = 0; rep < 50; ++rep) {
        std::shuffle(rows.begin(), rows.end(), gen);
        EXPECT_EQ(best_config(rows), expected);
    }
}

}  // namespace
}  // namespace risgf
