// Copyright 2026 The airaoi Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "airaoi/report.hpp"
#include "airaoi/simulation.hpp"

using namespace airaoi;
using namespace airaoi::harness;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.devices = 6;
    c.rounds = 30;
    c.data.classes = 4;
    c.data.features = 5;
    c.data.train_per_class = 30;
    c.data.test_per_class = 10;
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Harness, EnvironmentIsSharedAcrossPolicies) {
    const auto c = small_config();
    const auto a = build_environment(c, 5, 10.0);
    const auto b = build_environment(c, 5, 10.0);
    for (std::size_t t = 0; t < c.rounds; ++t) {
        EXPECT_EQ(a.channels[t].gains, b.channels[t].gains);
        EXPECT_EQ(a.total_times[t], b.total_times[t]);
    }
    EXPECT_NEAR(a.noise_variance, 0.1, 1e-15);
    EXPECT_DOUBLE_EQ(a.max_power[0], 3.0);
}

TEST(Harness, SnrOnlyChangesNoise) {
    const auto c = small_config();
    const auto a = build_environment(c, 5, 0.0);
    const auto b = build_environment(c, 5, 20.0);
    EXPECT_EQ(a.channels[3].gains, b.channels[3].gains);
    EXPECT_GT(a.noise_variance, b.noise_variance);
}

TEST(Harness, RecordsPassTheAudit) {
    const auto c = small_config();
    for (auto p : all_policies()) {
        const auto res = run_experiment(c, p, 3, 10.0);
        EXPECT_TRUE(res.summary.audit_passed) << to_string(p);
        EXPECT_EQ(res.records.size(), c.rounds);
        EXPECT_LE(res.summary.max_power_excess, 1e-9) << to_string(p);
    }
}

TEST(Harness, AuditDetectsTampering) {
    const auto c = small_config();
    auto res = run_experiment(c, Policy::kFedAirAoI, 3, 10.0);
    res.records[4].mse *= 1.01;
    EXPECT_FALSE(audit_records(res.records, std::vector<double>(c.devices, 3.0), 0.1));
}

TEST(Harness, RunsAreReplayable) {
    const auto c = small_config();
    const auto a = run_experiment(c, Policy::kFedAirAoI, 9, 10.0);
    const auto b = run_experiment(c, Policy::kFedAirAoI, 9, 10.0);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t t = 0; t < a.records.size(); ++t) {
        EXPECT_EQ(a.records[t].selected, b.records[t].selected);
        EXPECT_EQ(a.records[t].mse, b.records[t].mse);
        EXPECT_EQ(a.records[t].train_loss, b.records[t].train_loss);
    }
}

TEST(Harness, SingleDeviceIsAlwaysSelected) {
    auto c = small_config();
    c.devices = 1;
    c.data.classes = 2;
    c.data.classes_per_device = {2};
    const auto res = run_experiment(c, Policy::kFedAirAoI, 1, 10.0);
    for (const auto& r : res.records) {
        ASSERT_EQ(r.selected, std::vector<std::size_t>{0});
        if (r.round > 0) EXPECT_DOUBLE_EQ(r.paoi[0], res.records[r.round - 1].completion_time);
    }
}

TEST(Harness, SelectionFrequenciesSumToParticipation) {
    const auto c = small_config();
    const auto res = run_experiment(c, Policy::kFedAvg, 2, 10.0);
    const auto m = metrics_report(res.records, c.devices);
    EXPECT_NEAR(m.selection_frequency_sum, m.mean_participation, 1e-12);
    EXPECT_NEAR(m.mean_participation, static_cast<double>(res.k_fixed), 1e-12);
}

TEST(Harness, FedAvgRelativeToItselfIsOne) {
    const auto rel = relative_completion_time({{Policy::kFedAvg, 4.0}, {Policy::kFedAirAoI, 2.0}});
    EXPECT_DOUBLE_EQ(rel.at(Policy::kFedAvg), 1.0);
    EXPECT_DOUBLE_EQ(rel.at(Policy::kFedAirAoI), 0.5);
}

TEST(Harness, HybridSkippedRoundsStillAge) {
    auto c = small_config();
    c.baselines.deadline = 1e-6;  // nobody meets it
    const auto res = run_experiment(c, Policy::kHybridFL, 1, 10.0);
    EXPECT_EQ(res.summary.skipped_rounds, c.rounds);
    EXPECT_GT(res.records.back().ws_paoi, res.records.front().ws_paoi);
    EXPECT_DOUBLE_EQ(res.records.back().train_loss, res.records.front().train_loss);
}

TEST(Harness, SingleSnrSweepHasOneRowPerPolicy) {
    auto c = small_config();
    c.train.enabled = false;
    c.replications = 2;
    c.policies = {Policy::kFedAirAoI};
    const auto rows = sweep_snr(c);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].mse.count, 2u);
}

TEST(Harness, IdealModeAlignsExactly) {
    auto c = small_config();
    c.power.mode = PowerMode::kIdeal;
    const auto res = run_experiment(c, Policy::kFedAirAoI, 4, 10.0);
    for (const auto& r : res.records) {
        EXPECT_LE(r.mse, 1e-20);
        EXPECT_LE(r.aggregation_error, 1e-20);
    }
}

TEST(Harness, OnlineModeKeepsBudgetApproximately) {
    auto c = small_config();
    c.rounds = 200;
    c.train.enabled = false;
    c.power.mode = PowerMode::kOnline;
    const auto res = run_experiment(c, Policy::kFedAirAoI, 4, 10.0);
    EXPECT_TRUE(res.summary.audit_passed);
    EXPECT_LE(res.summary.max_power_excess, 0.25);
}

TEST(Harness, BoundReportIsAttached) {
    const auto c = small_config();
    const auto res = run_experiment(c, Policy::kFedAirAoI, 1, 10.0);
    ASSERT_TRUE(res.bound.has_value());
    EXPECT_TRUE(res.bound->rescaled);
    EXPECT_NEAR(res.bound->mean_mse, res.summary.time_average_mse, 1e-12);
}

TEST(Harness, OutputsAreByteStable) {
    const auto c = small_config();
    const auto base = std::filesystem::temp_directory_path() / "airaoi_harness_outputs";
    std::filesystem::remove_all(base);
    write_run_outputs(base / "a", c, run_experiment(c, Policy::kFedAirAoI, 6, 10.0));
    write_run_outputs(base / "b", c, run_experiment(c, Policy::kFedAirAoI, 6, 10.0));
    for (const char* f : {"rounds.csv", "paoi.csv", "power.csv", "summary.json"})
        EXPECT_EQ(slurp(base / "a" / f), slurp(base / "b" / f)) << f;
    std::filesystem::remove_all(base);
}

TEST(Report, FormatsSeventeenDigits) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(2.0), "2");
}

TEST(Report, DescribeAndSlope) {
    const auto s = describe({1.0, 2.0, 3.0});
    EXPECT_DOUBLE_EQ(s.mean, 2.0);
    EXPECT_NEAR(s.stderr_, 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(linear_slope({1.0, 3.0, 5.0, 7.0}), 2.0, 1e-15);
}
