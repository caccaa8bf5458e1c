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

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "airaoi/config.hpp"
#include "airaoi/simulation.hpp"

namespace airaoi::harness {

/// Shortest round-trip text for a double, capped at 17 significant digits.
std::string format_double(double value);

struct Stat {
    double mean = 0.0;
    double stderr_ = 0.0;  // sample standard deviation / √n; 0 for n = 1
    std::size_t count = 0;
};
Stat describe(const std::vector<double>& values);

/// Least-squares slope of y against its index.
double linear_slope(const std::vector<double>& values);

/// EWS-PAoI trajectory, selection frequencies, completion times and curves
/// of one run.
struct MetricsReport {
    std::vector<double> ews_paoi_trajectory;  // running mean of ws_paoi up to t
    std::vector<double> selection_frequency;
    double selection_frequency_sum = 0.0;
    double mean_participation = 0.0;
    double average_completion_time = 0.0;
    double last_quarter_slope = 0.0;  // slope of ws_paoi over the last T/4 rounds
    std::vector<double> loss_curve;
    std::vector<double> accuracy_curve;
};
MetricsReport metrics_report(const std::vector<RoundRecord>& records, std::size_t devices);

/// Relative completion time of each policy against FedAvg's, keyed by policy.
std::map<Policy, double> relative_completion_time(const std::map<Policy, double>& average_completion);

nlohmann::json bound_to_json(const diagnostics::BoundReport& report);
nlohmann::json summary_to_json(const ExperimentConfig& config, const RunResult& run);

/// rounds.csv, paoi.csv, power.csv and summary.json.
void write_run_outputs(const std::filesystem::path& dir, const ExperimentConfig& config,
                       const RunResult& run);

struct SweepRow {
    Policy policy = Policy::kFedAirAoI;
    double snr_db = 0.0;
    Stat mse;
    Stat ews_paoi;
    Stat completion_time;
    std::vector<double> per_seed_mse;  // indexed by replication
};

/// Time-average MSE per (policy, SNR) over `replications` seeds. Every
/// policy sees the same environment for a given (seed, SNR).
std::vector<SweepRow> sweep_snr(const ExperimentConfig& config);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

struct CompareRow {
    Policy policy = Policy::kFedAirAoI;
    Stat ews_paoi;
    Stat mse;
    Stat completion_time;
    double relative_completion_time = 0.0;
    Stat min_selection_frequency;
    Stat participation;
    Stat final_loss;
    Stat final_accuracy;
    std::vector<double> ews_paoi_trajectory;  // replication mean of the running EWS-PAoI
    std::vector<double> selection_frequency;  // replication mean per device
    std::vector<double> loss_curve;
    std::vector<double> accuracy_curve;
    std::vector<RunSummary> replications;
};

/// Paired-seed comparison at the first configured SNR.
std::vector<CompareRow> compare_policies(const ExperimentConfig& config);

/// compare_summary.csv, compare_rounds.csv and compare_devices.csv.
void write_compare_outputs(const std::filesystem::path& dir, const std::vector<CompareRow>& rows);

}  // namespace airaoi::harness
