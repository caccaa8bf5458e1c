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
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "airaoi/channel.hpp"
#include "airaoi/config.hpp"
#include "airaoi/diagnostics.hpp"
#include "airaoi/fl.hpp"
#include "airaoi/power.hpp"
#include "airaoi/scheduler.hpp"
#include "airaoi/timing.hpp"

namespace airaoi::harness {

/// Everything a seed fixes before any policy acts: data, device profiles,
/// and the per-round channel and resource draws. Policies compared under one
/// seed share a single Environment.
struct Environment {
    std::size_t devices = 0;
    std::size_t rounds = 0;
    double snr_db = 0.0;
    std::uint64_t seed = 0;

    fl::Task task;
    fl::Partition partition;
    std::vector<timing::ComputeProfile> compute;
    timing::CommProfile comm;
    std::vector<channel::ChannelRealization> channels;    // [round]
    std::vector<std::vector<double>> resource;             // [round][device] τ
    std::vector<std::vector<double>> total_times;          // [round][device]
    std::vector<double> max_power;
    std::vector<double> avg_power;
    double noise_variance = 0.0;
};

Environment build_environment(const ExperimentConfig& config, std::uint64_t seed, double snr_db);

/// Selection outcome of one round, before power control and training.
struct ScheduledRound {
    std::vector<std::size_t> selected;
    std::vector<std::size_t> drawn;  // baselines: the random draw before dropping
    std::size_t k_opt = 0;
    double predicted_ws_paoi = 0.0;
    double completion_time = 0.0;
    bool skipped = false;
    std::vector<double> paoi_start;  // A^(t)
    std::vector<double> paoi_next;   // A^(t+1)
};

/// Runs the selection policy and the age recursion over the whole horizon.
/// Power control never feeds back into selection, so this pass is exact.
std::vector<ScheduledRound> schedule(const Environment& env, Policy policy, std::size_t k_fixed,
                                     double deadline);

/// Round-to-nearest mean participation of FedAirAoI under this environment.
std::size_t matched_participation(const Environment& env);

/// Median over devices of the total time at the mean resource coefficient.
double default_deadline(const ExperimentConfig& config, const Environment& env);

struct RoundRecord {
    std::size_t round = 0;
    std::size_t k_opt = 0;
    std::vector<std::size_t> selected;
    bool skipped = false;
    double completion_time = 0.0;
    double predicted_ws_paoi = 0.0;
    double ws_paoi = 0.0;       // (1/N) Σ q A^(t) at the start of the round
    double ws_paoi_next = 0.0;  // (1/N) Σ q A^(t+1)
    double mse = 0.0;
    double mse_misalignment = 0.0;
    double mse_noise = 0.0;
    double eta = 0.0;
    std::vector<double> alpha;   // aligned with `selected`
    std::vector<double> gains;   // aligned with `selected`
    std::vector<std::uint8_t> active;  // aligned with `selected`
    std::vector<double> paoi;    // A^(t)
    double train_loss = 0.0;
    double test_accuracy = 0.0;
    double aggregation_error = 0.0;  // ‖e‖²
    double weighting_bias = 0.0;     // ‖(1/K)Σθ_n − (N/K)Σq_nθ_n‖
    double max_element_variance = 0.0;
};

struct RunSummary {
    double ews_paoi = 0.0;
    double time_average_mse = 0.0;
    double average_completion_time = 0.0;
    double mean_participation = 0.0;
    double mean_k_opt = 0.0;
    std::vector<double> selection_frequency;
    double min_selection_frequency = 0.0;
    std::size_t skipped_rounds = 0;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    double final_accuracy = 0.0;
    std::size_t power_iterations = 0;
    double max_power_excess = 0.0;  // max_n (avg power − P̄_n), <= 0 when feasible
    bool audit_passed = true;
    double max_element_variance = 0.0;
};

struct RunOptions {
    bool keep_weights = false;
    std::size_t k_fixed = 0;   // overrides config when > 0
    double deadline = 0.0;     // overrides config when > 0
};

struct RunResult {
    Policy policy = Policy::kFedAirAoI;
    std::uint64_t seed = 0;
    double snr_db = 0.0;
    std::size_t k_fixed = 0;
    double deadline = 0.0;
    std::vector<double> weights_q;
    std::vector<RoundRecord> records;
    RunSummary summary;
    std::optional<diagnostics::BoundReport> bound;
    std::vector<Eigen::VectorXd> model_trajectory;  // w^(0..T) when kept
};

/// Steps one policy through the horizon. The selection and (offline) power
/// plan are fixed at construction; run_round() then trains, aggregates over
/// the air and records one round.
class Simulator {
  public:
    Simulator(const ExperimentConfig& config, const Environment& env, Policy policy,
              const RunOptions& options = {});

    bool done() const { return next_round_ >= env_.rounds; }
    RoundRecord run_round();
    RunResult finish();

    const std::vector<ScheduledRound>& scheduled() const { return scheduled_; }
    const power::PowerProblem& power_problem() const { return problem_; }
    const power::PowerPlan& power_plan() const { return plan_; }
    const fl::SoftmaxModel& model() const { return model_; }
    const Eigen::VectorXd& weights() const { return w_; }

  private:
    void plan_power();

    const ExperimentConfig& config_;
    const Environment& env_;
    Policy policy_;
    RunOptions options_;
    fl::SoftmaxModel model_;
    fl::TrainConfig train_;
    std::size_t k_fixed_ = 0;
    double deadline_ = 0.0;

    std::vector<ScheduledRound> scheduled_;
    power::PowerProblem problem_;
    power::PowerPlan plan_;
    std::vector<Mask> active_;
    std::vector<double> multipliers_;  // online mode
    std::size_t power_iterations_ = 0;

    Eigen::VectorXd w_;
    std::size_t next_round_ = 0;
    std::vector<RoundRecord> records_;
    std::vector<Eigen::VectorXd> trajectory_;
    double initial_loss_ = 0.0;
};

/// Full run for one (policy, seed, SNR).
RunResult run_experiment(const ExperimentConfig& config, Policy policy, std::uint64_t seed,
                         double snr_db, const RunOptions& options = {});

RunSummary summarize(const std::vector<RoundRecord>& records, std::size_t devices,
                     std::span<const double> weights);

/// Recomputes each round's MSE from its stored plan slice and channels.
bool audit_records(const std::vector<RoundRecord>& records, std::span<const double> max_power,
                   double noise_variance, double tolerance = 1e-9);

diagnostics::BoundReport bound_for_run(const ExperimentConfig& config, const RunResult& run,
                                       std::size_t dimension);

/// Seed of replication r under the master seed.
std::uint64_t replication_seed(std::uint64_t master, std::size_t replication);

}  // namespace airaoi::harness
