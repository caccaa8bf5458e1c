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
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "airaoi/fl.hpp"

namespace airaoi::harness {

enum class Policy { kFedAirAoI, kFullPower, kChannelInversion, kFedAvg, kHybridFL };

std::string to_string(Policy policy);
Policy parse_policy(const std::string& name);
const std::vector<Policy>& all_policies();

enum class PowerMode {
    kOffline,  // alternating optimizer with CSI for the whole horizon
    kOnline,   // per-round α with online multipliers
    kIdeal,    // noiseless channel, exact amplitude alignment (reference runs)
};

std::string to_string(PowerMode mode);
PowerMode parse_power_mode(const std::string& name);

struct ChannelSection {
    double frequency_correlation = 1.0;
    double path_loss_exponent = 2.0;
    double noise_scale = 1.0;
    std::vector<double> distances;  // empty: every device at 1 m
};

struct TimingSection {
    double cycles_per_sample = 1e7;
    double cpu_hz = 0.5e9;
    // Devices are ordered from most to least capable: C_n runs geometrically
    // from cpu_hz·√spread down to cpu_hz/√spread.
    double cpu_spread = 4.0;
    std::vector<double> cpu_hz_per_device;  // overrides cpu_hz/cpu_spread when set
    double bandwidth = 20e6;
    double model_size = 11.7e6;
    double tau_min = 0.2;
};

struct PowerSection {
    double avg_power = 1.0;
    double max_power_ratio = 3.0;
    PowerMode mode = PowerMode::kOffline;
    double epsilon0 = 1e-5;
    std::size_t max_iterations = 1000;
    double online_step = 0.0;  // 0: 0.1 / P^max
};

struct TrainSection {
    bool enabled = true;
    double learning_rate = 0.05;
    std::size_t local_iterations = 5;
    std::size_t batch_size = 32;
};

struct DataSection {
    std::string source = "synthetic";  // synthetic | file
    std::string path;
    std::string test_path;
    int classes = 10;
    std::size_t features = 20;
    std::size_t train_per_class = 200;
    std::size_t test_per_class = 50;
    double separation = 3.0;
    std::vector<int> classes_per_device;  // empty: 2 + (n mod 3)
};

struct BaselineSection {
    std::size_t k_fixed = 0;  // 0: mean FedAirAoI participation on the same seed
    double deadline = 0.0;    // 0: median device total time at mean τ
};

struct BoundSection {
    bool enabled = true;
    double smoothness = 1.0;
    double gradient_noise = 0.0;
    double heterogeneity = 0.0;
    double element_variance_cap = 0.0;
    double gradient_norm_cap = 0.0;
    double initial_gap = 0.0;
    // When true, Γ and the initial gap are replaced by values observed in the run.
    bool estimate_from_run = false;
    bool rescale_for_weights = true;
};

struct ExperimentConfig {
    std::size_t devices = 20;
    std::size_t rounds = 500;
    std::vector<double> snr_db{10.0};
    Policy policy = Policy::kFedAirAoI;
    std::vector<Policy> policies;  // sweep/compare set; empty: all five
    std::uint64_t master_seed = 1;
    std::size_t replications = 1;

    ChannelSection channel;
    TimingSection timing;
    PowerSection power;
    TrainSection train;
    DataSection data;
    BaselineSection baselines;
    BoundSection bound;

    /// Throws ConfigError naming the first offending field.
    void validate() const;

    std::vector<Policy> policy_set() const;
    fl::TrainConfig train_config() const;
    std::vector<int> class_schedule() const;
    std::vector<double> cpu_profile() const;
    std::vector<double> distances() const;
};

/// Strict parse: unknown keys and wrong types raise ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace airaoi::harness
