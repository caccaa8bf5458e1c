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
#include <span>
#include <vector>

#include "airaoi/common.hpp"

namespace airaoi::power {

/// Per-round MSE split into amplitude misalignment and receiver noise.
struct MseTerms {
    double misalignment = 0.0;
    double noise = 0.0;

    double total() const { return misalignment + noise; }
};

/// Transmitting devices of one round and their channel gains |h|^2.
struct RoundSlice {
    std::vector<std::size_t> devices;
    std::vector<double> gains;

    std::size_t size() const { return devices.size(); }
};

/// Everything the MSE minimizer needs: who transmits when, and the budgets.
/// `max_power` and `avg_power` are indexed by device id.
struct PowerProblem {
    std::vector<RoundSlice> rounds;
    std::vector<double> max_power;
    std::vector<double> avg_power;
    double noise_variance = 0.1;

    void validate() const;
};

/// alpha[t][i] belongs to rounds[t].devices[i].
struct PowerPlan {
    std::vector<std::vector<double>> alpha;
    std::vector<double> eta;
};

/// Σ_n (√(α_n P_n) |h_n| / √η − 1)² + σ²/η. `gains` are |h_n|².
MseTerms instantaneous_mse(std::span<const double> alphas, double eta,
                           std::span<const double> gains, std::span<const double> max_powers,
                           double noise_variance);

/// ((σ² + Σ b_n²) / Σ b_n)² with b_n = √(α_n P_n) |h_n|.
double optimal_eta(std::span<const double> alphas, std::span<const double> gains,
                   std::span<const double> max_powers, double noise_variance);

/// min{η|h|² / (P (|h|² + γη)²), 1}; zero for a zero gain.
double alpha_for_multiplier(double eta, double gain, double max_power, double multiplier);

struct BisectionOptions {
    double tolerance = 1e-10;           // on |Σα − budget|
    std::size_t max_iterations = 200;
    std::size_t max_doublings = 200;
};

struct AlphaSolution {
    std::vector<double> alpha;
    double multiplier = 0.0;  // γ*
    bool budget_binding = false;
    std::size_t iterations = 0;
    double residual = 0.0;    // budget − Σα, >= 0
};

/// Optimal per-device coefficients across the rounds the device transmits in,
/// for fixed normalizing factors. `horizon` is the total number of rounds T,
/// which sets the budget T P̄ / P^max.
AlphaSolution optimal_alpha_offline(std::span<const double> etas, std::span<const double> gains,
                                    double max_power, double avg_power, std::size_t horizon,
                                    const BisectionOptions& options = {});

enum class AlphaInit { kFullPower, kCappedInversion };

struct AlternatingOptions {
    double epsilon0 = 1e-5;
    std::size_t max_iterations = 1000;
    AlphaInit init = AlphaInit::kFullPower;
    BisectionOptions bisection;
};

struct AlternatingResult {
    PowerPlan plan;
    std::size_t iterations = 0;
    std::vector<double> mse_history;  // [0] is the initial plan with its optimal η
};

/// Alternates closed-form η and per-device α until the relative improvement
/// of the time-average MSE drops below ε₀.
AlternatingResult alternating_optimize(const PowerProblem& problem,
                                       const AlternatingOptions& options = {});

struct OnlineStep {
    double alpha = 0.0;
    double next_multiplier = 0.0;
};

/// One round of the online rule: α from the current multiplier, then
/// γ <- max{0, γ + step (α P^max − P̄)}.
OnlineStep online_alpha_step(double gain, double eta, double multiplier, double max_power,
                             double avg_power, double step);

/// Per-round joint (α, η) for fixed per-device multipliers (indexed by device id).
struct RoundPower {
    std::vector<double> alpha;
    double eta = 1.0;
};

RoundPower online_round_plan(const RoundSlice& slice, std::span<const double> multipliers,
                             std::span<const double> max_power, double noise_variance,
                             double epsilon0 = 1e-5, std::size_t max_iterations = 100);

/// Per-round MSE of a plan.
std::vector<MseTerms> round_mse(const PowerPlan& plan, const PowerProblem& problem);

double time_average_mse(const PowerPlan& plan, const PowerProblem& problem);

/// Per-device (1/T) Σ_t α P^max, indexed by device id.
std::vector<double> average_power(const PowerPlan& plan, const PowerProblem& problem);

}  // namespace airaoi::power
