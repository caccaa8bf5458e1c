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
#include <limits>
#include <span>
#include <vector>

#include "airaoi/common.hpp"
#include "airaoi/power.hpp"

namespace airaoi::baselines {

/// α = P̄/P^max in every round, η from the closed form at those α.
power::PowerPlan full_power_plan(const power::PowerProblem& problem);

struct InversionRound {
    std::vector<double> alpha;
    Mask active;  // aligned with the slice; 0 = deactivated
    double eta = 1.0;
};

/// Inverts each channel to the common target η. Devices that would need
/// α > 1 are deactivated (α = 0). Throws DegenerateError if none remain.
InversionRound channel_inversion_round(std::span<const double> gains, double eta_target,
                                       std::span<const double> max_powers);

struct InversionPlan {
    power::PowerPlan plan;
    std::vector<Mask> active;  // per round, aligned with the slice
    std::vector<std::uint8_t> all_deactivated;  // per round
};

/// Per round the target η is the closed form evaluated at α = P̄/P^max.
InversionPlan channel_inversion_plan(const power::PowerProblem& problem);

/// Uniform random subset of size k, ascending.
std::vector<std::size_t> fedavg_select(std::size_t n_devices, std::size_t k, Rng& rng);

struct HybridSelection {
    std::vector<std::size_t> drawn;     // the random subset before dropping
    std::vector<std::size_t> selected;  // survivors within the deadline
    bool skipped = false;               // no survivor: aggregation skipped
};

/// FedAvg draw followed by dropping members whose total time exceeds the deadline.
HybridSelection hybridfl_select(std::size_t n_devices, std::size_t k, double deadline,
                                std::span<const double> total_times, Rng& rng);

}  // namespace airaoi::baselines
