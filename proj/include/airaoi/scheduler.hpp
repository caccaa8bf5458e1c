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

namespace airaoi::scheduler {

/// Per-device peak age and importance weights at the start of a round.
struct AoIState {
    std::vector<double> paoi;
    std::vector<double> weights;
    std::size_t round = 0;

    std::size_t size() const { return paoi.size(); }
    /// Weights in [0,1] summing to one (1e-9), ages nonnegative.
    void validate() const;
};

/// Fresh state with every age at zero.
AoIState initial_state(std::vector<double> weights);

/// q_n = 2^M_n / Σ 2^M_m from per-device class counts.
std::vector<double> class_weights(std::span<const int> class_counts);

/// A_n <- (1 - ψ_n) A_n + T_c for every device.
AoIState update_paoi(const AoIState& state, std::span<const std::uint8_t> mask,
                     double completion_time);

/// q A / T. Throws std::domain_error for T <= 0.
double device_priority(double weight, double paoi, double total_time);

std::vector<double> priorities(const AoIState& state, std::span<const double> total_times);

/// (1/N) Σ q_n A_n².
double lyapunov_value(const AoIState& state);

/// L(next) - L(current) for one sampled transition.
double lyapunov_drift(const AoIState& current, const AoIState& next);

/// (1/N) Σ q_n A_n.
double ws_paoi(std::span<const double> weights, std::span<const double> paoi);

/// Device indices by descending priority, ties by ascending index.
std::vector<std::size_t> priority_order(std::span<const double> priorities);

/// Ψ(k): longest total time among the k highest-priority devices.
double staircase_psi(std::size_t k, std::span<const double> priorities,
                     std::span<const double> total_times);

struct SelectionDecision {
    std::vector<std::size_t> selected;  // ascending device indices, S = U ∪ V
    std::size_t k_opt = 0;              // prefix length of the winning candidate
    double predicted_ws_paoi = 0.0;     // r^(t+1)
    double completion_time = 0.0;       // Ψ(k_opt)

    Mask mask(std::size_t n) const { return mask_from_indices(n, selected); }
};

/// Candidate for one prefix length k: U is the priority prefix, V the
/// unselected devices finishing within Ψ(k), W the rest.
SelectionDecision evaluate_prefix(std::size_t k, std::span<const std::size_t> order,
                                  std::span<const double> total_times,
                                  std::span<const double> weights, std::span<const double> paoi);

/// Greedy priority-aware selection. Only prefix lengths where the running
/// maximum time is about to grow are examined, plus the all-devices case.
SelectionDecision greedy_select(std::span<const double> priorities,
                                std::span<const double> total_times,
                                std::span<const double> weights, std::span<const double> paoi);

/// (1/(T N)) Σ_t Σ_n q_n A_n^(t) over a recorded age trajectory.
double ews_paoi(std::span<const std::vector<double>> paoi_trajectory,
                std::span<const double> weights);

}  // namespace airaoi::scheduler
