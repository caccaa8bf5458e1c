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

#include "airaoi/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace airaoi::scheduler {

void AoIState::validate() const {
    if (paoi.size() != weights.size())
        throw std::invalid_argument("ages and weights differ in length");
    if (paoi.empty()) throw std::invalid_argument("state needs at least one device");
    double sum = 0.0;
    for (double q : weights) {
        if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("weight outside [0, 1]");
        sum += q;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::domain_error("weights must sum to one");
    for (double a : paoi)
        if (!(a >= 0.0)) throw std::domain_error("age must be nonnegative");
}

AoIState initial_state(std::vector<double> weights) {
    AoIState s;
    s.paoi.assign(weights.size(), 0.0);
    s.weights = std::move(weights);
    s.validate();
    return s;
}

std::vector<double> class_weights(std::span<const int> class_counts) {
    if (class_counts.empty()) throw std::invalid_argument("no devices");
    // Shift by the largest exponent so large class counts do not overflow.
    const int top = *std::max_element(class_counts.begin(), class_counts.end());
    std::vector<double> q;
    q.reserve(class_counts.size());
    for (int m : class_counts) {
        if (m < 1) throw std::domain_error("class count must be >= 1");
        q.push_back(std::ldexp(1.0, m - top));
    }
    const double total = std::accumulate(q.begin(), q.end(), 0.0);
    for (double& v : q) v /= total;
    return q;
}

AoIState update_paoi(const AoIState& state, std::span<const std::uint8_t> mask,
                     double completion_time) {
    if (mask.size() != state.size()) throw std::invalid_argument("mask length mismatch");
    if (!(completion_time >= 0.0)) throw std::domain_error("completion time must be >= 0");
    AoIState next = state;
    for (std::size_t n = 0; n < state.size(); ++n)
        next.paoi[n] = (mask[n] ? 0.0 : state.paoi[n]) + completion_time;
    next.round = state.round + 1;
    return next;
}

double device_priority(double weight, double paoi, double total_time) {
    if (!(total_time > 0.0)) throw std::domain_error("total time must be positive");
    return weight * paoi / total_time;
}

std::vector<double> priorities(const AoIState& state, std::span<const double> total_times) {
    if (total_times.size() != state.size()) throw std::invalid_argument("times length mismatch");
    std::vector<double> out(state.size());
    for (std::size_t n = 0; n < state.size(); ++n)
        out[n] = device_priority(state.weights[n], state.paoi[n], total_times[n]);
    return out;
}

double lyapunov_value(const AoIState& state) {
    double acc = 0.0;
    for (std::size_t n = 0; n < state.size(); ++n)
        acc += state.weights[n] * state.paoi[n] * state.paoi[n];
    return acc / static_cast<double>(state.size());
}

double lyapunov_drift(const AoIState& current, const AoIState& next) {
    if (current.size() != next.size()) throw std::invalid_argument("device sets differ");
    return lyapunov_value(next) - lyapunov_value(current);
}

double ws_paoi(std::span<const double> weights, std::span<const double> paoi) {
    if (weights.size() != paoi.size() || weights.empty())
        throw std::invalid_argument("weights and ages must be non-empty and aligned");
    double acc = 0.0;
    for (std::size_t n = 0; n < paoi.size(); ++n) acc += weights[n] * paoi[n];
    return acc / static_cast<double>(paoi.size());
}

std::vector<std::size_t> priority_order(std::span<const double> priorities) {
    std::vector<std::size_t> order(priorities.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return priorities[a] > priorities[b];
    });
    return order;
}

double staircase_psi(std::size_t k, std::span<const double> priorities,
                     std::span<const double> total_times) {
    if (k < 1 || k > priorities.size()) throw std::out_of_range("k must lie in [1, N]");
    if (total_times.size() != priorities.size())
        throw std::invalid_argument("times length mismatch");
    const auto order = priority_order(priorities);
    double worst = total_times[order[0]];
    for (std::size_t i = 1; i < k; ++i) worst = std::max(worst, total_times[order[i]]);
    return worst;
}

SelectionDecision evaluate_prefix(std::size_t k, std::span<const std::size_t> order,
                                  std::span<const double> total_times,
                                  std::span<const double> weights, std::span<const double> paoi) {
    const std::size_t n = order.size();
    if (k < 1 || k > n) throw std::out_of_range("k must lie in [1, N]");
    Mask in_prefix(n, 0);
    double psi = total_times[order[0]];
    for (std::size_t i = 0; i < k; ++i) {
        in_prefix[order[i]] = 1;
        psi = std::max(psi, total_times[order[i]]);
    }
    SelectionDecision d;
    d.k_opt = k;
    d.completion_time = psi;
    double residual = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        if (in_prefix[m] || total_times[m] <= psi) {
            d.selected.push_back(m);
        } else {
            residual += weights[m] * paoi[m];
        }
    }
    d.predicted_ws_paoi = (psi + residual) / static_cast<double>(n);
    return d;
}

SelectionDecision greedy_select(std::span<const double> priorities,
                                std::span<const double> total_times,
                                std::span<const double> weights, std::span<const double> paoi) {
    const std::size_t n = priorities.size();
    if (n == 0) throw std::invalid_argument("greedy_select needs at least one device");
    if (total_times.size() != n || weights.size() != n || paoi.size() != n)
        throw std::invalid_argument("greedy_select inputs differ in length");
    for (double t : total_times)
        if (!(t > 0.0)) throw std::domain_error("total times must be positive");

    const auto order = priority_order(priorities);
    double t_max = total_times[order[0]];
    SelectionDecision best;
    bool have_best = false;
    auto consider = [&](std::size_t k) {
        SelectionDecision cand = evaluate_prefix(k, order, total_times, weights, paoi);
        if (!have_best || cand.predicted_ws_paoi < best.predicted_ws_paoi) {
            best = std::move(cand);
            have_best = true;
        }
    };
    for (std::size_t i = 1; i < n; ++i) {
        const double t = total_times[order[i]];
        if (t_max < t) {
            consider(i);  // prefix of length i, before the jump
            t_max = t;
        }
    }
    consider(n);
    return best;
}

double ews_paoi(std::span<const std::vector<double>> paoi_trajectory,
                std::span<const double> weights) {
    if (paoi_trajectory.empty()) throw std::invalid_argument("empty trajectory");
    double acc = 0.0;
    for (const auto& a : paoi_trajectory) acc += ws_paoi(weights, a);
    return acc / static_cast<double>(paoi_trajectory.size());
}

}  // namespace airaoi::scheduler
