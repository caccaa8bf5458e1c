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

#include "airaoi/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace airaoi::baselines {

namespace {

std::vector<double> fixed_alpha(const power::RoundSlice& slice, const power::PowerProblem& problem) {
    std::vector<double> a(slice.size());
    for (std::size_t i = 0; i < slice.size(); ++i) {
        const std::size_t d = slice.devices[i];
        a[i] = std::min(problem.avg_power[d] / problem.max_power[d], 1.0);
    }
    return a;
}

std::vector<double> slice_pmax(const power::RoundSlice& slice, const power::PowerProblem& problem) {
    std::vector<double> p(slice.size());
    for (std::size_t i = 0; i < slice.size(); ++i) p[i] = problem.max_power[slice.devices[i]];
    return p;
}

}  // namespace

power::PowerPlan full_power_plan(const power::PowerProblem& problem) {
    problem.validate();
    power::PowerPlan plan;
    plan.alpha.resize(problem.rounds.size());
    plan.eta.assign(problem.rounds.size(), 0.0);
    for (std::size_t t = 0; t < problem.rounds.size(); ++t) {
        const auto& slice = problem.rounds[t];
        plan.alpha[t] = fixed_alpha(slice, problem);
        if (slice.size() == 0) continue;
        plan.eta[t] = power::optimal_eta(plan.alpha[t], slice.gains, slice_pmax(slice, problem),
                                         problem.noise_variance);
    }
    return plan;
}

InversionRound channel_inversion_round(std::span<const double> gains, double eta_target,
                                       std::span<const double> max_powers) {
    if (!(eta_target > 0.0)) throw std::domain_error("inversion target must be positive");
    if (gains.size() != max_powers.size()) throw std::invalid_argument("gains/powers mismatch");
    InversionRound out;
    out.eta = eta_target;
    out.alpha.assign(gains.size(), 0.0);
    out.active.assign(gains.size(), 0);
    bool any = false;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        if (!(gains[i] > 0.0)) continue;
        const double need = eta_target / (max_powers[i] * gains[i]);
        if (need <= 1.0) {
            out.alpha[i] = need;
            out.active[i] = 1;
            any = true;
        }
    }
    if (!any) throw DegenerateError("every device deactivated under channel inversion");
    return out;
}

InversionPlan channel_inversion_plan(const power::PowerProblem& problem) {
    problem.validate();
    InversionPlan out;
    const std::size_t rounds = problem.rounds.size();
    out.plan.alpha.resize(rounds);
    out.plan.eta.assign(rounds, 0.0);
    out.active.resize(rounds);
    out.all_deactivated.assign(rounds, 0);
    for (std::size_t t = 0; t < rounds; ++t) {
        const auto& slice = problem.rounds[t];
        if (slice.size() == 0) continue;
        const auto pmax = slice_pmax(slice, problem);
        const double target =
            power::optimal_eta(fixed_alpha(slice, problem), slice.gains, pmax, problem.noise_variance);
        try {
            auto r = channel_inversion_round(slice.gains, target, pmax);
            out.plan.alpha[t] = std::move(r.alpha);
            out.active[t] = std::move(r.active);
        } catch (const DegenerateError&) {
            out.plan.alpha[t].assign(slice.size(), 0.0);
            out.active[t].assign(slice.size(), 0);
            out.all_deactivated[t] = 1;
        }
        out.plan.eta[t] = target;
    }
    return out;
}

std::vector<std::size_t> fedavg_select(std::size_t n_devices, std::size_t k, Rng& rng) {
    if (k < 1 || k > n_devices) throw std::out_of_range("k must lie in [1, N]");
    std::vector<std::size_t> ids(n_devices);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n_devices - 1);
        std::swap(ids[i], ids[pick(rng)]);
    }
    ids.resize(k);
    std::sort(ids.begin(), ids.end());
    return ids;
}

HybridSelection hybridfl_select(std::size_t n_devices, std::size_t k, double deadline,
                                std::span<const double> total_times, Rng& rng) {
    if (!(deadline > 0.0)) throw std::domain_error("deadline must be positive");
    if (total_times.size() != n_devices) throw std::invalid_argument("times length mismatch");
    HybridSelection out;
    out.drawn = fedavg_select(n_devices, k, rng);
    for (std::size_t d : out.drawn)
        if (total_times[d] <= deadline) out.selected.push_back(d);
    out.skipped = out.selected.empty();
    return out;
}

}  // namespace airaoi::baselines
