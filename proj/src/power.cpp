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

#include "airaoi/power.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace airaoi::power {

namespace {

double amplitude(double alpha, double gain, double max_power) {
    return std::sqrt(alpha * max_power * gain);
}

std::vector<double> slice_max_power(const RoundSlice& slice, std::span<const double> max_power) {
    std::vector<double> out;
    out.reserve(slice.size());
    for (std::size_t d : slice.devices) out.push_back(max_power[d]);
    return out;
}

}  // namespace

void PowerProblem::validate() const {
    if (max_power.size() != avg_power.size())
        throw std::invalid_argument("power budgets differ in length");
    if (!(noise_variance >= 0.0)) throw std::domain_error("noise variance must be >= 0");
    for (std::size_t n = 0; n < max_power.size(); ++n)
        if (!(avg_power[n] > 0.0) || !(max_power[n] >= avg_power[n]))
            throw std::domain_error("require 0 < average power <= max power");
    for (const auto& r : rounds) {
        if (r.devices.size() != r.gains.size())
            throw std::invalid_argument("round slice devices/gains mismatch");
        for (std::size_t d : r.devices)
            if (d >= max_power.size()) throw std::out_of_range("device id out of range");
        for (double g : r.gains)
            if (!(g >= 0.0)) throw std::domain_error("channel gain must be >= 0");
    }
}

MseTerms instantaneous_mse(std::span<const double> alphas, double eta,
                           std::span<const double> gains, std::span<const double> max_powers,
                           double noise_variance) {
    if (!(eta > 0.0)) throw std::domain_error("normalizing factor must be positive");
    if (alphas.size() != gains.size() || gains.size() != max_powers.size())
        throw std::invalid_argument("device arrays differ in length");
    MseTerms out;
    const double root_eta = std::sqrt(eta);
    for (std::size_t n = 0; n < alphas.size(); ++n) {
        const double dev = amplitude(alphas[n], gains[n], max_powers[n]) / root_eta - 1.0;
        out.misalignment += dev * dev;
    }
    out.noise = noise_variance / eta;
    return out;
}

double optimal_eta(std::span<const double> alphas, std::span<const double> gains,
                   std::span<const double> max_powers, double noise_variance) {
    if (alphas.size() != gains.size() || gains.size() != max_powers.size())
        throw std::invalid_argument("device arrays differ in length");
    double sum_b = 0.0;
    double sum_b2 = 0.0;
    for (std::size_t n = 0; n < alphas.size(); ++n) {
        const double b = amplitude(alphas[n], gains[n], max_powers[n]);
        sum_b += b;
        sum_b2 += b * b;
    }
    if (!(sum_b > 0.0)) throw DegenerateError("all received amplitudes are zero");
    const double ratio = (noise_variance + sum_b2) / sum_b;
    return ratio * ratio;
}

double alpha_for_multiplier(double eta, double gain, double max_power, double multiplier) {
    if (!(gain > 0.0)) return 0.0;
    const double denom = gain + multiplier * eta;
    const double a = eta * gain / (max_power * denom * denom);
    return std::min(a, 1.0);
}

AlphaSolution optimal_alpha_offline(std::span<const double> etas, std::span<const double> gains,
                                    double max_power, double avg_power, std::size_t horizon,
                                    const BisectionOptions& options) {
    if (etas.size() != gains.size()) throw std::invalid_argument("etas and gains differ in length");
    if (!(avg_power > 0.0) || !(max_power >= avg_power))
        throw std::domain_error("require 0 < average power <= max power");
    if (horizon < etas.size()) throw std::invalid_argument("horizon shorter than round count");
    for (double e : etas)
        if (!(e > 0.0)) throw std::domain_error("normalizing factors must be positive");

    const double budget = static_cast<double>(horizon) * avg_power / max_power;
    auto fill = [&](double gamma, std::vector<double>& out) {
        double sum = 0.0;
        for (std::size_t t = 0; t < etas.size(); ++t) {
            out[t] = alpha_for_multiplier(etas[t], gains[t], max_power, gamma);
            sum += out[t];
        }
        return sum;
    };

    AlphaSolution sol;
    sol.alpha.resize(etas.size());
    const double slack_sum = fill(0.0, sol.alpha);
    if (slack_sum < budget) {
        sol.residual = budget - slack_sum;
        return sol;
    }

    // Σα(γ) is continuous and decreasing; bracket then bisect.
    std::vector<double> trial(etas.size());
    double lo = 0.0;
    double hi = 1.0;
    std::size_t doublings = 0;
    double hi_sum = fill(hi, trial);
    while (hi_sum >= budget) {
        if (++doublings > options.max_doublings)
            throw BisectionError("could not bracket the power-budget multiplier");
        lo = hi;
        hi *= 2.0;
        hi_sum = fill(hi, trial);
    }
    std::vector<double> hi_alpha = trial;
    std::size_t iter = 0;
    while (budget - hi_sum > options.tolerance && iter < options.max_iterations) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double s = fill(mid, trial);
        if (s >= budget) {
            lo = mid;
        } else {
            hi = mid;
            hi_sum = s;
            hi_alpha = trial;
        }
        ++iter;
    }
    sol.alpha = std::move(hi_alpha);
    sol.multiplier = hi;
    sol.budget_binding = true;
    sol.iterations = iter;
    sol.residual = budget - hi_sum;
    return sol;
}

namespace {

PowerPlan initial_plan(const PowerProblem& problem, AlphaInit init) {
    PowerPlan plan;
    plan.alpha.resize(problem.rounds.size());
    plan.eta.assign(problem.rounds.size(), 0.0);
    for (std::size_t t = 0; t < problem.rounds.size(); ++t) {
        const auto& slice = problem.rounds[t];
        auto& a = plan.alpha[t];
        a.resize(slice.size());
        for (std::size_t i = 0; i < slice.size(); ++i) {
            const std::size_t d = slice.devices[i];
            a[i] = std::min(problem.avg_power[d] / problem.max_power[d], 1.0);
        }
        if (init == AlphaInit::kCappedInversion && slice.size() > 0) {
            const auto pmax = slice_max_power(slice, problem.max_power);
            const double eta = optimal_eta(a, slice.gains, pmax, problem.noise_variance);
            for (std::size_t i = 0; i < slice.size(); ++i)
                a[i] = alpha_for_multiplier(eta, slice.gains[i], pmax[i], 0.0);
        }
    }
    if (init == AlphaInit::kCappedInversion) {
        // Scale each device onto its average-power budget so the start is feasible.
        std::vector<double> used(problem.max_power.size(), 0.0);
        for (std::size_t t = 0; t < problem.rounds.size(); ++t)
            for (std::size_t i = 0; i < problem.rounds[t].size(); ++i)
                used[problem.rounds[t].devices[i]] += plan.alpha[t][i];
        const double horizon = static_cast<double>(problem.rounds.size());
        for (std::size_t t = 0; t < problem.rounds.size(); ++t)
            for (std::size_t i = 0; i < problem.rounds[t].size(); ++i) {
                const std::size_t d = problem.rounds[t].devices[i];
                const double budget = horizon * problem.avg_power[d] / problem.max_power[d];
                if (used[d] > budget) plan.alpha[t][i] *= budget / used[d];
            }
    }
    return plan;
}

// η step: closed form per round. Rounds with nothing received keep their η.
void update_eta(const PowerProblem& problem, PowerPlan& plan) {
    for (std::size_t t = 0; t < problem.rounds.size(); ++t) {
        const auto& slice = problem.rounds[t];
        if (slice.size() == 0) continue;
        const auto pmax = slice_max_power(slice, problem.max_power);
        try {
            plan.eta[t] = optimal_eta(plan.alpha[t], slice.gains, pmax, problem.noise_variance);
        } catch (const DegenerateError&) {
            if (!(plan.eta[t] > 0.0)) plan.eta[t] = 1.0;
        }
    }
}

// α step: independent per device across the rounds it transmits in.
void update_alpha(const PowerProblem& problem, PowerPlan& plan, const BisectionOptions& opts) {
    const std::size_t n_dev = problem.max_power.size();
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> slots(n_dev);
    for (std::size_t t = 0; t < problem.rounds.size(); ++t)
        for (std::size_t i = 0; i < problem.rounds[t].size(); ++i)
            slots[problem.rounds[t].devices[i]].emplace_back(t, i);
    std::vector<double> etas;
    std::vector<double> gains;
    for (std::size_t d = 0; d < n_dev; ++d) {
        if (slots[d].empty()) continue;
        etas.clear();
        gains.clear();
        for (auto [t, i] : slots[d]) {
            etas.push_back(plan.eta[t]);
            gains.push_back(problem.rounds[t].gains[i]);
        }
        const auto sol = optimal_alpha_offline(etas, gains, problem.max_power[d],
                                               problem.avg_power[d], problem.rounds.size(), opts);
        for (std::size_t j = 0; j < slots[d].size(); ++j)
            plan.alpha[slots[d][j].first][slots[d][j].second] = sol.alpha[j];
    }
}

}  // namespace

std::vector<MseTerms> round_mse(const PowerPlan& plan, const PowerProblem& problem) {
    if (plan.alpha.size() != problem.rounds.size() || plan.eta.size() != problem.rounds.size())
        throw std::invalid_argument("plan does not cover every round");
    std::vector<MseTerms> out(problem.rounds.size());
    for (std::size_t t = 0; t < problem.rounds.size(); ++t) {
        const auto& slice = problem.rounds[t];
        if (slice.size() == 0) continue;
        const auto pmax = slice_max_power(slice, problem.max_power);
        out[t] = instantaneous_mse(plan.alpha[t], plan.eta[t], slice.gains, pmax,
                                   problem.noise_variance);
    }
    return out;
}

double time_average_mse(const PowerPlan& plan, const PowerProblem& problem) {
    const auto per_round = round_mse(plan, problem);
    double acc = 0.0;
    std::size_t counted = 0;
    for (std::size_t t = 0; t < per_round.size(); ++t) {
        if (problem.rounds[t].size() == 0) continue;  // no aggregation happened
        acc += per_round[t].total();
        ++counted;
    }
    if (counted == 0) throw std::invalid_argument("no round carries a transmission");
    return acc / static_cast<double>(counted);
}

std::vector<double> average_power(const PowerPlan& plan, const PowerProblem& problem) {
    std::vector<double> out(problem.max_power.size(), 0.0);
    for (std::size_t t = 0; t < problem.rounds.size(); ++t)
        for (std::size_t i = 0; i < problem.rounds[t].size(); ++i) {
            const std::size_t d = problem.rounds[t].devices[i];
            out[d] += plan.alpha[t][i] * problem.max_power[d];
        }
    const double horizon = static_cast<double>(std::max<std::size_t>(problem.rounds.size(), 1));
    for (double& p : out) p /= horizon;
    return out;
}

AlternatingResult alternating_optimize(const PowerProblem& problem,
                                       const AlternatingOptions& options) {
    problem.validate();
    if (!(options.epsilon0 > 0.0)) throw std::domain_error("epsilon0 must be positive");
    AlternatingResult res;
    res.plan = initial_plan(problem, options.init);
    update_eta(problem, res.plan);
    double prev = time_average_mse(res.plan, problem);
    res.mse_history.push_back(prev);

    for (std::size_t i = 1; i <= options.max_iterations; ++i) {
        // Each half-step solves its subproblem exactly; a rounding-level
        // regression in either step keeps the previous values.
        double eta_only = prev;
        if (i > 1) {
            PowerPlan eta_step = res.plan;
            update_eta(problem, eta_step);
            const double m = time_average_mse(eta_step, problem);
            if (m <= prev) {
                res.plan = std::move(eta_step);
                eta_only = m;
            }
        }
        PowerPlan candidate = res.plan;
        update_alpha(problem, candidate, options.bisection);
        double cur = time_average_mse(candidate, problem);
        if (cur <= eta_only) {
            res.plan = std::move(candidate);
        } else {
            cur = eta_only;
        }
        res.mse_history.push_back(cur);
        res.iterations = i;
        if (cur <= 0.0 || (prev - cur) / cur < options.epsilon0) break;
        prev = cur;
    }
    return res;
}

OnlineStep online_alpha_step(double gain, double eta, double multiplier, double max_power,
                             double avg_power, double step) {
    if (!(multiplier >= 0.0)) throw std::domain_error("multiplier must be nonnegative");
    OnlineStep out;
    out.alpha = alpha_for_multiplier(eta, gain, max_power, multiplier);
    out.next_multiplier = std::max(0.0, multiplier + step * (out.alpha * max_power - avg_power));
    return out;
}

RoundPower online_round_plan(const RoundSlice& slice, std::span<const double> multipliers,
                             std::span<const double> max_power, double noise_variance,
                             double epsilon0, std::size_t max_iterations) {
    RoundPower out;
    if (slice.size() == 0) return out;
    const auto pmax = slice_max_power(slice, max_power);
    out.alpha.assign(slice.size(), 1.0);
    out.eta = optimal_eta(out.alpha, slice.gains, pmax, noise_variance);
    double prev = instantaneous_mse(out.alpha, out.eta, slice.gains, pmax, noise_variance).total();
    for (std::size_t it = 0; it < max_iterations; ++it) {
        std::vector<double> next(slice.size());
        for (std::size_t i = 0; i < slice.size(); ++i)
            next[i] = alpha_for_multiplier(out.eta, slice.gains[i], pmax[i],
                                           multipliers[slice.devices[i]]);
        double eta;
        try {
            eta = optimal_eta(next, slice.gains, pmax, noise_variance);
        } catch (const DegenerateError&) {
            break;
        }
        out.alpha = std::move(next);
        out.eta = eta;
        const double cur =
            instantaneous_mse(out.alpha, out.eta, slice.gains, pmax, noise_variance).total();
        if (cur <= 0.0 || std::abs(prev - cur) / cur < epsilon0) break;
        prev = cur;
    }
    return out;
}

}  // namespace airaoi::power
