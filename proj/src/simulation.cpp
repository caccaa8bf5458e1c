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

#include "airaoi/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "airaoi/aircomp.hpp"
#include "airaoi/baselines.hpp"

namespace airaoi::harness {

namespace {

fl::Task load_task(const ExperimentConfig& config, std::uint64_t seed) {
    if (config.data.source == "file") {
        fl::Task task;
        task.train = fl::load_columnar(config.data.path);
        task.test = config.data.test_path.empty() ? task.train : fl::load_columnar(config.data.test_path);
        const int classes = std::max(task.train.num_classes, task.test.num_classes);
        task.train.num_classes = task.test.num_classes = classes;
        if (task.test.num_features() != task.train.num_features())
            throw ConfigError("train and test files differ in feature count");
        return task;
    }
    Rng rng = make_rng(seed, Stream::kData, 0);
    return fl::make_gaussian_task(config.data.classes, config.data.features,
                                  config.data.train_per_class, config.data.test_per_class,
                                  config.data.separation, rng);
}

std::vector<double> slice_values(std::span<const double> all, std::span<const std::size_t> ids) {
    std::vector<double> out;
    out.reserve(ids.size());
    for (std::size_t i : ids) out.push_back(all[i]);
    return out;
}

}  // namespace

std::uint64_t replication_seed(std::uint64_t master, std::size_t replication) {
    return derive_seed(master, Stream::kReplication, replication);
}

Environment build_environment(const ExperimentConfig& config, std::uint64_t seed, double snr_db) {
    config.validate();
    Environment env;
    env.devices = config.devices;
    env.rounds = config.rounds;
    env.snr_db = snr_db;
    env.seed = seed;

    env.task = load_task(config, seed);
    Rng part_rng = make_rng(seed, Stream::kData, 1);
    env.partition = fl::partition_noniid(env.task.train, config.class_schedule(), part_rng);

    const auto cpu = config.cpu_profile();
    for (std::size_t n = 0; n < env.devices; ++n) {
        timing::ComputeProfile p;
        p.cycles_per_sample = config.timing.cycles_per_sample;
        p.dataset_size = env.partition.shards[n].size();
        p.cpu_hz = cpu[n];
        p.validate();
        env.compute.push_back(p);
    }
    env.comm.model_size = config.timing.model_size;
    env.comm.bandwidth = config.timing.bandwidth;
    const double comm_time = timing::communication_time(env.comm);

    channel::ChannelParams cp;
    cp.frequency_correlation = config.channel.frequency_correlation;
    cp.path_loss_exponent = config.channel.path_loss_exponent;
    cp.noise_scale = config.channel.noise_scale;
    cp.distances = config.distances();
    cp.validate();

    for (std::size_t t = 0; t < env.rounds; ++t) {
        Rng ch_rng = make_rng(seed, Stream::kChannel, t);
        env.channels.push_back(channel::realize_round(cp, env.devices, t, ch_rng));
        Rng tau_rng = make_rng(seed, Stream::kResource, t);
        std::vector<double> tau(env.devices);
        std::vector<double> total(env.devices);
        for (std::size_t n = 0; n < env.devices; ++n) {
            tau[n] = timing::draw_resource_coefficient(config.timing.tau_min, tau_rng);
            total[n] = timing::total_time(timing::computation_time(env.compute[n], tau[n]), comm_time);
        }
        env.resource.push_back(std::move(tau));
        env.total_times.push_back(std::move(total));
    }

    env.avg_power.assign(env.devices, config.power.avg_power);
    env.max_power.assign(env.devices, config.power.avg_power * config.power.max_power_ratio);
    env.noise_variance = channel::noise_variance_from_snr(config.power.avg_power, snr_db);
    return env;
}

std::vector<ScheduledRound> schedule(const Environment& env, Policy policy, std::size_t k_fixed,
                                     double deadline) {
    const std::size_t n = env.devices;
    auto state = scheduler::initial_state(env.partition.weights);
    std::vector<ScheduledRound> out;
    out.reserve(env.rounds);
    for (std::size_t t = 0; t < env.rounds; ++t) {
        const auto& times = env.total_times[t];
        ScheduledRound r;
        r.paoi_start = state.paoi;
        switch (policy) {
            case Policy::kFedAirAoI:
            case Policy::kFullPower:
            case Policy::kChannelInversion: {
                const auto pri = scheduler::priorities(state, times);
                auto d = scheduler::greedy_select(pri, times, state.weights, state.paoi);
                r.selected = std::move(d.selected);
                r.k_opt = d.k_opt;
                r.predicted_ws_paoi = d.predicted_ws_paoi;
                r.completion_time = d.completion_time;
                break;
            }
            case Policy::kFedAvg: {
                Rng rng = make_rng(env.seed, Stream::kSelection, t);
                r.drawn = baselines::fedavg_select(n, k_fixed, rng);
                r.selected = r.drawn;
                r.k_opt = r.selected.size();
                r.completion_time = timing::completion_time(times, mask_from_indices(n, r.selected));
                break;
            }
            case Policy::kHybridFL: {
                Rng rng = make_rng(env.seed, Stream::kSelection, t);
                auto h = baselines::hybridfl_select(n, k_fixed, deadline, times, rng);
                r.drawn = std::move(h.drawn);
                r.selected = std::move(h.selected);
                r.skipped = h.skipped;
                r.k_opt = r.selected.size();
                // With no survivor the server still waits out the deadline.
                r.completion_time =
                    r.skipped ? deadline : timing::completion_time(times, mask_from_indices(n, r.selected));
                break;
            }
        }
        const Mask mask = mask_from_indices(n, r.selected);
        state = scheduler::update_paoi(state, mask, r.completion_time);
        r.paoi_next = state.paoi;
        out.push_back(std::move(r));
    }
    return out;
}

std::size_t matched_participation(const Environment& env) {
    const auto trace = schedule(env, Policy::kFedAirAoI, 0, 0.0);
    double acc = 0.0;
    for (const auto& r : trace) acc += static_cast<double>(r.selected.size());
    const auto k = static_cast<std::size_t>(std::llround(acc / static_cast<double>(trace.size())));
    return std::clamp<std::size_t>(k, 1, env.devices);
}

double default_deadline(const ExperimentConfig& config, const Environment& env) {
    const double tau_mean = 0.5 * (config.timing.tau_min + 1.0);
    const double comm = timing::communication_time(env.comm);
    std::vector<double> t;
    for (const auto& p : env.compute) t.push_back(timing::computation_time(p, tau_mean) + comm);
    std::sort(t.begin(), t.end());
    const std::size_t m = t.size();
    return m % 2 ? t[m / 2] : 0.5 * (t[m / 2 - 1] + t[m / 2]);
}

Simulator::Simulator(const ExperimentConfig& config, const Environment& env, Policy policy,
                     const RunOptions& options)
    : config_(config),
      env_(env),
      policy_(policy),
      options_(options),
      model_(env.task.train.num_features(), env.task.train.num_classes),
      train_(config.train_config()) {
    if (policy == Policy::kFedAvg || policy == Policy::kHybridFL) {
        k_fixed_ = options.k_fixed > 0           ? options.k_fixed
                   : config.baselines.k_fixed > 0 ? config.baselines.k_fixed
                                                  : matched_participation(env);
        deadline_ = options.deadline > 0.0           ? options.deadline
                    : config.baselines.deadline > 0.0 ? config.baselines.deadline
                                                      : default_deadline(config, env);
    }
    scheduled_ = schedule(env, policy, k_fixed_, deadline_);

    problem_.max_power = env.max_power;
    problem_.avg_power = env.avg_power;
    problem_.noise_variance =
        config.power.mode == PowerMode::kIdeal ? 0.0 : env.noise_variance;
    for (std::size_t t = 0; t < env.rounds; ++t) {
        power::RoundSlice s;
        s.devices = scheduled_[t].selected;
        s.gains = slice_values(env.channels[t].gains, s.devices);
        problem_.rounds.push_back(std::move(s));
    }
    plan_power();

    w_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model_.dimension()));
    if (config.train.enabled) {
        std::vector<std::size_t> everyone(env.devices);
        std::iota(everyone.begin(), everyone.end(), std::size_t{0});
        initial_loss_ = fl::global_loss(model_, w_, env.partition.shards, env.partition.weights, everyone);
    }
    if (options.keep_weights) trajectory_.push_back(w_);
}

void Simulator::plan_power() {
    const std::size_t rounds = problem_.rounds.size();
    active_.assign(rounds, {});
    for (std::size_t t = 0; t < rounds; ++t) active_[t].assign(problem_.rounds[t].size(), 1);

    if (config_.power.mode == PowerMode::kIdeal) {
        // Common target at the weakest received amplitude: every α <= 1.
        plan_.alpha.resize(rounds);
        plan_.eta.assign(rounds, 0.0);
        for (std::size_t t = 0; t < rounds; ++t) {
            const auto& s = problem_.rounds[t];
            plan_.alpha[t].assign(s.size(), 0.0);
            double target = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < s.size(); ++i)
                if (s.gains[i] > 0.0) target = std::min(target, problem_.max_power[s.devices[i]] * s.gains[i]);
            if (!std::isfinite(target)) continue;
            plan_.eta[t] = target;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (s.gains[i] > 0.0)
                    plan_.alpha[t][i] = std::min(target / (problem_.max_power[s.devices[i]] * s.gains[i]), 1.0);
        }
        return;
    }

    switch (policy_) {
        case Policy::kFullPower:
            plan_ = baselines::full_power_plan(problem_);
            return;
        case Policy::kChannelInversion: {
            auto inv = baselines::channel_inversion_plan(problem_);
            plan_ = std::move(inv.plan);
            active_ = std::move(inv.active);
            return;
        }
        default:
            break;
    }

    const bool any_transmission = std::any_of(problem_.rounds.begin(), problem_.rounds.end(),
                                              [](const power::RoundSlice& s) { return s.size() > 0; });
    if (!any_transmission) {
        plan_.alpha.assign(rounds, {});
        plan_.eta.assign(rounds, 0.0);
        return;
    }

    if (config_.power.mode == PowerMode::kOffline) {
        power::AlternatingOptions opts;
        opts.epsilon0 = config_.power.epsilon0;
        opts.max_iterations = config_.power.max_iterations;
        auto res = power::alternating_optimize(problem_, opts);
        plan_ = std::move(res.plan);
        power_iterations_ = res.iterations;
        return;
    }

    // Online: per-round (α, η) with multipliers tracking the average budget.
    multipliers_.assign(env_.devices, 0.0);
    plan_.alpha.resize(rounds);
    plan_.eta.assign(rounds, 0.0);
    for (std::size_t t = 0; t < rounds; ++t) {
        const auto& s = problem_.rounds[t];
        std::vector<double> used(env_.devices, 0.0);
        if (s.size() > 0) {
            auto rp = power::online_round_plan(s, multipliers_, problem_.max_power,
                                               problem_.noise_variance, config_.power.epsilon0);
            plan_.alpha[t] = rp.alpha;
            plan_.eta[t] = rp.eta;
            for (std::size_t i = 0; i < s.size(); ++i) used[s.devices[i]] = rp.alpha[i];
        }
        for (std::size_t n = 0; n < env_.devices; ++n) {
            const double pmax = problem_.max_power[n];
            const double step = config_.power.online_step > 0.0 ? config_.power.online_step : 0.1 / pmax;
            multipliers_[n] =
                std::max(0.0, multipliers_[n] + step * (used[n] * pmax - problem_.avg_power[n]));
        }
    }
}

RoundRecord Simulator::run_round() {
    if (done()) throw std::logic_error("simulation already finished");
    const std::size_t t = next_round_++;
    const ScheduledRound& sr = scheduled_[t];
    const auto& slice = problem_.rounds[t];
    const auto& q = env_.partition.weights;

    RoundRecord rec;
    rec.round = t;
    rec.k_opt = sr.k_opt;
    rec.selected = sr.selected;
    rec.skipped = sr.skipped;
    rec.completion_time = sr.completion_time;
    rec.predicted_ws_paoi = sr.predicted_ws_paoi;
    rec.paoi = sr.paoi_start;
    rec.ws_paoi = scheduler::ws_paoi(q, sr.paoi_start);
    rec.ws_paoi_next = scheduler::ws_paoi(q, sr.paoi_next);
    rec.alpha = plan_.alpha[t];
    rec.gains = slice.gains;
    rec.active = active_[t];
    rec.eta = plan_.eta[t];

    const auto pmax = slice_values(problem_.max_power, slice.devices);
    if (!sr.skipped && rec.eta > 0.0) {
        const auto m = power::instantaneous_mse(rec.alpha, rec.eta, slice.gains, pmax,
                                                problem_.noise_variance);
        rec.mse = m.total();
        rec.mse_misalignment = m.misalignment;
        rec.mse_noise = m.noise;
    }

    if (config_.train.enabled) {
        if (!sr.skipped && rec.eta > 0.0) {
            std::vector<Eigen::VectorXd> thetas;
            std::vector<std::complex<double>> coeffs;
            for (std::size_t d : sr.selected) {
                Rng rng = make_rng(env_.seed, Stream::kSgd, t, d);
                thetas.push_back(
                    fl::local_sgd(model_, w_, env_.partition.shards[d], train_, rng).update);
                coeffs.push_back(env_.channels[t].coefficients[d]);
                rec.max_element_variance =
                    std::max(rec.max_element_variance, aircomp::device_stats(thetas.back()).variance);
            }
            const auto qs = slice_values(q, sr.selected);
            Eigen::VectorXd plain = Eigen::VectorXd::Zero(w_.size());
            Eigen::VectorXd weighted = Eigen::VectorXd::Zero(w_.size());
            const double k = static_cast<double>(thetas.size());
            for (std::size_t i = 0; i < thetas.size(); ++i) {
                plain += thetas[i] / k;
                weighted += (static_cast<double>(env_.devices) / k) * qs[i] * thetas[i];
            }
            rec.weighting_bias = (plain - weighted).norm();

            Eigen::VectorXd theta_hat;
            try {
                Rng noise_rng = make_rng(env_.seed, Stream::kNoise, t);
                auto agg = aircomp::aggregate_round(thetas, qs, env_.devices, rec.alpha, pmax, coeffs,
                                                    rec.eta, problem_.noise_variance, noise_rng);
                theta_hat = std::move(agg.theta_hat);
                rec.aggregation_error = agg.error.squaredNorm();
            } catch (const DegenerateError&) {
                // Zero aggregate variance: no normalization to undo.
                theta_hat = plain;
            }
            w_ = fl::global_update(w_, theta_hat, train_.learning_rate);
        }
        std::vector<std::size_t> everyone(env_.devices);
        std::iota(everyone.begin(), everyone.end(), std::size_t{0});
        rec.train_loss = fl::global_loss(model_, w_, env_.partition.shards, q, everyone);
        rec.test_accuracy = model_.accuracy(w_, env_.task.test);
    }
    if (options_.keep_weights) trajectory_.push_back(w_);
    records_.push_back(rec);
    return rec;
}

RunResult Simulator::finish() {
    while (!done()) run_round();
    RunResult res;
    res.policy = policy_;
    res.seed = env_.seed;
    res.snr_db = env_.snr_db;
    res.k_fixed = k_fixed_;
    res.deadline = deadline_;
    res.weights_q = env_.partition.weights;
    res.records = records_;
    res.summary = summarize(records_, env_.devices, env_.partition.weights);
    res.summary.initial_loss = initial_loss_;
    res.summary.power_iterations = power_iterations_;
    const auto used = power::average_power(plan_, problem_);
    res.summary.max_power_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < used.size(); ++n)
        res.summary.max_power_excess = std::max(res.summary.max_power_excess, used[n] - problem_.avg_power[n]);
    res.summary.audit_passed = audit_records(records_, problem_.max_power, problem_.noise_variance);
    res.model_trajectory = trajectory_;
    if (config_.bound.enabled) res.bound = bound_for_run(config_, res, model_.dimension());
    return res;
}

RunSummary summarize(const std::vector<RoundRecord>& records, std::size_t devices,
                     std::span<const double> weights) {
    (void)weights;
    RunSummary s;
    if (records.empty()) return s;
    s.selection_frequency.assign(devices, 0.0);
    std::size_t mse_rounds = 0;
    for (const auto& r : records) {
        s.ews_paoi += r.ws_paoi;
        s.average_completion_time += r.completion_time;
        s.mean_participation += static_cast<double>(r.selected.size());
        s.mean_k_opt += static_cast<double>(r.k_opt);
        for (std::size_t d : r.selected) s.selection_frequency[d] += 1.0;
        if (r.skipped) {
            ++s.skipped_rounds;
        } else {
            s.time_average_mse += r.mse;
            ++mse_rounds;
        }
        s.max_element_variance = std::max(s.max_element_variance, r.max_element_variance);
    }
    const double t = static_cast<double>(records.size());
    s.ews_paoi /= t;
    s.average_completion_time /= t;
    s.mean_participation /= t;
    s.mean_k_opt /= t;
    for (double& f : s.selection_frequency) f /= t;
    s.min_selection_frequency = *std::min_element(s.selection_frequency.begin(), s.selection_frequency.end());
    if (mse_rounds > 0) s.time_average_mse /= static_cast<double>(mse_rounds);
    s.final_loss = records.back().train_loss;
    s.final_accuracy = records.back().test_accuracy;
    return s;
}

bool audit_records(const std::vector<RoundRecord>& records, std::span<const double> max_power,
                   double noise_variance, double tolerance) {
    for (const auto& r : records) {
        if (r.skipped || !(r.eta > 0.0)) continue;
        const auto pmax = slice_values(max_power, r.selected);
        const double m = power::instantaneous_mse(r.alpha, r.eta, r.gains, pmax, noise_variance).total();
        if (std::abs(m - r.mse) > tolerance * std::max(1.0, std::abs(m))) return false;
        for (double a : r.alpha)
            if (a < 0.0 || a > 1.0) return false;
    }
    return true;
}

diagnostics::BoundReport bound_for_run(const ExperimentConfig& config, const RunResult& run,
                                       std::size_t dimension) {
    diagnostics::BoundParams p;
    p.smoothness = config.bound.smoothness;
    p.gradient_noise = config.bound.gradient_noise;
    p.heterogeneity = config.bound.heterogeneity;
    p.element_variance_cap = config.bound.element_variance_cap;
    p.gradient_norm_cap = config.bound.gradient_norm_cap;
    p.initial_gap = config.bound.initial_gap;
    if (config.bound.estimate_from_run) {
        p.element_variance_cap = run.summary.max_element_variance;
        double best = run.summary.initial_loss;
        for (const auto& r : run.records) best = std::min(best, r.train_loss);
        p.initial_gap = std::max(0.0, run.summary.initial_loss - best);
    }
    p.dimension = dimension;
    p.devices = config.devices;
    p.selected = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(run.summary.mean_participation)), 1, config.devices);
    p.rounds = config.rounds;
    p.learning_rate = config.train.learning_rate;
    p.local_iterations = config.train.local_iterations;
    for (const auto& r : run.records)
        if (!r.skipped) p.mse_trace.push_back(r.mse);
    p.weight_skew = static_cast<double>(config.devices) *
                    *std::max_element(run.weights_q.begin(), run.weights_q.end());
    return diagnostics::convergence_bound(p, config.bound.rescale_for_weights);
}

RunResult run_experiment(const ExperimentConfig& config, Policy policy, std::uint64_t seed,
                         double snr_db, const RunOptions& options) {
    const Environment env = build_environment(config, seed, snr_db);
    Simulator sim(config, env, policy, options);
    return sim.finish();
}

}  // namespace airaoi::harness
