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

// Acceptance checks: prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "airaoi/aircomp.hpp"
#include "airaoi/diagnostics.hpp"
#include "airaoi/power.hpp"
#include "airaoi/report.hpp"
#include "airaoi/scheduler.hpp"
#include "airaoi/simulation.hpp"
#include "oracles.hpp"

using namespace airaoi;
using namespace airaoi::harness;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Outcome eta_oracle() {
    Rng rng(101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = -1.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 1 + static_cast<std::size_t>(u(rng) * 10.0) % 10;
        std::vector<double> alpha(k, 1.0), gains(k), pmax(k, 1.0), b(k);
        for (std::size_t i = 0; i < k; ++i) {
            b[i] = 0.05 + 3.0 * u(rng);
            gains[i] = b[i] * b[i];
        }
        const double sigma2 = std::pow(10.0, -3.0 + 4.0 * u(rng));
        const double eta = power::optimal_eta(alpha, gains, pmax, sigma2);
        const double closed = power::instantaneous_mse(alpha, eta, gains, pmax, sigma2).total();
        const double grid = oracle::grid_min_mse(b, sigma2);
        worst = std::max(worst, (closed - grid) / grid);
    }
    return {worst <= 1e-6, fmt("max (closed - grid)/grid = %.3e over 100 instances", worst)};
}

Outcome alpha_oracle() {
    Rng rng(202);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_obj = -1.0;
    double worst_res = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t t_len = 1 + static_cast<std::size_t>(trial) % 8;
        const double pmax = 1.0 + 4.0 * u(rng);
        const double pbar = pmax * (0.05 + 0.9 * u(rng));
        std::vector<double> etas(t_len), gains(t_len), kappa(t_len);
        for (std::size_t t = 0; t < t_len; ++t) {
            etas[t] = 0.1 + 2.0 * u(rng);
            gains[t] = -std::log(1.0 - u(rng));
            kappa[t] = pmax * gains[t] / etas[t];
        }
        const auto sol = power::optimal_alpha_offline(etas, gains, pmax, pbar, t_len);
        const double budget = static_cast<double>(t_len) * pbar / pmax;
        const auto ref = oracle::alpha_pairwise_descent(kappa, budget, 200);
        const double f = oracle::alpha_objective(sol.alpha, kappa);
        const double f_ref = oracle::alpha_objective(ref, kappa);
        worst_obj = std::max(worst_obj, std::abs(f - f_ref) / std::max(f_ref, 1e-12));
        if (sol.budget_binding) {
            double sum = 0.0;
            for (double a : sol.alpha) sum += a;
            worst_res = std::max(worst_res, std::abs(budget - sum));
        }
    }
    return {worst_obj <= 1e-4 && worst_res <= 1e-8,
            fmt("max relative objective gap %.3e, max budget residual %.3e", worst_obj, worst_res)};
}

power::PowerProblem random_problem(Rng& rng, std::size_t devices, std::size_t rounds) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::exponential_distribution<double> gain(1.0);
    power::PowerProblem p;
    for (std::size_t n = 0; n < devices; ++n) {
        p.avg_power.push_back(0.5 + u(rng));
        p.max_power.push_back(p.avg_power.back() * (1.0 + 3.0 * u(rng)));
    }
    p.noise_variance = std::pow(10.0, -2.0 + 2.5 * u(rng));
    for (std::size_t t = 0; t < rounds; ++t) {
        power::RoundSlice s;
        for (std::size_t n = 0; n < devices; ++n)
            if (u(rng) < 0.6) {
                s.devices.push_back(n);
                s.gains.push_back(gain(rng));
            }
        if (s.size() == 0) {
            s.devices.push_back(0);
            s.gains.push_back(gain(rng));
        }
        p.rounds.push_back(std::move(s));
    }
    return p;
}

Outcome alternating_monotone() {
    Rng rng(303);
    int violations = 0;
    int bad_stop = 0;
    std::size_t max_iter = 0;
    power::AlternatingOptions opts;
    opts.epsilon0 = 1e-5;
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = random_problem(rng, 2 + trial % 10, 5 + trial % 30);
        const auto res = power::alternating_optimize(p, opts);
        for (std::size_t i = 1; i < res.mse_history.size(); ++i)
            if (res.mse_history[i] > res.mse_history[i - 1]) ++violations;
        const double last = res.mse_history.back();
        const double prev = res.mse_history[res.mse_history.size() - 2];
        if (!(res.iterations == opts.max_iterations || (prev - last) / last < opts.epsilon0)) ++bad_stop;
        max_iter = std::max(max_iter, res.iterations);
    }
    return {violations == 0 && bad_stop == 0,
            fmt("%.0f increases, %.0f bad stops, max %.0f iterations", violations, bad_stop,
                static_cast<double>(max_iter))};
}

Outcome greedy_oracle() {
    Rng rng(404);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    std::uniform_real_distribution<double> a(0.0, 30.0);
    int mismatches = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial) % 8;
        std::vector<double> times(n), q(n), paoi(n);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            times[i] = u(rng);
            q[i] = u(rng);
            paoi[i] = a(rng);
            total += q[i];
        }
        for (double& v : q) v /= total;
        const scheduler::AoIState s{paoi, q, 0};
        const auto pri = scheduler::priorities(s, times);
        const auto d = scheduler::greedy_select(pri, times, q, paoi);
        const double ref = oracle::prefix_enumeration(pri, times, q, paoi);
        if (std::abs(d.predicted_ws_paoi - ref) > 1e-12 * std::max(1.0, ref)) ++mismatches;
    }
    return {mismatches == 0, fmt("%.0f mismatches in 500 instances", mismatches)};
}

Outcome staircase_property() {
    Rng rng(505);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial) % 16;
        std::vector<double> times(n), pri(n);
        for (std::size_t i = 0; i < n; ++i) {
            times[i] = u(rng);
            pri[i] = u(rng);
        }
        for (std::size_t k = 1; k < n; ++k)
            if (scheduler::staircase_psi(k + 1, pri, times) < scheduler::staircase_psi(k, pri, times))
                ++violations;
    }
    return {violations == 0, fmt("%.0f violations in 1000 instances", violations)};
}

Outcome aircomp_exactness() {
    ExperimentConfig c;
    c.rounds = 50;
    c.power.mode = PowerMode::kIdeal;
    const std::uint64_t seed = 7;
    const Environment env = build_environment(c, seed, 10.0);
    RunOptions opts;
    opts.keep_weights = true;
    Simulator sim(c, env, Policy::kFedAirAoI, opts);
    const auto res = sim.finish();

    // Direct federated averaging over the same devices and local batches.
    const fl::SoftmaxModel model(env.task.train.num_features(), env.task.train.num_classes);
    const auto train = c.train_config();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.dimension()));
    double worst = 0.0;
    for (std::size_t t = 0; t < c.rounds; ++t) {
        const auto& sel = sim.scheduled()[t].selected;
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(w.size());
        for (std::size_t d : sel) {
            Rng rng = make_rng(seed, Stream::kSgd, t, d);
            mean += fl::local_sgd(model, w, env.partition.shards[d], train, rng).update;
        }
        mean /= static_cast<double>(sel.size());
        w -= train.learning_rate * mean;
        worst = std::max(worst, (w - res.model_trajectory[t + 1]).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-9, fmt("max per-component deviation %.3e over 50 rounds", worst)};
}

Outcome noise_identity() {
    Rng rng(707);
    const Eigen::Index d = 64;
    const std::vector<Eigen::VectorXd> zero{Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(d),
                                            Eigen::VectorXd::Zero(d)};
    const std::vector<double> alpha{0.3, 0.7, 1.0}, pmax{3.0, 3.0, 3.0};
    const std::vector<std::complex<double>> h{{0.4, 0.1}, {-1.1, 0.3}, {0.2, -0.9}};
    const double sigma2 = 0.3;
    const double eta = 1.7;
    double acc = 0.0;
    for (int i = 0; i < 10000; ++i)
        acc += aircomp::transmit_and_aggregate(zero, alpha, pmax, h, eta, sigma2, rng).squaredNorm();
    const double expected = static_cast<double>(d) * sigma2 / eta;
    const double rel = std::abs(acc / 10000.0 - expected) / expected;

    // Aggregation error bound in expectation on random instances.
    int bound_fail = 0;
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 1 + static_cast<std::size_t>(trial) % 6;
        const Eigen::Index dim = 24;
        std::vector<Eigen::VectorXd> th;
        std::vector<std::complex<double>> ch;
        std::vector<double> a(k), p(k, 3.0), q(k, 1.0 / static_cast<double>(k)), gains(k);
        for (std::size_t i = 0; i < k; ++i) {
            Eigen::VectorXd v(dim);
            const double shift = g(rng);
            for (Eigen::Index j = 0; j < dim; ++j) v[j] = shift + (0.5 + u(rng)) * g(rng);
            th.push_back(v);
            ch.emplace_back(g(rng) * std::sqrt(0.5), g(rng) * std::sqrt(0.5));
            a[i] = u(rng);
            gains[i] = std::norm(ch.back());
        }
        const double s2 = 0.05 + u(rng);
        const double e = power::optimal_eta(a, gains, p, s2);
        const double mse = power::instantaneous_mse(a, e, gains, p, s2).total();
        std::vector<aircomp::GradientStats> st;
        for (const auto& v : th) st.push_back(aircomp::device_stats(v));
        const auto agg = aircomp::aggregate_stats(st, q, k);
        double gamma = agg.variance;
        for (const auto& v : th) gamma = std::max(gamma, (v.array() - agg.mean).square().mean());
        double err = 0.0;
        for (int i = 0; i < 2000; ++i)
            err += aircomp::aggregate_round(th, q, k, a, p, ch, e, s2, rng).error.squaredNorm();
        if (err / 2000.0 > diagnostics::aggregation_error_bound(k, static_cast<std::size_t>(dim), gamma, mse))
            ++bound_fail;
    }
    return {rel <= 0.03 && bound_fail == 0,
            fmt("noise power relative error %.3e, error bound failures %.0f/20", rel, bound_fail)};
}

Outcome snr_sweep() {
    ExperimentConfig c;
    c.train.enabled = false;
    c.snr_db = {0.0, 5.0, 10.0, 15.0, 20.0};
    c.replications = 10;
    c.policies = {Policy::kFedAirAoI, Policy::kFullPower, Policy::kChannelInversion};
    const auto rows = sweep_snr(c);
    // rows are policy-major, SNR-minor
    const std::size_t s = c.snr_db.size();
    bool decreasing = true;
    bool ordered = true;
    for (std::size_t p = 0; p < 3; ++p)
        for (std::size_t i = 1; i < s; ++i)
            if (!(rows[p * s + i].mse.mean < rows[p * s + i - 1].mse.mean)) decreasing = false;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        const double ours = rows[i].mse.mean;
        if (!(ours <= rows[s + i].mse.mean) || !(ours <= rows[2 * s + i].mse.mean)) ordered = false;
        worst_ratio = std::max(worst_ratio, ours / std::min(rows[s + i].mse.mean, rows[2 * s + i].mse.mean));
    }
    return {decreasing && ordered,
            std::string("decreasing=") + (decreasing ? "yes" : "no") + " ordering=" + (ordered ? "yes" : "no") +
                fmt(" (worst FedAirAoI/baseline ratio %.3f)", worst_ratio)};
}

Outcome paoi_slopes() {
    ExperimentConfig c;
    c.rounds = 500;
    c.train.enabled = false;
    c.replications = 10;
    c.policies = {Policy::kFedAirAoI, Policy::kHybridFL};
    const auto rows = compare_policies(c);
    auto tail_slope = [&](const std::vector<double>& traj) {
        const std::size_t start = traj.size() - traj.size() / 4;
        return linear_slope(std::vector<double>(traj.begin() + static_cast<std::ptrdiff_t>(start), traj.end()));
    };
    const double ours = tail_slope(rows[0].ews_paoi_trajectory);
    const double hybrid = tail_slope(rows[1].ews_paoi_trajectory);
    return {hybrid > 0.0 && std::abs(ours) <= 0.1 * hybrid,
            fmt("HybridFL slope %.3e, FedAirAoI slope %.3e", hybrid, ours)};
}

Outcome selection_and_completion() {
    ExperimentConfig c;
    c.replications = 10;
    c.policies = {Policy::kFedAirAoI, Policy::kFedAvg, Policy::kHybridFL};
    const auto rows = compare_policies(c);
    const double ours_min = rows[0].min_selection_frequency.mean;
    const double hybrid_min = rows[2].min_selection_frequency.mean;
    const double ours_tc = rows[0].completion_time.mean;
    const double fedavg_tc = rows[1].completion_time.mean;
    return {ours_min > hybrid_min && ours_tc < fedavg_tc,
            fmt("min selection frequency %.4f vs HybridFL %.4f; ", ours_min, hybrid_min) +
                fmt("completion time %.4f vs FedAvg %.4f", ours_tc, fedavg_tc)};
}

Outcome gradient_check() {
    ExperimentConfig c;
    const Environment env = build_environment(c, 11, 10.0);
    const fl::SoftmaxModel model(env.task.train.num_features(), env.task.train.num_classes);
    Rng wr(3);
    std::normal_distribution<double> g(0.0, 0.2);
    Eigen::VectorXd w(static_cast<Eigen::Index>(model.dimension()));
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = g(wr);
    double worst = 0.0;
    for (std::size_t n = 0; n < 4; ++n) {
        const auto& shard = env.partition.shards[n];
        fl::TrainConfig cfg;
        cfg.local_iterations = 1;
        cfg.batch_size = shard.size();
        Rng rng(n);
        const auto res = fl::local_sgd(model, w, shard, cfg, rng);
        const auto fd = oracle::finite_difference([&](const Eigen::VectorXd& x) { return model.loss(x, shard); }, w);
        worst = std::max(worst, (res.update - fd).norm() / fd.norm());
    }
    return {worst <= 1e-5, fmt("max relative deviation %.3e", worst)};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    ExperimentConfig c;
    c.rounds = 100;
    const auto base = std::filesystem::temp_directory_path() / "airaoi_acceptance_determinism";
    std::filesystem::remove_all(base);
    for (const char* tag : {"a", "b"}) {
        write_run_outputs(base / tag, c, run_experiment(c, Policy::kFedAirAoI, 42, 10.0));
        ExperimentConfig s = c;
        s.train.enabled = false;
        s.replications = 2;
        s.snr_db = {0.0, 10.0};
        write_sweep_csv(base / tag / "sweep.csv", sweep_snr(s));
    }
    bool same = true;
    for (const char* f : {"rounds.csv", "paoi.csv", "power.csv", "summary.json", "sweep.csv"})
        if (slurp(base / "a" / f) != slurp(base / "b" / f) || slurp(base / "a" / f).empty()) same = false;
    std::filesystem::remove_all(base);
    return {same, same ? "all outputs byte-identical" : "outputs differ"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
        {"1 eta closed form vs grid search", eta_oracle},
        {"2 alpha case split vs convex solver", alpha_oracle},
        {"3 alternating optimizer monotone", alternating_monotone},
        {"4 greedy selection vs prefix enumeration", greedy_oracle},
        {"5 staircase non-decreasing", staircase_property},
        {"6 noiseless aligned pipeline equals federated averaging", aircomp_exactness},
        {"7 noise power identity and aggregation error bound", noise_identity},
        {"8 MSE decreasing in SNR with policy ordering", snr_sweep},
        {"9 EWS-PAoI last-quarter slopes", paoi_slopes},
        {"10 selection fairness and completion time", selection_and_completion},
        {"11 local update equals finite-difference gradient", gradient_check},
        {"12 byte-identical outputs", determinism},
    };
    int failures = 0;
    for (const auto& [name, fn] : checks) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(),
                    o.detail.c_str(), secs);
        if (!o.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(checks.size()) - failures, checks.size());
    return failures == 0 ? 0 : 1;
}
