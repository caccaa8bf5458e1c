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

#include "airaoi/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace airaoi::harness {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::string join_ids(const std::vector<std::size_t>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(ids[i]);
    }
    return s;
}

void write_stat(std::ostream& out, const Stat& s) {
    out << ',' << format_double(s.mean) << ',' << format_double(s.stderr_);
}

void accumulate_into(std::vector<double>& acc, const std::vector<double>& v) {
    if (acc.empty()) acc.assign(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
}

void scale(std::vector<double>& v, double factor) {
    for (double& x : v) x *= factor;
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

Stat describe(const std::vector<double>& values) {
    Stat s;
    s.count = values.size();
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return s;
}

double linear_slope(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    const double xm = 0.5 * static_cast<double>(n - 1);
    const double ym = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - xm;
        sxy += dx * (values[i] - ym);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

MetricsReport metrics_report(const std::vector<RoundRecord>& records, std::size_t devices) {
    MetricsReport m;
    m.selection_frequency.assign(devices, 0.0);
    double running = 0.0;
    for (std::size_t t = 0; t < records.size(); ++t) {
        const auto& r = records[t];
        running += r.ws_paoi;
        m.ews_paoi_trajectory.push_back(running / static_cast<double>(t + 1));
        for (std::size_t d : r.selected) m.selection_frequency[d] += 1.0;
        m.mean_participation += static_cast<double>(r.selected.size());
        m.average_completion_time += r.completion_time;
        m.loss_curve.push_back(r.train_loss);
        m.accuracy_curve.push_back(r.test_accuracy);
    }
    if (!records.empty()) {
        const double t = static_cast<double>(records.size());
        scale(m.selection_frequency, 1.0 / t);
        m.mean_participation /= t;
        m.average_completion_time /= t;
        const std::size_t start = records.size() - std::max<std::size_t>(2, records.size() / 4);
        const std::vector<double> tail(m.ews_paoi_trajectory.begin() + static_cast<std::ptrdiff_t>(
                                                                           std::min(start, records.size())),
                                       m.ews_paoi_trajectory.end());
        m.last_quarter_slope = linear_slope(tail);
    }
    m.selection_frequency_sum =
        std::accumulate(m.selection_frequency.begin(), m.selection_frequency.end(), 0.0);
    return m;
}

std::map<Policy, double> relative_completion_time(const std::map<Policy, double>& average_completion) {
    std::map<Policy, double> out;
    const auto ref = average_completion.find(Policy::kFedAvg);
    if (ref == average_completion.end() || !(ref->second > 0.0)) return out;
    for (const auto& [p, v] : average_completion) out[p] = v / ref->second;
    return out;
}

nlohmann::json bound_to_json(const diagnostics::BoundReport& r) {
    return {{"initial_gap", r.initial_gap},
            {"gradient_variance", r.gradient_variance},
            {"divergence_participation", r.divergence_participation},
            {"time_average_mse", r.time_average_mse},
            {"gradient_norm", r.gradient_norm},
            {"total", r.total},
            {"denominator", r.denominator},
            {"denominator_nonpositive", r.denominator_nonpositive},
            {"learning_rate_limit", r.learning_rate_limit},
            {"learning_rate_violation", r.learning_rate_violation},
            {"mean_mse", r.mean_mse},
            {"rescaled", r.rescaled}};
}

nlohmann::json summary_to_json(const ExperimentConfig& config, const RunResult& run) {
    const auto& s = run.summary;
    const auto m = metrics_report(run.records, config.devices);
    nlohmann::json j;
    j["policy"] = to_string(run.policy);
    j["seed"] = run.seed;
    j["snr_db"] = run.snr_db;
    j["k_fixed"] = run.k_fixed;
    j["deadline"] = run.deadline;
    j["weights_q"] = run.weights_q;
    j["metrics"] = {{"ews_paoi", s.ews_paoi},
                    {"time_average_mse", s.time_average_mse},
                    {"average_completion_time", s.average_completion_time},
                    {"mean_participation", s.mean_participation},
                    {"mean_k_opt", s.mean_k_opt},
                    {"selection_frequency", s.selection_frequency},
                    {"min_selection_frequency", s.min_selection_frequency},
                    {"skipped_rounds", s.skipped_rounds},
                    {"initial_loss", s.initial_loss},
                    {"final_loss", s.final_loss},
                    {"final_accuracy", s.final_accuracy},
                    {"power_iterations", s.power_iterations},
                    {"max_power_excess", s.max_power_excess},
                    {"max_element_variance", s.max_element_variance},
                    {"ews_paoi_last_quarter_slope", m.last_quarter_slope}};
    j["audit_passed"] = s.audit_passed;
    j["bound"] = run.bound ? bound_to_json(*run.bound) : nlohmann::json(nullptr);
    j["config"] = config_to_json(config);
    return j;
}

void write_run_outputs(const std::filesystem::path& dir, const ExperimentConfig& config,
                       const RunResult& run) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_output(dir / "rounds.csv");
        out << "round,k_opt,num_selected,skipped,completion_time,predicted_ws_paoi,ws_paoi,"
               "ws_paoi_next,ews_paoi,mse,mse_misalignment,mse_noise,eta,train_loss,test_accuracy,"
               "aggregation_error,weighting_bias,selected\n";
        double running = 0.0;
        for (const auto& r : run.records) {
            running += r.ws_paoi;
            out << r.round << ',' << r.k_opt << ',' << r.selected.size() << ',' << (r.skipped ? 1 : 0)
                << ',' << format_double(r.completion_time) << ',' << format_double(r.predicted_ws_paoi)
                << ',' << format_double(r.ws_paoi) << ',' << format_double(r.ws_paoi_next) << ','
                << format_double(running / static_cast<double>(r.round + 1)) << ','
                << format_double(r.mse) << ',' << format_double(r.mse_misalignment) << ','
                << format_double(r.mse_noise) << ',' << format_double(r.eta) << ','
                << format_double(r.train_loss) << ',' << format_double(r.test_accuracy) << ','
                << format_double(r.aggregation_error) << ',' << format_double(r.weighting_bias) << ','
                << join_ids(r.selected) << '\n';
        }
    }
    {
        auto out = open_output(dir / "paoi.csv");
        out << "round";
        for (std::size_t n = 0; n < config.devices; ++n) out << ",device_" << n;
        out << '\n';
        for (const auto& r : run.records) {
            out << r.round;
            for (double a : r.paoi) out << ',' << format_double(a);
            out << '\n';
        }
    }
    {
        const double pmax = config.power.avg_power * config.power.max_power_ratio;
        auto out = open_output(dir / "power.csv");
        out << "round,device,gain,alpha,transmit_power,active,eta\n";
        for (const auto& r : run.records) {
            for (std::size_t i = 0; i < r.selected.size(); ++i) {
                out << r.round << ',' << r.selected[i] << ',' << format_double(r.gains[i]) << ','
                    << format_double(r.alpha[i]) << ',' << format_double(r.alpha[i] * pmax) << ','
                    << static_cast<int>(r.active[i]) << ',' << format_double(r.eta) << '\n';
            }
        }
    }
    {
        auto out = open_output(dir / "summary.json");
        out << summary_to_json(config, run).dump(2) << '\n';
    }
}

std::vector<SweepRow> sweep_snr(const ExperimentConfig& config) {
    config.validate();
    if (config.snr_db.empty()) throw ConfigError("snr_db must not be empty");
    const auto policies = config.policy_set();
    // rows[p][s]
    std::vector<std::vector<SweepRow>> grid(policies.size(), std::vector<SweepRow>(config.snr_db.size()));
    std::vector<std::vector<std::vector<double>>> ews(policies.size(),
                                                      std::vector<std::vector<double>>(config.snr_db.size()));
    auto completion = ews;
    for (std::size_t r = 0; r < config.replications; ++r) {
        const std::uint64_t seed = replication_seed(config.master_seed, r);
        for (std::size_t s = 0; s < config.snr_db.size(); ++s) {
            const Environment env = build_environment(config, seed, config.snr_db[s]);
            for (std::size_t p = 0; p < policies.size(); ++p) {
                Simulator sim(config, env, policies[p]);
                const auto res = sim.finish();
                grid[p][s].per_seed_mse.push_back(res.summary.time_average_mse);
                ews[p][s].push_back(res.summary.ews_paoi);
                completion[p][s].push_back(res.summary.average_completion_time);
            }
        }
    }
    std::vector<SweepRow> rows;
    for (std::size_t p = 0; p < policies.size(); ++p) {
        for (std::size_t s = 0; s < config.snr_db.size(); ++s) {
            SweepRow row = std::move(grid[p][s]);
            row.policy = policies[p];
            row.snr_db = config.snr_db[s];
            row.mse = describe(row.per_seed_mse);
            row.ews_paoi = describe(ews[p][s]);
            row.completion_time = describe(completion[p][s]);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
    auto out = open_output(path);
    out << "policy,snr_db,replications,mse_mean,mse_stderr,ews_paoi_mean,ews_paoi_stderr,"
           "completion_time_mean,completion_time_stderr\n";
    for (const auto& r : rows) {
        out << to_string(r.policy) << ',' << format_double(r.snr_db) << ',' << r.mse.count;
        write_stat(out, r.mse);
        write_stat(out, r.ews_paoi);
        write_stat(out, r.completion_time);
        out << '\n';
    }
}

std::vector<CompareRow> compare_policies(const ExperimentConfig& config) {
    config.validate();
    const auto policies = config.policy_set();
    const double snr = config.snr_db.front();
    std::vector<CompareRow> rows(policies.size());
    std::vector<std::vector<double>> ews(policies.size()), mse(policies.size()), tc(policies.size()),
        minf(policies.size()), part(policies.size()), loss(policies.size()), acc(policies.size());
    for (std::size_t r = 0; r < config.replications; ++r) {
        const std::uint64_t seed = replication_seed(config.master_seed, r);
        const Environment env = build_environment(config, seed, snr);
        for (std::size_t p = 0; p < policies.size(); ++p) {
            Simulator sim(config, env, policies[p]);
            const auto res = sim.finish();
            const auto m = metrics_report(res.records, config.devices);
            auto& row = rows[p];
            accumulate_into(row.ews_paoi_trajectory, m.ews_paoi_trajectory);
            accumulate_into(row.selection_frequency, m.selection_frequency);
            accumulate_into(row.loss_curve, m.loss_curve);
            accumulate_into(row.accuracy_curve, m.accuracy_curve);
            ews[p].push_back(res.summary.ews_paoi);
            mse[p].push_back(res.summary.time_average_mse);
            tc[p].push_back(res.summary.average_completion_time);
            minf[p].push_back(res.summary.min_selection_frequency);
            part[p].push_back(res.summary.mean_participation);
            loss[p].push_back(res.summary.final_loss);
            acc[p].push_back(res.summary.final_accuracy);
            row.replications.push_back(res.summary);
        }
    }
    std::map<Policy, double> avg_tc;
    const double inv = 1.0 / static_cast<double>(config.replications);
    for (std::size_t p = 0; p < policies.size(); ++p) {
        auto& row = rows[p];
        row.policy = policies[p];
        scale(row.ews_paoi_trajectory, inv);
        scale(row.selection_frequency, inv);
        scale(row.loss_curve, inv);
        scale(row.accuracy_curve, inv);
        row.ews_paoi = describe(ews[p]);
        row.mse = describe(mse[p]);
        row.completion_time = describe(tc[p]);
        row.min_selection_frequency = describe(minf[p]);
        row.participation = describe(part[p]);
        row.final_loss = describe(loss[p]);
        row.final_accuracy = describe(acc[p]);
        avg_tc[row.policy] = row.completion_time.mean;
    }
    const auto rel = relative_completion_time(avg_tc);
    for (auto& row : rows) {
        const auto it = rel.find(row.policy);
        row.relative_completion_time = it == rel.end() ? std::nan("") : it->second;
    }
    return rows;
}

void write_compare_outputs(const std::filesystem::path& dir, const std::vector<CompareRow>& rows) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_output(dir / "compare_summary.csv");
        out << "policy,replications,ews_paoi_mean,ews_paoi_stderr,mse_mean,mse_stderr,"
               "completion_time_mean,completion_time_stderr,relative_completion_time,"
               "min_selection_frequency_mean,min_selection_frequency_stderr,participation_mean,"
               "participation_stderr,final_loss_mean,final_loss_stderr,final_accuracy_mean,"
               "final_accuracy_stderr\n";
        for (const auto& r : rows) {
            out << to_string(r.policy) << ',' << r.ews_paoi.count;
            write_stat(out, r.ews_paoi);
            write_stat(out, r.mse);
            write_stat(out, r.completion_time);
            out << ',' << format_double(r.relative_completion_time);
            write_stat(out, r.min_selection_frequency);
            write_stat(out, r.participation);
            write_stat(out, r.final_loss);
            write_stat(out, r.final_accuracy);
            out << '\n';
        }
    }
    {
        auto out = open_output(dir / "compare_rounds.csv");
        out << "policy,round,ews_paoi,train_loss,test_accuracy\n";
        for (const auto& r : rows)
            for (std::size_t t = 0; t < r.ews_paoi_trajectory.size(); ++t)
                out << to_string(r.policy) << ',' << t << ',' << format_double(r.ews_paoi_trajectory[t])
                    << ',' << format_double(r.loss_curve[t]) << ',' << format_double(r.accuracy_curve[t])
                    << '\n';
    }
    {
        auto out = open_output(dir / "compare_devices.csv");
        out << "policy,device,selection_frequency\n";
        for (const auto& r : rows)
            for (std::size_t n = 0; n < r.selection_frequency.size(); ++n)
                out << to_string(r.policy) << ',' << n << ',' << format_double(r.selection_frequency[n])
                    << '\n';
    }
}

}  // namespace airaoi::harness
