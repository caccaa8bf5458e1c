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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "airaoi/common.hpp"
#include "airaoi/config.hpp"
#include "airaoi/diagnostics.hpp"
#include "airaoi/report.hpp"
#include "airaoi/simulation.hpp"

using namespace airaoi;
using namespace airaoi::harness;

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::size_t> devices;
    std::optional<std::size_t> rounds;
    std::vector<double> snr_db;
    std::string policy;
    std::vector<std::string> policies;
    std::optional<std::uint64_t> master_seed;
    std::optional<std::size_t> replications;
    std::string power_mode;
    bool no_train = false;
    std::optional<double> learning_rate;
    std::optional<std::size_t> local_iterations;
    std::string data_path;
    std::string test_path;
};

void add_common(CLI::App& cmd, Overrides& o) {
    cmd.add_option("-c,--config", o.config_path, "JSON config file (defaults when omitted)");
    cmd.add_option("--devices", o.devices, "Number of devices N");
    cmd.add_option("--rounds", o.rounds, "Number of rounds T");
    cmd.add_option("--snr", o.snr_db, "Average receive SNR values in dB");
    cmd.add_option("--power-mode", o.power_mode, "offline | online | ideal");
    cmd.add_flag("--no-train", o.no_train, "Skip local training and aggregation");
    cmd.add_option("--lr", o.learning_rate, "Learning rate");
    cmd.add_option("--local-iterations", o.local_iterations, "Local SGD steps per round");
    cmd.add_option("--data", o.data_path, "Columnar training file (switches data.source to file)");
    cmd.add_option("--test-data", o.test_path, "Columnar test file");
}

ExperimentConfig resolve(const Overrides& o) {
    ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
    if (o.devices) c.devices = *o.devices;
    if (o.rounds) c.rounds = *o.rounds;
    if (!o.snr_db.empty()) c.snr_db = o.snr_db;
    if (!o.policy.empty()) c.policy = parse_policy(o.policy);
    if (!o.policies.empty()) {
        c.policies.clear();
        for (const auto& p : o.policies) c.policies.push_back(parse_policy(p));
    }
    if (o.master_seed) c.master_seed = *o.master_seed;
    if (o.replications) c.replications = *o.replications;
    if (!o.power_mode.empty()) c.power.mode = parse_power_mode(o.power_mode);
    if (o.no_train) c.train.enabled = false;
    if (o.learning_rate) c.train.learning_rate = *o.learning_rate;
    if (o.local_iterations) c.train.local_iterations = *o.local_iterations;
    if (!o.data_path.empty()) {
        c.data.source = "file";
        c.data.path = o.data_path;
    }
    if (!o.test_path.empty()) c.data.test_path = o.test_path;
    c.validate();
    return c;
}

int cmd_run(const Overrides& o, std::uint64_t seed, const std::string& out_dir) {
    const ExperimentConfig c = resolve(o);
    const auto res = run_experiment(c, c.policy, seed, c.snr_db.front());
    write_run_outputs(out_dir, c, res);
    const auto& s = res.summary;
    std::cout << "policy=" << to_string(res.policy) << " seed=" << seed
              << " ews_paoi=" << format_double(s.ews_paoi)
              << " time_average_mse=" << format_double(s.time_average_mse)
              << " average_completion_time=" << format_double(s.average_completion_time)
              << " final_accuracy=" << format_double(s.final_accuracy) << " audit="
              << (s.audit_passed ? "pass" : "FAIL") << '\n';
    return s.audit_passed ? 0 : 1;
}

int cmd_sweep(const Overrides& o, const std::string& out_dir) {
    const ExperimentConfig c = resolve(o);
    const auto rows = sweep_snr(c);
    write_sweep_csv(std::filesystem::path(out_dir) / "sweep.csv", rows);
    for (const auto& r : rows)
        std::cout << to_string(r.policy) << " snr=" << format_double(r.snr_db)
                  << " mse=" << format_double(r.mse.mean) << " +- " << format_double(r.mse.stderr_)
                  << '\n';
    return 0;
}

int cmd_compare(const Overrides& o, const std::string& out_dir) {
    const ExperimentConfig c = resolve(o);
    const auto rows = compare_policies(c);
    write_compare_outputs(out_dir, rows);
    for (const auto& r : rows)
        std::cout << to_string(r.policy) << " ews_paoi=" << format_double(r.ews_paoi.mean)
                  << " completion_time=" << format_double(r.completion_time.mean)
                  << " relative_completion_time=" << format_double(r.relative_completion_time)
                  << " min_selection_frequency=" << format_double(r.min_selection_frequency.mean)
                  << " final_accuracy=" << format_double(r.final_accuracy.mean) << '\n';
    return 0;
}

struct BoundArgs {
    std::optional<std::size_t> selected;
    std::optional<std::size_t> dimension;
    double mse = 0.0;
    double weight_skew = 1.0;
};

int cmd_bound(const Overrides& o, const BoundArgs& b) {
    const ExperimentConfig c = resolve(o);
    diagnostics::BoundParams p;
    p.smoothness = c.bound.smoothness;
    p.gradient_noise = c.bound.gradient_noise;
    p.heterogeneity = c.bound.heterogeneity;
    p.element_variance_cap = c.bound.element_variance_cap;
    p.gradient_norm_cap = c.bound.gradient_norm_cap;
    p.initial_gap = c.bound.initial_gap;
    p.devices = c.devices;
    p.selected = b.selected.value_or(c.devices);
    p.dimension = b.dimension.value_or((c.data.features + 1) * static_cast<std::size_t>(c.data.classes));
    p.rounds = c.rounds;
    p.learning_rate = c.train.learning_rate;
    p.local_iterations = c.train.local_iterations;
    p.mse_trace = {b.mse};
    p.weight_skew = b.weight_skew;
    const auto r = diagnostics::convergence_bound(p, c.bound.rescale_for_weights);
    std::cout << bound_to_json(r).dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Age-aware device selection and power control for over-the-air federated learning"};
    app.require_subcommand(1);

    Overrides o;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    BoundArgs b;

    auto* run = app.add_subcommand("run", "Single experiment");
    add_common(*run, o);
    run->add_option("--seed", seed, "Experiment seed")->required();
    run->add_option("--policy", o.policy, "fedairaoi | full_power | channel_inversion | fedavg | hybridfl");
    run->add_option("-o,--out", out_dir, "Output directory");

    auto* sweep = app.add_subcommand("sweep", "Time-average MSE over an SNR and policy grid");
    add_common(*sweep, o);
    sweep->add_option("--seed", o.master_seed, "Master seed");
    sweep->add_option("--replications", o.replications, "Seeds per cell");
    sweep->add_option("--policies", o.policies, "Policies to include");
    sweep->add_option("-o,--out", out_dir, "Output directory");

    auto* compare = app.add_subcommand("compare", "Paired-seed policy comparison");
    add_common(*compare, o);
    compare->add_option("--seed", o.master_seed, "Master seed");
    compare->add_option("--replications", o.replications, "Paired seeds");
    compare->add_option("--policies", o.policies, "Policies to include");
    compare->add_option("-o,--out", out_dir, "Output directory");

    auto* bound = app.add_subcommand("bound", "Convergence bound calculator");
    add_common(*bound, o);
    bound->add_option("--selected", b.selected, "Devices per round K");
    bound->add_option("--dimension", b.dimension, "Model dimension d");
    bound->add_option("--mse", b.mse, "Time-average MSE");
    bound->add_option("--weight-skew", b.weight_skew, "N max q_n");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(o, seed, out_dir);
        if (*sweep) return cmd_sweep(o, out_dir);
        if (*compare) return cmd_compare(o, out_dir);
        if (*bound) return cmd_bound(o, b);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
