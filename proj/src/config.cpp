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

#include "airaoi/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "airaoi/common.hpp"

namespace airaoi::harness {

using nlohmann::json;

namespace {

const std::vector<std::pair<Policy, std::string>> kPolicyNames = {
    {Policy::kFedAirAoI, "fedairaoi"},
    {Policy::kFullPower, "full_power"},
    {Policy::kChannelInversion, "channel_inversion"},
    {Policy::kFedAvg, "fedavg"},
    {Policy::kHybridFL, "hybridfl"},
};

// Walks one JSON object, remembering which keys were consumed so leftovers
// can be reported as errors.
class Section {
  public:
    Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    template <typename T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        if (!obj_.contains(key)) return;
        const json& v = obj_.at(key);
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) throw ConfigError("");
                out = v.get<bool>();
            } else if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<long long>() < 0))
                    throw ConfigError("");
                out = v.get<T>();
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!v.is_number()) throw ConfigError("");
                out = v.get<T>();
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) throw ConfigError("");
                out = v.get<std::string>();
            } else {
                if (!v.is_array()) throw ConfigError("");
                out = v.get<T>();
            }
        } catch (const std::exception&) {
            throw ConfigError(path_ + "." + key + ": wrong type");
        }
    }

    const json* child(const char* key) {
        seen_.insert(key);
        return obj_.contains(key) ? &obj_.at(key) : nullptr;
    }

    void finish() const {
        for (const auto& [k, v] : obj_.items())
            if (!seen_.count(k)) throw ConfigError(path_ + ": unknown key '" + k + "'");
    }

  private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

}  // namespace

std::string to_string(Policy policy) {
    for (const auto& [p, name] : kPolicyNames)
        if (p == policy) return name;
    return "unknown";
}

Policy parse_policy(const std::string& name) {
    for (const auto& [p, n] : kPolicyNames)
        if (n == name) return p;
    throw ConfigError("unknown policy '" + name + "'");
}

const std::vector<Policy>& all_policies() {
    static const std::vector<Policy> kAll = {Policy::kFedAirAoI, Policy::kFullPower,
                                             Policy::kChannelInversion, Policy::kFedAvg,
                                             Policy::kHybridFL};
    return kAll;
}

std::string to_string(PowerMode mode) {
    switch (mode) {
        case PowerMode::kOffline: return "offline";
        case PowerMode::kOnline: return "online";
        case PowerMode::kIdeal: return "ideal";
    }
    return "unknown";
}

PowerMode parse_power_mode(const std::string& name) {
    if (name == "offline") return PowerMode::kOffline;
    if (name == "online") return PowerMode::kOnline;
    if (name == "ideal") return PowerMode::kIdeal;
    throw ConfigError("unknown power mode '" + name + "'");
}

void ExperimentConfig::validate() const {
    require(devices >= 1, "devices must be >= 1");
    require(rounds >= 1, "rounds must be >= 1");
    require(replications >= 1, "replications must be >= 1");
    require(!snr_db.empty(), "snr_db must list at least one value");
    for (double s : snr_db) require(std::isfinite(s), "snr_db values must be finite");

    require(channel.frequency_correlation > 0.0, "channel.frequency_correlation must be > 0");
    require(channel.path_loss_exponent >= 0.0, "channel.path_loss_exponent must be >= 0");
    require(channel.noise_scale > 0.0, "channel.noise_scale must be > 0");
    require(channel.distances.empty() || channel.distances.size() == devices,
            "channel.distances must list one value per device");
    for (double r : channel.distances) require(r > 0.0, "channel.distances must be > 0");

    require(timing.cycles_per_sample > 0.0, "timing.cycles_per_sample must be > 0");
    require(timing.cpu_hz > 0.0, "timing.cpu_hz must be > 0");
    require(timing.cpu_spread >= 1.0, "timing.cpu_spread must be >= 1");
    require(timing.cpu_hz_per_device.empty() || timing.cpu_hz_per_device.size() == devices,
            "timing.cpu_hz_per_device must list one value per device");
    for (double c : timing.cpu_hz_per_device) require(c > 0.0, "timing.cpu_hz_per_device must be > 0");
    require(timing.bandwidth > 0.0, "timing.bandwidth must be > 0");
    require(timing.model_size > 0.0, "timing.model_size must be > 0");
    require(timing.tau_min > 0.0 && timing.tau_min <= 1.0, "timing.tau_min must lie in (0, 1]");

    require(power.avg_power > 0.0, "power.avg_power must be > 0");
    require(power.max_power_ratio >= 1.0, "power.max_power_ratio must be >= 1");
    require(power.epsilon0 > 0.0, "power.epsilon0 must be > 0");
    require(power.max_iterations >= 1, "power.max_iterations must be >= 1");
    require(power.online_step >= 0.0, "power.online_step must be >= 0");

    require(train.learning_rate > 0.0, "train.learning_rate must be > 0");
    require(train.local_iterations >= 1, "train.local_iterations must be >= 1");
    require(train.batch_size >= 1, "train.batch_size must be >= 1");

    require(data.source == "synthetic" || data.source == "file",
            "data.source must be 'synthetic' or 'file'");
    require(data.source != "file" || !data.path.empty(), "data.path required for file source");
    require(data.classes >= 2, "data.classes must be >= 2");
    require(data.features >= 1, "data.features must be >= 1");
    require(data.train_per_class >= 1, "data.train_per_class must be >= 1");
    require(data.separation >= 0.0, "data.separation must be >= 0");
    require(data.classes_per_device.empty() || data.classes_per_device.size() == devices,
            "data.classes_per_device must list one value per device");
    for (int m : data.classes_per_device) require(m >= 1, "data.classes_per_device must be >= 1");

    require(baselines.k_fixed <= devices, "baselines.k_fixed must be <= devices");
    require(baselines.deadline >= 0.0, "baselines.deadline must be >= 0");

    for (double v : {bound.smoothness, bound.gradient_noise, bound.heterogeneity,
                     bound.element_variance_cap, bound.gradient_norm_cap, bound.initial_gap})
        require(std::isfinite(v) && v >= 0.0, "bound constants must be finite and >= 0");
}

std::vector<Policy> ExperimentConfig::policy_set() const {
    return policies.empty() ? all_policies() : policies;
}

fl::TrainConfig ExperimentConfig::train_config() const {
    fl::TrainConfig c;
    c.learning_rate = train.learning_rate;
    c.local_iterations = train.local_iterations;
    c.batch_size = train.batch_size;
    c.rounds = rounds;
    return c;
}

std::vector<int> ExperimentConfig::class_schedule() const {
    if (!data.classes_per_device.empty()) return data.classes_per_device;
    std::vector<int> m(devices);
    for (std::size_t n = 0; n < devices; ++n) m[n] = std::min(2 + static_cast<int>(n % 3), data.classes);
    return m;
}

std::vector<double> ExperimentConfig::cpu_profile() const {
    if (!timing.cpu_hz_per_device.empty()) return timing.cpu_hz_per_device;
    std::vector<double> c(devices, timing.cpu_hz);
    if (devices < 2) return c;
    for (std::size_t n = 0; n < devices; ++n) {
        const double pos = 0.5 - static_cast<double>(n) / static_cast<double>(devices - 1);
        c[n] = timing.cpu_hz * std::pow(timing.cpu_spread, pos);
    }
    return c;
}

std::vector<double> ExperimentConfig::distances() const {
    return channel.distances.empty() ? std::vector<double>(devices, 1.0) : channel.distances;
}

ExperimentConfig config_from_json(const json& doc) {
    ExperimentConfig c;
    Section top(doc, "config");
    top.read("devices", c.devices);
    top.read("rounds", c.rounds);
    if (const json* s = top.child("snr_db")) {
        if (s->is_number()) {
            c.snr_db = {s->get<double>()};
        } else if (s->is_array()) {
            c.snr_db.clear();
            for (const auto& v : *s) {
                if (!v.is_number()) throw ConfigError("config.snr_db: wrong type");
                c.snr_db.push_back(v.get<double>());
            }
        } else {
            throw ConfigError("config.snr_db: wrong type");
        }
    }
    std::string policy = to_string(c.policy);
    top.read("policy", policy);
    c.policy = parse_policy(policy);
    std::vector<std::string> policies;
    top.read("policies", policies);
    for (const auto& p : policies) c.policies.push_back(parse_policy(p));
    top.read("master_seed", c.master_seed);
    top.read("replications", c.replications);

    if (const json* j = top.child("channel")) {
        Section s(*j, "channel");
        s.read("frequency_correlation", c.channel.frequency_correlation);
        s.read("path_loss_exponent", c.channel.path_loss_exponent);
        s.read("noise_scale", c.channel.noise_scale);
        s.read("distances", c.channel.distances);
        s.finish();
    }
    if (const json* j = top.child("timing")) {
        Section s(*j, "timing");
        s.read("cycles_per_sample", c.timing.cycles_per_sample);
        s.read("cpu_hz", c.timing.cpu_hz);
        s.read("cpu_spread", c.timing.cpu_spread);
        s.read("cpu_hz_per_device", c.timing.cpu_hz_per_device);
        s.read("bandwidth", c.timing.bandwidth);
        s.read("model_size", c.timing.model_size);
        s.read("tau_min", c.timing.tau_min);
        s.finish();
    }
    if (const json* j = top.child("power")) {
        Section s(*j, "power");
        s.read("avg_power", c.power.avg_power);
        s.read("max_power_ratio", c.power.max_power_ratio);
        std::string mode = to_string(c.power.mode);
        s.read("mode", mode);
        c.power.mode = parse_power_mode(mode);
        s.read("epsilon0", c.power.epsilon0);
        s.read("max_iterations", c.power.max_iterations);
        s.read("online_step", c.power.online_step);
        s.finish();
    }
    if (const json* j = top.child("train")) {
        Section s(*j, "train");
        s.read("enabled", c.train.enabled);
        s.read("learning_rate", c.train.learning_rate);
        s.read("local_iterations", c.train.local_iterations);
        s.read("batch_size", c.train.batch_size);
        s.finish();
    }
    if (const json* j = top.child("data")) {
        Section s(*j, "data");
        s.read("source", c.data.source);
        s.read("path", c.data.path);
        s.read("test_path", c.data.test_path);
        s.read("classes", c.data.classes);
        s.read("features", c.data.features);
        s.read("train_per_class", c.data.train_per_class);
        s.read("test_per_class", c.data.test_per_class);
        s.read("separation", c.data.separation);
        s.read("classes_per_device", c.data.classes_per_device);
        s.finish();
    }
    if (const json* j = top.child("baselines")) {
        Section s(*j, "baselines");
        s.read("k_fixed", c.baselines.k_fixed);
        s.read("deadline", c.baselines.deadline);
        s.finish();
    }
    if (const json* j = top.child("bound")) {
        Section s(*j, "bound");
        s.read("enabled", c.bound.enabled);
        s.read("smoothness", c.bound.smoothness);
        s.read("gradient_noise", c.bound.gradient_noise);
        s.read("heterogeneity", c.bound.heterogeneity);
        s.read("element_variance_cap", c.bound.element_variance_cap);
        s.read("gradient_norm_cap", c.bound.gradient_norm_cap);
        s.read("initial_gap", c.bound.initial_gap);
        s.read("estimate_from_run", c.bound.estimate_from_run);
        s.read("rescale_for_weights", c.bound.rescale_for_weights);
        s.finish();
    }
    top.finish();
    c.validate();
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["devices"] = c.devices;
    j["rounds"] = c.rounds;
    j["snr_db"] = c.snr_db;
    j["policy"] = to_string(c.policy);
    json pol = json::array();
    for (Policy p : c.policies) pol.push_back(to_string(p));
    j["policies"] = pol;
    j["master_seed"] = c.master_seed;
    j["replications"] = c.replications;
    j["channel"] = {{"frequency_correlation", c.channel.frequency_correlation},
                    {"path_loss_exponent", c.channel.path_loss_exponent},
                    {"noise_scale", c.channel.noise_scale},
                    {"distances", c.channel.distances}};
    j["timing"] = {{"cycles_per_sample", c.timing.cycles_per_sample},
                   {"cpu_hz", c.timing.cpu_hz},
                   {"cpu_spread", c.timing.cpu_spread},
                   {"cpu_hz_per_device", c.timing.cpu_hz_per_device},
                   {"bandwidth", c.timing.bandwidth},
                   {"model_size", c.timing.model_size},
                   {"tau_min", c.timing.tau_min}};
    j["power"] = {{"avg_power", c.power.avg_power},
                  {"max_power_ratio", c.power.max_power_ratio},
                  {"mode", to_string(c.power.mode)},
                  {"epsilon0", c.power.epsilon0},
                  {"max_iterations", c.power.max_iterations},
                  {"online_step", c.power.online_step}};
    j["train"] = {{"enabled", c.train.enabled},
                  {"learning_rate", c.train.learning_rate},
                  {"local_iterations", c.train.local_iterations},
                  {"batch_size", c.train.batch_size}};
    j["data"] = {{"source", c.data.source},
                 {"path", c.data.path},
                 {"test_path", c.data.test_path},
                 {"classes", c.data.classes},
                 {"features", c.data.features},
                 {"train_per_class", c.data.train_per_class},
                 {"test_per_class", c.data.test_per_class},
                 {"separation", c.data.separation},
                 {"classes_per_device", c.data.classes_per_device}};
    j["baselines"] = {{"k_fixed", c.baselines.k_fixed}, {"deadline", c.baselines.deadline}};
    j["bound"] = {{"enabled", c.bound.enabled},
                  {"smoothness", c.bound.smoothness},
                  {"gradient_noise", c.bound.gradient_noise},
                  {"heterogeneity", c.bound.heterogeneity},
                  {"element_variance_cap", c.bound.element_variance_cap},
                  {"gradient_norm_cap", c.bound.gradient_norm_cap},
                  {"initial_gap", c.bound.initial_gap},
                  {"estimate_from_run", c.bound.estimate_from_run},
                  {"rescale_for_weights", c.bound.rescale_for_weights}};
    return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(doc);
}

}  // namespace airaoi::harness
