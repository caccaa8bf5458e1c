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

#include <gtest/gtest.h>

#include "airaoi/common.hpp"
#include "airaoi/config.hpp"

using namespace airaoi;
using namespace airaoi::harness;
using nlohmann::json;

TEST(Config, DefaultsValidate) {
    ExperimentConfig c;
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.devices, 20u);
    EXPECT_EQ(c.policy_set().size(), 5u);
}

TEST(Config, RoundTripThroughJson) {
    ExperimentConfig c;
    c.devices = 7;
    c.snr_db = {0.0, 5.0};
    c.policy = Policy::kHybridFL;
    c.power.mode = PowerMode::kOnline;
    c.data.classes_per_device = {2, 3, 2, 2, 3, 2, 2};
    const auto back = config_from_json(config_to_json(c));
    EXPECT_EQ(config_to_json(back), config_to_json(c));
}

TEST(Config, UnknownKeysAreErrors) {
    EXPECT_THROW(config_from_json(json{{"devicez", 3}}), ConfigError);
    EXPECT_THROW(config_from_json(json{{"power", {{"mode", "offline"}, {"extra", 1}}}}), ConfigError);
}

TEST(Config, WrongTypesAreErrors) {
    EXPECT_THROW(config_from_json(json{{"devices", "many"}}), ConfigError);
    EXPECT_THROW(config_from_json(json{{"devices", -2}}), ConfigError);
    EXPECT_THROW(config_from_json(json{{"train", {{"enabled", 1}}}}), ConfigError);
}

TEST(Config, ScalarSnrAccepted) {
    const auto c = config_from_json(json{{"snr_db", 15}});
    EXPECT_EQ(c.snr_db, std::vector<double>{15.0});
}

TEST(Config, EnumsParse) {
    EXPECT_EQ(parse_policy("channel_inversion"), Policy::kChannelInversion);
    EXPECT_EQ(parse_power_mode("ideal"), PowerMode::kIdeal);
    EXPECT_THROW(parse_policy("random"), ConfigError);
    EXPECT_THROW(parse_power_mode("greedy"), ConfigError);
    for (auto p : all_policies()) EXPECT_EQ(parse_policy(to_string(p)), p);
}

TEST(Config, ValidationCatchesBadValues) {
    ExperimentConfig c;
    c.devices = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.replications = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.power.max_power_ratio = 0.5;
    EXPECT_THROW(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.data.classes_per_device = {2, 2};
    EXPECT_THROW(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.timing.tau_min = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, DerivedProfiles) {
    ExperimentConfig c;
    c.devices = 3;
    const auto cpu = c.cpu_profile();
    ASSERT_EQ(cpu.size(), 3u);
    EXPECT_NEAR(cpu[0], 0.5e9 * 2.0, 1.0);
    EXPECT_NEAR(cpu[1], 0.5e9, 1.0);
    EXPECT_NEAR(cpu[2], 0.5e9 / 2.0, 1.0);
    EXPECT_EQ(c.class_schedule(), (std::vector<int>{2, 3, 4}));
    EXPECT_EQ(c.distances(), (std::vector<double>{1.0, 1.0, 1.0}));
}

TEST(Config, MissingFileIsConfigError) {
    EXPECT_THROW(load_config("/nonexistent/airaoi.json"), ConfigError);
}
