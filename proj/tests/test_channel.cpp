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

#include <cmath>

#include "airaoi/channel.hpp"

using namespace airaoi;
using namespace airaoi::channel;

namespace {
ChannelParams unit_params(std::size_t n) {
    ChannelParams p;
    p.distances.assign(n, 1.0);
    return p;
}
}  // namespace

TEST(Channel, SmallScaleHasUnitPowerAndZeroMean) {
    Rng rng(11);
    const int draws = 200000;
    double power = 0.0;
    Complex mean{0.0, 0.0};
    double re2 = 0.0;
    double im2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const Complex v = sample_small_scale(rng);
        power += std::norm(v);
        mean += v;
        re2 += v.real() * v.real();
        im2 += v.imag() * v.imag();
    }
    EXPECT_NEAR(power / draws, 1.0, 0.01);
    EXPECT_NEAR(std::abs(mean / static_cast<double>(draws)), 0.0, 0.01);
    EXPECT_NEAR(re2 / draws, 0.5, 0.01);
    EXPECT_NEAR(im2 / draws, 0.5, 0.01);
}

TEST(Channel, GainIsExponentialWithUnitMean) {
    // |v|² ~ Exp(1): P(|v|² > 1) = e^-1.
    Rng rng(5);
    const int draws = 200000;
    int above = 0;
    for (int i = 0; i < draws; ++i)
        if (std::norm(sample_small_scale(rng)) > 1.0) ++above;
    EXPECT_NEAR(static_cast<double>(above) / draws, std::exp(-1.0), 0.005);
}

TEST(Channel, LargeScaleFactorFollowsPathLoss) {
    ChannelParams p;
    p.frequency_correlation = 2.0;
    p.path_loss_exponent = 3.0;
    p.noise_scale = 0.5;
    p.distances = {1.0, 2.0};
    EXPECT_DOUBLE_EQ(large_scale_factor(p, 0), 2.0 / 0.25);
    EXPECT_DOUBLE_EQ(large_scale_factor(p, 1), 2.0 / 8.0 / 0.25);
    EXPECT_DOUBLE_EQ(channel_gain({1.0, 1.0}, p, 1), 2.0 * (2.0 / 8.0 / 0.25));
}

TEST(Channel, RealizationGainsMatchCoefficients) {
    auto p = unit_params(4);
    p.distances[2] = 3.0;
    Rng rng(3);
    const auto r = realize_round(p, 4, 9, rng);
    ASSERT_EQ(r.size(), 4u);
    EXPECT_EQ(r.round, 9u);
    for (std::size_t n = 0; n < 4; ++n) EXPECT_NEAR(r.gains[n], std::norm(r.coefficients[n]), 1e-15);
}

TEST(Channel, RealizationIsReplayable) {
    const auto p = unit_params(5);
    Rng a(77);
    Rng b(77);
    const auto ra = realize_round(p, 5, 0, a);
    const auto rb = realize_round(p, 5, 0, b);
    EXPECT_EQ(ra.gains, rb.gains);
}

TEST(Channel, SnrConversion) {
    EXPECT_DOUBLE_EQ(noise_variance_from_snr(1.0, 0.0), 1.0);
    EXPECT_NEAR(noise_variance_from_snr(1.0, 10.0), 0.1, 1e-15);
    EXPECT_NEAR(noise_variance_from_snr(2.0, 20.0), 0.02, 1e-15);
    EXPECT_THROW(noise_variance_from_snr(0.0, 10.0), std::domain_error);
}

TEST(Channel, ValidationRejectsBadParams) {
    ChannelParams p = unit_params(2);
    p.distances[1] = 0.0;
    EXPECT_THROW(p.validate(), std::domain_error);
    p = unit_params(2);
    p.noise_scale = 0.0;
    EXPECT_THROW(p.validate(), std::domain_error);
    Rng rng(1);
    EXPECT_THROW(realize_round(unit_params(2), 0, 0, rng), std::invalid_argument);
    EXPECT_THROW(realize_round(unit_params(2), 3, 0, rng), std::out_of_range);
}

TEST(Channel, NoiseModelValidation) {
    NoiseModel m;
    m.avg_power = {1.0};
    m.max_power = {3.0};
    EXPECT_NO_THROW(m.validate());
    m.max_power = {0.5};
    EXPECT_THROW(m.validate(), std::domain_error);
    m.max_power = {3.0};
    m.variance = 0.0;
    EXPECT_THROW(m.validate(), std::domain_error);
}
