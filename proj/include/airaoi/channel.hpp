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

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "airaoi/common.hpp"

namespace airaoi::channel {

using Complex = std::complex<double>;

/// Large-scale channel description. Distances are fixed per device.
struct ChannelParams {
    double frequency_correlation = 1.0;
    double path_loss_exponent = 2.0;
    double noise_scale = 1.0;
    std::vector<double> distances;

    /// Throws std::domain_error on any out-of-range field.
    void validate() const;
};

/// One block-fading draw: constant for the whole round.
struct ChannelRealization {
    std::size_t round = 0;
    std::vector<Complex> coefficients;
    std::vector<double> gains;  // |h_n|^2

    std::size_t size() const { return gains.size(); }
};

struct NoiseModel {
    double variance = 0.1;
    std::vector<double> avg_power;
    std::vector<double> max_power;

    void validate() const;
};

/// Circularly-symmetric complex Gaussian with E|v|^2 = 1 (Rayleigh envelope).
Complex sample_small_scale(Rng& rng);

/// Large-scale attenuation factor ς r^-ϑ ℓ^-2 for one device.
double large_scale_factor(const ChannelParams& params, std::size_t device);

/// |v|^2 ς r^-ϑ ℓ^-2.
double channel_gain(Complex v, const ChannelParams& params, std::size_t device);

ChannelRealization realize_round(const ChannelParams& params, std::size_t n_devices,
                                 std::size_t round_index, Rng& rng);

/// σ² such that P̄/σ² equals the requested SNR.
double noise_variance_from_snr(double avg_power, double snr_db);

}  // namespace airaoi::channel
