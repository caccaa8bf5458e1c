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

#include "airaoi/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace airaoi::channel {

void ChannelParams::validate() const {
    if (!(frequency_correlation > 0.0))
        throw std::domain_error("frequency correlation must be positive");
    if (!(path_loss_exponent >= 0.0))
        throw std::domain_error("path loss exponent must be nonnegative");
    if (!(noise_scale > 0.0)) throw std::domain_error("noise scale must be positive");
    for (double r : distances)
        if (!(r > 0.0)) throw std::domain_error("device distance must be positive");
}

void NoiseModel::validate() const {
    if (!(variance > 0.0)) throw std::domain_error("noise variance must be positive");
    if (avg_power.size() != max_power.size())
        throw std::invalid_argument("power vectors differ in length");
    for (std::size_t i = 0; i < avg_power.size(); ++i) {
        if (!(avg_power[i] > 0.0) || !(avg_power[i] <= max_power[i]))
            throw std::domain_error("require 0 < average power <= max power");
    }
}

Complex sample_small_scale(Rng& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

double large_scale_factor(const ChannelParams& params, std::size_t device) {
    if (device >= params.distances.size()) throw std::out_of_range("no distance for device");
    const double r = params.distances[device];
    if (!(r > 0.0)) throw std::domain_error("device distance must be positive");
    if (!(params.noise_scale > 0.0)) throw std::domain_error("noise scale must be positive");
    return params.frequency_correlation * std::pow(r, -params.path_loss_exponent) /
           (params.noise_scale * params.noise_scale);
}

double channel_gain(Complex v, const ChannelParams& params, std::size_t device) {
    return std::norm(v) * large_scale_factor(params, device);
}

ChannelRealization realize_round(const ChannelParams& params, std::size_t n_devices,
                                 std::size_t round_index, Rng& rng) {
    if (n_devices == 0) throw std::invalid_argument("realize_round needs at least one device");
    ChannelRealization out;
    out.round = round_index;
    out.coefficients.reserve(n_devices);
    out.gains.reserve(n_devices);
    for (std::size_t n = 0; n < n_devices; ++n) {
        const Complex v = sample_small_scale(rng);
        const Complex h = v * std::sqrt(large_scale_factor(params, n));
        out.coefficients.push_back(h);
        out.gains.push_back(std::norm(h));
    }
    return out;
}

double noise_variance_from_snr(double avg_power, double snr_db) {
    if (!(avg_power > 0.0)) throw std::domain_error("average power must be positive");
    return avg_power / std::pow(10.0, snr_db / 10.0);
}

}  // namespace airaoi::channel
