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

#include "airaoi/timing.hpp"

#include <algorithm>
#include <stdexcept>

namespace airaoi::timing {

void ComputeProfile::validate() const {
    if (!(cycles_per_sample > 0.0)) throw std::domain_error("cycles per sample must be positive");
    if (dataset_size < 1) throw std::domain_error("dataset must hold at least one sample");
    if (!(cpu_hz > 0.0)) throw std::domain_error("cpu frequency must be positive");
}

void CommProfile::validate() const {
    if (!(model_size > 0.0)) throw std::domain_error("model size must be positive");
    if (!(bandwidth > 0.0)) throw std::domain_error("bandwidth must be positive");
}

double computation_time(const ComputeProfile& profile, double resource_coefficient) {
    profile.validate();
    if (!(resource_coefficient > 0.0) || resource_coefficient > 1.0)
        throw std::domain_error("resource coefficient must lie in (0, 1]");
    return profile.cycles_per_sample * static_cast<double>(profile.dataset_size) /
           (resource_coefficient * profile.cpu_hz);
}

double communication_time(const CommProfile& profile) {
    profile.validate();
    return profile.model_size / profile.bandwidth;
}

double total_time(double compute_time, double comm_time) {
    if (compute_time < 0.0 || comm_time < 0.0)
        throw std::domain_error("times must be nonnegative");
    return compute_time + comm_time;
}

double completion_time(std::span<const double> total_times, std::span<const std::uint8_t> mask) {
    if (total_times.size() != mask.size())
        throw std::invalid_argument("times and mask differ in length");
    bool any = false;
    double worst = 0.0;
    for (std::size_t n = 0; n < mask.size(); ++n) {
        if (!mask[n]) continue;
        worst = any ? std::max(worst, total_times[n]) : total_times[n];
        any = true;
    }
    if (!any) throw std::invalid_argument("completion time needs a selected device");
    return worst;
}

double draw_resource_coefficient(double tau_min, Rng& rng) {
    if (!(tau_min > 0.0) || tau_min > 1.0) throw std::domain_error("tau_min must lie in (0, 1]");
    std::uniform_real_distribution<double> dist(tau_min, 1.0);
    return dist(rng);
}

}  // namespace airaoi::timing
