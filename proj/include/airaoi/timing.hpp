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

#include <cstddef>
#include <span>

#include "airaoi/common.hpp"

namespace airaoi::timing {

struct ComputeProfile {
    double cycles_per_sample = 1e7;  // μ
    std::size_t dataset_size = 1;    // |D_n|
    double cpu_hz = 0.5e9;           // C_n

    void validate() const;
};

struct CommProfile {
    double model_size = 11.7e6;  // symbols
    double bandwidth = 20e6;     // symbols per second

    void validate() const;
};

/// μ|D_n| / (τ C_n). `resource_coefficient` is τ in (0, 1].
double computation_time(const ComputeProfile& profile, double resource_coefficient);

/// D / B, shared by every device and round.
double communication_time(const CommProfile& profile);

double total_time(double compute_time, double comm_time);

/// Longest total time among selected devices. Throws if nothing is selected.
double completion_time(std::span<const double> total_times, std::span<const std::uint8_t> mask);

/// Draws τ uniformly on [tau_min, 1].
double draw_resource_coefficient(double tau_min, Rng& rng);

}  // namespace airaoi::timing
