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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "airaoi/common.hpp"

namespace airaoi::aircomp {

using Vector = Eigen::VectorXd;

struct GradientStats {
    double mean = 0.0;
    double variance = 0.0;  // population (1/d) variance
};

struct AggregateStats {
    double mean = 0.0;
    double variance = 0.0;
    std::size_t participants = 0;  // K

    double stddev() const;
};

struct AggregationResult {
    Vector z_hat;
    Vector theta_hat;
    Vector error;
    Vector ideal_target;  // Σ_{n∈S} z_n
};

/// (w_start − w_end) / λ.
Vector cumulative_update(const Vector& w_start, const Vector& w_end, double learning_rate);

GradientStats device_stats(const Vector& theta);

/// (N/K) Σ q_n mean_n and (N/K) Σ q_n var_n over the K transmitting devices.
/// `weights` holds q_n of those devices, aligned with `stats`.
AggregateStats aggregate_stats(std::span<const GradientStats> stats,
                               std::span<const double> weights, std::size_t n_devices);

/// (θ − θ̄) / π. Throws DegenerateError when π is not positive.
Vector normalize(const Vector& theta, double global_mean, double global_std);

/// Received and scaled superposition ŷ/√η with per-device phase pre-compensation:
/// Σ_n (√(α_n P_n) |h_n| / √η) z_n + noise/√η, noise ~ N(0, σ² I_d).
Vector transmit_and_aggregate(std::span<const Vector> z, std::span<const double> alphas,
                              std::span<const double> max_powers,
                              std::span<const std::complex<double>> channels, double eta,
                              double noise_variance, Rng& rng);

/// (π/K) ẑ + θ̄.
Vector denormalize(const Vector& z_hat, const AggregateStats& stats);

struct ErrorTerm {
    Vector error;
    double squared_norm = 0.0;
};

/// e = (π/K)(ẑ − z).
ErrorTerm aggregation_error(const Vector& z_hat, const Vector& ideal_target,
                            const AggregateStats& stats);

/// Runs normalization, transmission and de-normalization for one round.
/// Vectors in `thetas`, `weights`, `alphas`, `max_powers` and `channels` are
/// aligned with the transmitting devices.
AggregationResult aggregate_round(std::span<const Vector> thetas, std::span<const double> weights,
                                  std::size_t n_devices, std::span<const double> alphas,
                                  std::span<const double> max_powers,
                                  std::span<const std::complex<double>> channels, double eta,
                                  double noise_variance, Rng& rng);

}  // namespace airaoi::aircomp
