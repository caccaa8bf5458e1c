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

#include "airaoi/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace airaoi::diagnostics {

void BoundParams::validate() const {
    for (double v : {smoothness, gradient_noise, heterogeneity, element_variance_cap,
                     gradient_norm_cap, learning_rate, initial_gap, weight_skew})
        if (!std::isfinite(v) || v < 0.0) throw std::domain_error("bound constants must be finite and >= 0");
    if (devices < 1 || selected < 1 || selected > devices)
        throw std::domain_error("require 1 <= K <= N");
    if (rounds < 1 || dimension < 1 || local_iterations < 1)
        throw std::domain_error("rounds, dimension and local iterations must be >= 1");
    for (double m : mse_trace)
        if (!std::isfinite(m) || m < 0.0) throw std::domain_error("MSE values must be finite and >= 0");
}

double learning_rate_limit(double smoothness, std::size_t local_iterations) {
    const double l = smoothness;
    const double phi = static_cast<double>(local_iterations);
    const double a = 1.0 / (2.0 * l * phi);
    const double b = 1.0 / std::sqrt(6.0 * l * l * phi * phi * phi);
    const double c = std::sqrt(phi - 1.0) / (4.0 * l * phi);
    return std::min({a, b, c});
}

BoundReport convergence_bound(const BoundParams& params, bool rescale_for_weights) {
    params.validate();
    BoundReport r;
    double l = params.smoothness;
    double xi2 = params.gradient_noise;
    double gamma = params.element_variance_cap;
    if (rescale_for_weights) {
        const double nu = params.weight_skew;
        l *= nu;
        xi2 *= nu;  // ξ̃² = (√ν ξ)²
        gamma *= std::sqrt(nu);
        r.rescaled = true;
    }
    const double lr = params.learning_rate;
    const double phi = static_cast<double>(params.local_iterations);
    const double n = static_cast<double>(params.devices);
    const double k = static_cast<double>(params.selected);
    const double t = static_cast<double>(params.rounds);
    const double d = static_cast<double>(params.dimension);

    r.denominator = lr * (phi - 1.0) - 4.0;
    if (r.denominator == 0.0) throw std::domain_error("bound denominator λ(φ−1)−4 is zero");
    r.denominator_nonpositive = r.denominator < 0.0;
    r.learning_rate_limit = learning_rate_limit(l, params.local_iterations);
    r.learning_rate_violation = !(lr <= r.learning_rate_limit);

    const double den = r.denominator;
    r.initial_gap = 4.0 * params.initial_gap / (den * t);
    r.gradient_variance =
        4.0 * phi * (4.0 * lr * lr * lr * l * l * phi * phi + 3.0 * lr) / (3.0 * den) * xi2;
    const double participation = params.selected == params.devices
                                     ? 0.0
                                     : (2.0 + l) * (n - k) / ((n - 1.0) * k);
    r.divergence_participation = 16.0 * lr * phi * phi * params.heterogeneity / den *
                                 (participation + lr * lr * l * l * phi);
    r.mean_mse = params.mse_trace.empty()
                     ? 0.0
                     : std::accumulate(params.mse_trace.begin(), params.mse_trace.end(), 0.0) /
                           static_cast<double>(params.mse_trace.size());
    r.time_average_mse = 2.0 * lr * (1.0 + 2.0 * lr * l) / den * d * gamma * (k + 1.0) / (k * k) *
                         r.mean_mse;
    r.gradient_norm = 4.0 * l * l * lr * lr / den * params.gradient_norm_cap;
    r.total = r.initial_gap + r.gradient_variance + r.divergence_participation +
              r.time_average_mse + r.gradient_norm;
    return r;
}

double aggregation_error_bound(std::size_t selected, std::size_t dimension, double element_variance_cap,
                    double mse) {
    if (selected < 1) throw std::domain_error("K must be >= 1");
    const double k = static_cast<double>(selected);
    return static_cast<double>(dimension) * element_variance_cap * (k + 1.0) / (k * k) * mse;
}

}  // namespace airaoi::diagnostics
