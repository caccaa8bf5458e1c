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
#include <vector>

namespace airaoi::diagnostics {

/// Constants of the convergence bound. L, ξ², σ_h², Γ and G² are model
/// specific and must be supplied by the caller.
struct BoundParams {
    double smoothness = 1.0;              // L
    double gradient_noise = 0.0;          // ξ²
    double heterogeneity = 0.0;           // σ_h²
    double element_variance_cap = 0.0;    // Γ
    double gradient_norm_cap = 0.0;       // G²
    std::size_t dimension = 1;            // d
    std::size_t devices = 1;              // N
    std::size_t selected = 1;             // K
    std::size_t rounds = 1;               // T
    double learning_rate = 0.01;          // λ
    std::size_t local_iterations = 2;     // φ
    double initial_gap = 0.0;             // F(w0) − F(w*)
    std::vector<double> mse_trace;
    double weight_skew = 1.0;             // ν = N max_n q_n

    void validate() const;
};

struct BoundReport {
    double initial_gap = 0.0;
    double gradient_variance = 0.0;
    double divergence_participation = 0.0;
    double time_average_mse = 0.0;
    double gradient_norm = 0.0;
    double total = 0.0;

    double denominator = 0.0;      // λ(φ−1) − 4
    double learning_rate_limit = 0.0;
    double mean_mse = 0.0;
    bool denominator_nonpositive = false;
    bool learning_rate_violation = false;
    bool rescaled = false;
};

/// Evaluates the five labeled terms of the bound literally. Problems are
/// flagged on the report, never thrown, except a zero denominator.
/// With `rescale_for_weights`, L, ξ and Γ are replaced by νL, √ν ξ, √ν Γ.
BoundReport convergence_bound(const BoundParams& params, bool rescale_for_weights = false);

/// min{1/(2Lφ), 1/√(6L²φ³), √(φ−1)/(4Lφ)}.
double learning_rate_limit(double smoothness, std::size_t local_iterations);

/// d Γ (K+1)/K² · MSE.
double aggregation_error_bound(std::size_t selected, std::size_t dimension, double element_variance_cap,
                    double mse);

}  // namespace airaoi::diagnostics
