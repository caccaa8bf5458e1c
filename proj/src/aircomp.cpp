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

#include "airaoi/aircomp.hpp"

#include <cmath>
#include <stdexcept>

namespace airaoi::aircomp {

double AggregateStats::stddev() const { return std::sqrt(variance); }

Vector cumulative_update(const Vector& w_start, const Vector& w_end, double learning_rate) {
    if (!(learning_rate > 0.0)) throw std::domain_error("learning rate must be positive");
    if (w_start.size() != w_end.size()) throw std::invalid_argument("dimension mismatch");
    return (w_start - w_end) / learning_rate;
}

GradientStats device_stats(const Vector& theta) {
    if (theta.size() < 1) throw std::invalid_argument("gradient must have d >= 1");
    GradientStats s;
    s.mean = theta.mean();
    s.variance = (theta.array() - s.mean).square().mean();
    return s;
}

AggregateStats aggregate_stats(std::span<const GradientStats> stats,
                               std::span<const double> weights, std::size_t n_devices) {
    if (stats.empty()) throw std::invalid_argument("need at least one transmitting device");
    if (stats.size() != weights.size()) throw std::invalid_argument("stats/weights mismatch");
    AggregateStats out;
    out.participants = stats.size();
    const double scale = static_cast<double>(n_devices) / static_cast<double>(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) {
        out.mean += weights[i] * stats[i].mean;
        out.variance += weights[i] * stats[i].variance;
    }
    out.mean *= scale;
    out.variance *= scale;
    return out;
}

Vector normalize(const Vector& theta, double global_mean, double global_std) {
    if (!(global_std > 0.0)) throw DegenerateError("aggregate gradient variance is zero");
    return (theta.array() - global_mean) / global_std;
}

Vector transmit_and_aggregate(std::span<const Vector> z, std::span<const double> alphas,
                              std::span<const double> max_powers,
                              std::span<const std::complex<double>> channels, double eta,
                              double noise_variance, Rng& rng) {
    if (!(eta > 0.0)) throw std::domain_error("normalizing factor must be positive");
    if (z.empty()) throw std::invalid_argument("nothing to transmit");
    if (alphas.size() != z.size() || max_powers.size() != z.size() || channels.size() != z.size())
        throw std::invalid_argument("transmission inputs differ in length");
    const Eigen::Index d = z[0].size();
    const double root_eta = std::sqrt(eta);
    Vector y = Vector::Zero(d);
    for (std::size_t n = 0; n < z.size(); ++n) {
        if (z[n].size() != d) throw std::invalid_argument("dimension mismatch");
        const std::complex<double> h = channels[n];
        const double mag = std::abs(h);
        if (mag == 0.0) continue;
        // h · ϖ with ϖ = √(αP) h* / |h|: the phase cancels.
        const std::complex<double> precoder = std::sqrt(alphas[n] * max_powers[n]) * std::conj(h) / mag;
        const double coeff = (h * precoder).real();
        y += coeff * z[n];
    }
    if (noise_variance > 0.0) {
        std::normal_distribution<double> noise(0.0, std::sqrt(noise_variance));
        for (Eigen::Index j = 0; j < d; ++j) y[j] += noise(rng);
    }
    return y / root_eta;
}

Vector denormalize(const Vector& z_hat, const AggregateStats& stats) {
    if (stats.participants < 1) throw std::invalid_argument("K must be >= 1");
    return (stats.stddev() / static_cast<double>(stats.participants)) * z_hat.array() + stats.mean;
}

ErrorTerm aggregation_error(const Vector& z_hat, const Vector& ideal_target,
                            const AggregateStats& stats) {
    if (z_hat.size() != ideal_target.size()) throw std::invalid_argument("dimension mismatch");
    ErrorTerm out;
    out.error = (stats.stddev() / static_cast<double>(stats.participants)) * (z_hat - ideal_target);
    out.squared_norm = out.error.squaredNorm();
    return out;
}

AggregationResult aggregate_round(std::span<const Vector> thetas, std::span<const double> weights,
                                  std::size_t n_devices, std::span<const double> alphas,
                                  std::span<const double> max_powers,
                                  std::span<const std::complex<double>> channels, double eta,
                                  double noise_variance, Rng& rng) {
    std::vector<GradientStats> stats;
    stats.reserve(thetas.size());
    for (const auto& th : thetas) stats.push_back(device_stats(th));
    const AggregateStats agg = aggregate_stats(stats, weights, n_devices);

    std::vector<Vector> z;
    z.reserve(thetas.size());
    for (const auto& th : thetas) z.push_back(normalize(th, agg.mean, agg.stddev()));

    AggregationResult out;
    out.ideal_target = Vector::Zero(thetas[0].size());
    for (const auto& zn : z) out.ideal_target += zn;
    out.z_hat = transmit_and_aggregate(z, alphas, max_powers, channels, eta, noise_variance, rng);
    out.theta_hat = denormalize(out.z_hat, agg);
    out.error = aggregation_error(out.z_hat, out.ideal_target, agg).error;
    return out;
}

}  // namespace airaoi::aircomp
