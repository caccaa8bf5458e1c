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

// Independent reference implementations used to check the production code.
// None of them call into the routines they are checking.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace airaoi::oracle {

/// Σ (b_n/√η − 1)² + σ²/η.
inline double mse_at(const std::vector<double>& b, double sigma2, double eta) {
    double s = sigma2 / eta;
    for (double v : b) {
        const double d = v / std::sqrt(eta) - 1.0;
        s += d * d;
    }
    return s;
}

/// Minimum of the MSE over a log-spaced grid of η.
inline double grid_min_mse(const std::vector<double>& b, double sigma2, std::size_t points = 100000) {
    double bmax = 0.0;
    for (double v : b) bmax = std::max(bmax, v);
    const double scale = std::max(bmax * bmax, sigma2) * static_cast<double>(b.size() + 1);
    const double lo = std::log(scale * 1e-8);
    const double hi = std::log(scale * 1e4);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points; ++i) {
        const double eta = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
        best = std::min(best, mse_at(b, sigma2, eta));
    }
    return best;
}

/// Σ_t (√(α_t κ_t) − 1)², κ_t = P g_t / η_t.
inline double alpha_objective(const std::vector<double>& alpha, const std::vector<double>& kappa) {
    double s = 0.0;
    for (std::size_t t = 0; t < alpha.size(); ++t) {
        const double d = std::sqrt(alpha[t] * kappa[t]) - 1.0;
        s += d * d;
    }
    return s;
}

/// Minimizes alpha_objective over {0 <= α <= 1, Σα <= budget} by pairwise
/// exchange: repeatedly moves mass between two coordinates (or a zero-cost
/// slack) with a golden-section line search. Valid because the objective is
/// separable and convex in α.
inline std::vector<double> alpha_pairwise_descent(const std::vector<double>& kappa, double budget,
                                                  std::size_t sweeps = 400) {
    const std::size_t n = kappa.size();
    // Coordinates 0..n-1 are α; coordinate n is the slack budget − Σα.
    std::vector<double> x(n + 1, 0.0);
    const double start = std::min(1.0, budget / static_cast<double>(std::max<std::size_t>(n, 1)));
    for (std::size_t t = 0; t < n; ++t) x[t] = start;
    x[n] = std::max(0.0, budget - start * static_cast<double>(n));
    auto f1 = [&](std::size_t i, double v) {
        if (i == n) return 0.0;
        const double d = std::sqrt(v * kappa[i]) - 1.0;
        return d * d;
    };
    auto upper = [&](std::size_t i) { return i == n ? budget : 1.0; };
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t j = i + 1; j <= n; ++j) {
                // Move δ from j to i: x_i + δ, x_j − δ.
                const double dlo = std::max(-x[i], x[j] - upper(j));
                const double dhi = std::min(upper(i) - x[i], x[j]);
                if (!(dhi > dlo)) continue;
                auto g = [&](double d) { return f1(i, x[i] + d) + f1(j, x[j] - d); };
                double a = dlo, b = dhi;
                double c = b - gr * (b - a), e = a + gr * (b - a);
                double gc = g(c), ge = g(e);
                for (int k = 0; k < 100; ++k) {
                    if (gc < ge) {
                        b = e; e = c; ge = gc; c = b - gr * (b - a); gc = g(c);
                    } else {
                        a = c; c = e; gc = ge; e = a + gr * (b - a); ge = g(e);
                    }
                }
                double d = 0.5 * (a + b);
                // Endpoints matter because the objective has an infinite slope at α = 0.
                for (double cand : {dlo, dhi, 0.0})
                    if (g(cand) < g(d)) d = cand;
                x[i] += d;
                x[j] -= d;
            }
        }
    }
    x.resize(n);
    return x;
}

/// (1/N) Σ q_n A_n after selecting `set` with completion time max_{set} T.
inline double next_ws_paoi(const std::vector<std::size_t>& set, const std::vector<double>& times,
                           const std::vector<double>& weights, const std::vector<double>& paoi) {
    const std::size_t n = times.size();
    double tc = 0.0;
    for (std::size_t i : set) tc = std::max(tc, times[i]);
    std::vector<char> in(n, 0);
    for (std::size_t i : set) in[i] = 1;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += weights[i] * ((in[i] ? 0.0 : paoi[i]) + tc);
    return s / static_cast<double>(n);
}

/// Best r over every priority prefix k = 1..N, each augmented with the
/// devices that finish no later than the prefix.
inline double prefix_enumeration(const std::vector<double>& priority, const std::vector<double>& times,
                                 const std::vector<double>& weights, const std::vector<double>& paoi) {
    const std::size_t n = times.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return priority[a] > priority[b]; });
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= n; ++k) {
        double psi = 0.0;
        for (std::size_t i = 0; i < k; ++i) psi = std::max(psi, times[order[i]]);
        std::vector<std::size_t> set(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
        for (std::size_t i = k; i < n; ++i)
            if (times[order[i]] <= psi) set.push_back(order[i]);
        best = std::min(best, next_ws_paoi(set, times, weights, paoi));
    }
    return best;
}

/// Minimum over all nonempty subsets.
inline double subset_enumeration(const std::vector<double>& times, const std::vector<double>& weights,
                                 const std::vector<double>& paoi) {
    const std::size_t n = times.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m = 1; m < (std::size_t{1} << n); ++m) {
        std::vector<std::size_t> set;
        for (std::size_t i = 0; i < n; ++i)
            if (m >> i & 1U) set.push_back(i);
        best = std::min(best, next_ws_paoi(set, times, weights, paoi));
    }
    return best;
}

/// Central finite-difference gradient.
template <typename F>
Eigen::VectorXd finite_difference(F&& f, const Eigen::VectorXd& w, double h = 1e-6) {
    Eigen::VectorXd g(w.size());
    Eigen::VectorXd x = w;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        x[i] = w[i] + h;
        const double up = f(x);
        x[i] = w[i] - h;
        const double dn = f(x);
        x[i] = w[i];
        g[i] = (up - dn) / (2.0 * h);
    }
    return g;
}

}  // namespace airaoi::oracle
