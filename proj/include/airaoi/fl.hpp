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
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "airaoi/common.hpp"

namespace airaoi::fl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Feature rows with integer class labels in [0, num_classes).
struct Dataset {
    Matrix features;
    std::vector<int> labels;
    int num_classes = 0;

    std::size_t size() const { return labels.size(); }
    std::size_t num_features() const { return static_cast<std::size_t>(features.cols()); }
    /// Number of distinct labels present (M_n).
    int class_count() const;
    Dataset subset(std::span<const std::size_t> rows) const;
};

/// Multinomial logistic regression. Parameters are the row-major class
/// weight matrix followed by the per-class biases.
class SoftmaxModel {
  public:
    SoftmaxModel(std::size_t num_features, int num_classes);

    std::size_t dimension() const { return dim_; }
    std::size_t num_features() const { return features_; }
    int num_classes() const { return classes_; }

    /// Mean cross-entropy over the given rows (all rows when empty).
    double loss(const Vector& w, const Dataset& data, std::span<const std::size_t> rows = {}) const;
    Vector gradient(const Vector& w, const Dataset& data,
                    std::span<const std::size_t> rows = {}) const;
    double accuracy(const Vector& w, const Dataset& data) const;

  private:
    Matrix logits(const Vector& w, const Matrix& x) const;

    std::size_t features_;
    int classes_;
    std::size_t dim_;
};

struct TrainConfig {
    double learning_rate = 0.05;
    std::size_t local_iterations = 5;
    std::size_t batch_size = 32;
    std::size_t rounds = 500;

    void validate() const;
};

double local_loss(const SoftmaxModel& model, const Vector& w, const Dataset& data);

/// Σ_{n∈S} q_n F_n(w).
double global_loss(const SoftmaxModel& model, const Vector& w, std::span<const Dataset> datasets,
                   std::span<const double> weights, std::span<const std::size_t> selected);

struct LocalResult {
    Vector weights;
    Vector update;  // θ_n = (w_start − w_end) / λ
};

/// φ mini-batch SGD steps. Each batch is drawn without replacement.
LocalResult local_sgd(const SoftmaxModel& model, const Vector& w, const Dataset& data,
                      const TrainConfig& config, Rng& rng);

/// w − λ θ̂.
Vector global_update(const Vector& w, const Vector& theta_hat, double learning_rate);

struct Partition {
    std::vector<Dataset> shards;
    std::vector<std::vector<std::size_t>> source_rows;
    std::vector<double> weights;  // q_n = 2^M_n / Σ 2^M_m
};

/// Device n receives exactly classes_per_device[n] classes. Classes are dealt
/// round-robin so every class is held by someone, then each class's samples
/// are split evenly among its holders.
Partition partition_noniid(const Dataset& full, std::span<const int> classes_per_device, Rng& rng);

struct Task {
    Dataset train;
    Dataset test;
};

/// Isotropic Gaussian clusters with class means drawn at distance `separation`.
Task make_gaussian_task(int num_classes, std::size_t num_features, std::size_t train_per_class,
                        std::size_t test_per_class, double separation, Rng& rng);

/// Comma-separated rows: features then an integer label. A non-numeric first
/// row is treated as a header; lines starting with '#' are skipped.
Dataset load_columnar(const std::filesystem::path& path);

}  // namespace airaoi::fl
