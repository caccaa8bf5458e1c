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

#include "airaoi/fl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "airaoi/scheduler.hpp"

namespace airaoi::fl {

int Dataset::class_count() const {
    std::set<int> seen(labels.begin(), labels.end());
    return static_cast<int>(seen.size());
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out;
    out.num_classes = num_classes;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
    out.labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) =
            features.row(static_cast<Eigen::Index>(rows[i]));
        out.labels.push_back(labels[rows[i]]);
    }
    return out;
}

SoftmaxModel::SoftmaxModel(std::size_t num_features, int num_classes)
    : features_(num_features),
      classes_(num_classes),
      dim_(static_cast<std::size_t>(num_classes) * (num_features + 1)) {
    if (num_features < 1 || num_classes < 2)
        throw std::invalid_argument("softmax model needs >= 1 feature and >= 2 classes");
}

Matrix SoftmaxModel::logits(const Vector& w, const Matrix& x) const {
    if (static_cast<std::size_t>(w.size()) != dim_) throw std::invalid_argument("bad parameter size");
    const auto c = static_cast<Eigen::Index>(classes_);
    const auto f = static_cast<Eigen::Index>(features_);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> weights(
        w.data(), c, f);
    Eigen::Map<const Vector> bias(w.data() + c * f, c);
    Matrix z = x * weights.transpose();
    z.rowwise() += bias.transpose();
    return z;
}

namespace {

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

Matrix gather(const Matrix& x, std::span<const std::size_t> rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
    return out;
}

// Row-wise softmax with max subtraction; returns log-sum-exp per row.
Vector softmax_inplace(Matrix& z) {
    Vector lse(z.rows());
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        const double m = z.row(i).maxCoeff();
        z.row(i) = (z.row(i).array() - m).exp();
        const double s = z.row(i).sum();
        z.row(i) /= s;
        lse[i] = m + std::log(s);
    }
    return lse;
}

}  // namespace

double SoftmaxModel::loss(const Vector& w, const Dataset& data,
                          std::span<const std::size_t> rows) const {
    std::vector<std::size_t> owned;
    if (rows.empty()) {
        owned = all_rows(data.size());
        rows = owned;
    }
    if (rows.empty()) throw std::invalid_argument("loss over an empty dataset");
    Matrix z = logits(w, gather(data.features, rows));
    Matrix raw = z;
    const Vector lse = softmax_inplace(z);
    double acc = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        acc += lse[r] - raw(r, data.labels[rows[i]]);
    }
    return acc / static_cast<double>(rows.size());
}

Vector SoftmaxModel::gradient(const Vector& w, const Dataset& data,
                              std::span<const std::size_t> rows) const {
    std::vector<std::size_t> owned;
    if (rows.empty()) {
        owned = all_rows(data.size());
        rows = owned;
    }
    if (rows.empty()) throw std::invalid_argument("gradient over an empty dataset");
    const Matrix x = gather(data.features, rows);
    Matrix p = logits(w, x);
    softmax_inplace(p);
    for (std::size_t i = 0; i < rows.size(); ++i)
        p(static_cast<Eigen::Index>(i), data.labels[rows[i]]) -= 1.0;
    p /= static_cast<double>(rows.size());

    const auto c = static_cast<Eigen::Index>(classes_);
    const auto f = static_cast<Eigen::Index>(features_);
    Vector g(static_cast<Eigen::Index>(dim_));
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> gw(g.data(), c, f);
    gw = p.transpose() * x;
    g.tail(c) = p.colwise().sum().transpose();
    return g;
}

double SoftmaxModel::accuracy(const Vector& w, const Dataset& data) const {
    if (data.size() == 0) throw std::invalid_argument("accuracy over an empty dataset");
    const Matrix z = logits(w, data.features);
    std::size_t hits = 0;
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        Eigen::Index arg = 0;
        z.row(i).maxCoeff(&arg);
        if (arg == data.labels[static_cast<std::size_t>(i)]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::domain_error("learning rate must be positive");
    if (local_iterations < 1) throw std::domain_error("local iterations must be >= 1");
    if (batch_size < 1) throw std::domain_error("batch size must be >= 1");
    if (rounds < 1) throw std::domain_error("rounds must be >= 1");
}

double local_loss(const SoftmaxModel& model, const Vector& w, const Dataset& data) {
    return model.loss(w, data);
}

double global_loss(const SoftmaxModel& model, const Vector& w, std::span<const Dataset> datasets,
                   std::span<const double> weights, std::span<const std::size_t> selected) {
    if (datasets.size() != weights.size()) throw std::invalid_argument("datasets/weights mismatch");
    double acc = 0.0;
    for (std::size_t n : selected) acc += weights[n] * model.loss(w, datasets[n]);
    return acc;
}

LocalResult local_sgd(const SoftmaxModel& model, const Vector& w, const Dataset& data,
                      const TrainConfig& config, Rng& rng) {
    config.validate();
    if (data.size() == 0) throw std::invalid_argument("local dataset is empty");
    const std::size_t batch = std::min(config.batch_size, data.size());
    std::vector<std::size_t> pool = all_rows(data.size());
    LocalResult out;
    out.weights = w;
    for (std::size_t step = 0; step < config.local_iterations; ++step) {
        // Partial Fisher-Yates: the first `batch` entries become the batch.
        for (std::size_t i = 0; i < batch; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
            std::swap(pool[i], pool[pick(rng)]);
        }
        std::vector<std::size_t> rows(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(batch));
        std::sort(rows.begin(), rows.end());
        out.weights -= config.learning_rate * model.gradient(out.weights, data, rows);
    }
    out.update = (w - out.weights) / config.learning_rate;
    return out;
}

Vector global_update(const Vector& w, const Vector& theta_hat, double learning_rate) {
    if (w.size() != theta_hat.size()) throw std::invalid_argument("dimension mismatch");
    return w - learning_rate * theta_hat;
}

Partition partition_noniid(const Dataset& full, std::span<const int> classes_per_device, Rng& rng) {
    const int c = full.num_classes;
    const std::size_t n_dev = classes_per_device.size();
    if (n_dev == 0) throw std::invalid_argument("no devices to partition over");
    long total = 0;
    for (int m : classes_per_device) {
        if (m < 1) throw std::invalid_argument("each device needs at least one class");
        if (m > c) throw std::invalid_argument("device demands more classes than exist");
        total += m;
    }
    if (total < c) throw std::invalid_argument("class schedule leaves some classes unassigned");

    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(c));
    for (std::size_t i = 0; i < full.size(); ++i) by_class[static_cast<std::size_t>(full.labels[i])].push_back(i);

    std::vector<std::vector<std::size_t>> holders(static_cast<std::size_t>(c));
    std::size_t cursor = 0;
    for (std::size_t n = 0; n < n_dev; ++n)
        for (int j = 0; j < classes_per_device[n]; ++j) holders[(cursor++) % static_cast<std::size_t>(c)].push_back(n);

    Partition out;
    out.source_rows.resize(n_dev);
    for (std::size_t k = 0; k < static_cast<std::size_t>(c); ++k) {
        auto rows = by_class[k];
        const std::size_t h = holders[k].size();
        if (rows.size() < h)
            throw std::invalid_argument("class has fewer samples than devices holding it");
        std::shuffle(rows.begin(), rows.end(), rng);
        for (std::size_t j = 0; j < h; ++j) {
            const std::size_t begin = rows.size() * j / h;
            const std::size_t end = rows.size() * (j + 1) / h;
            auto& dst = out.source_rows[holders[k][j]];
            dst.insert(dst.end(), rows.begin() + static_cast<std::ptrdiff_t>(begin),
                       rows.begin() + static_cast<std::ptrdiff_t>(end));
        }
    }
    for (std::size_t n = 0; n < n_dev; ++n) {
        std::sort(out.source_rows[n].begin(), out.source_rows[n].end());
        out.shards.push_back(full.subset(out.source_rows[n]));
    }
    out.weights = scheduler::class_weights(classes_per_device);
    return out;
}

Task make_gaussian_task(int num_classes, std::size_t num_features, std::size_t train_per_class,
                        std::size_t test_per_class, double separation, Rng& rng) {
    if (num_classes < 2 || num_features < 1 || train_per_class < 1)
        throw std::invalid_argument("degenerate synthetic task");
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix means(num_classes, static_cast<Eigen::Index>(num_features));
    for (Eigen::Index k = 0; k < means.rows(); ++k) {
        for (Eigen::Index j = 0; j < means.cols(); ++j) means(k, j) = normal(rng);
        means.row(k) *= separation / means.row(k).norm();
    }
    auto draw = [&](std::size_t per_class) {
        Dataset d;
        d.num_classes = num_classes;
        const std::size_t rows = per_class * static_cast<std::size_t>(num_classes);
        d.features.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(num_features));
        d.labels.reserve(rows);
        std::size_t r = 0;
        for (int k = 0; k < num_classes; ++k)
            for (std::size_t i = 0; i < per_class; ++i, ++r) {
                for (std::size_t j = 0; j < num_features; ++j)
                    d.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
                        means(k, static_cast<Eigen::Index>(j)) + normal(rng);
                d.labels.push_back(k);
            }
        return d;
    };
    Task task;
    task.train = draw(train_per_class);
    task.test = draw(std::max<std::size_t>(test_per_class, 1));
    return task;
}

Dataset load_columnar(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file " + path.string());
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::string line;
    bool first = true;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 2) throw std::runtime_error("dataset row needs features and a label");
        std::vector<double> values;
        try {
            for (const auto& s : cells) values.push_back(std::stod(s));
        } catch (const std::invalid_argument&) {
            if (first) {
                first = false;
                continue;  // header
            }
            throw std::runtime_error("non-numeric cell in dataset: " + line);
        }
        first = false;
        if (width == 0) width = values.size();
        if (values.size() != width) throw std::runtime_error("ragged dataset row");
        const double lab = values.back();
        if (lab < 0 || lab != std::floor(lab)) throw std::runtime_error("labels must be integers >= 0");
        labels.push_back(static_cast<int>(lab));
        values.pop_back();
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw std::runtime_error("dataset file has no rows");
    Dataset d;
    d.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width - 1));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j + 1 < width; ++j)
            d.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    d.labels = std::move(labels);
    d.num_classes = *std::max_element(d.labels.begin(), d.labels.end()) + 1;
    return d;
}

}  // namespace airaoi::fl
