// Copyright 2026 The qemlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qemlab/models.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qemlab/errors.h"
#include "qemlab/parallel.h"
#include "qemlab/rng.h"

namespace qemlab {

using nlohmann::json;

std::string_view model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Ols:
            return "ols";
        case ModelKind::RandomForest:
            return "rf";
        case ModelKind::Mlp:
            return "mlp";
    }
    throw std::logic_error("unknown model kind");
}

ModelKind parse_model_kind(std::string_view name) {
    if (name == "ols") {
        return ModelKind::Ols;
    }
    if (name == "rf") {
        return ModelKind::RandomForest;
    }
    if (name == "mlp") {
        return ModelKind::Mlp;
    }
    throw std::invalid_argument("unknown model kind '" + std::string(name) + "' (expected ols, rf or mlp)");
}

TrainingData TrainingData::from_rows(std::span<const DatasetRow> rows) {
    TrainingData d;
    if (rows.empty()) {
        return d;
    }
    const std::size_t w = rows.front().features.size();
    d.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(w));
    d.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); i++) {
        if (rows[i].features.size() != w) {
            throw std::invalid_argument("dataset rows have different feature widths");
        }
        for (std::size_t j = 0; j < w; j++) {
            d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i].features[j];
        }
        d.y(static_cast<Eigen::Index>(i)) = rows[i].target;
    }
    return d;
}

double clamp_expectation(double value) {
    return std::clamp(value, -1.0, 1.0);
}

double Regressor::predict(std::span<const double> x) const {
    if (x.size() != width()) {
        throw std::invalid_argument("feature width " + std::to_string(x.size()) + " does not match model width " +
                                    std::to_string(width()));
    }
    return clamp_expectation(predict_raw(x));
}

namespace {

void require_rows(const TrainingData &data) {
    if (data.size() == 0) {
        throw std::invalid_argument("cannot fit a model on an empty dataset");
    }
}

std::vector<double> to_vector(const Eigen::VectorXd &v) {
    return {v.data(), v.data() + v.size()};
}

Eigen::VectorXd to_eigen(const std::vector<double> &v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

// ---------------------------------------------------------------------------------------------

OlsModel::OlsModel(Eigen::VectorXd weights) : weights_(std::move(weights)) {
    if (weights_.size() < 1) {
        throw std::invalid_argument("OLS weights need at least the intercept");
    }
}

double OlsModel::predict_raw(std::span<const double> x) const {
    const auto w = static_cast<Eigen::Index>(width());
    Eigen::Map<const Eigen::VectorXd> v(x.data(), w);
    return weights_.head(w).dot(v) + weights_(w);
}

void OlsModel::to_json(json &out) const {
    out["weights"] = to_vector(weights_);
}

OlsModel OlsModel::from_json(const json &in) {
    return OlsModel(to_eigen(in.at("weights").get<std::vector<double>>()));
}

OlsModel fit_ols(const TrainingData &data) {
    require_rows(data);
    const Eigen::Index n = data.x.rows();
    const Eigen::Index d = data.x.cols();
    Eigen::MatrixXd a(n, d + 1);
    a.leftCols(d) = data.x;
    a.col(d).setOnes();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    Eigen::VectorXd w = cod.solve(data.y);
    if (!w.allFinite()) {
        throw std::runtime_error("least-squares solution is not finite");
    }
    return OlsModel(std::move(w));
}

// ---------------------------------------------------------------------------------------------

namespace {

double order_free_mean(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    // Shifting by the first value keeps the mean of identical values exact.
    double s = 0.0;
    for (double v : values) {
        s += v - values.front();
    }
    return values.front() + s / static_cast<double>(values.size());
}

class TreeBuilder {
   public:
    TreeBuilder(const TrainingData &data, const RfConfig &config, std::uint64_t seed)
        : data_(data), config_(config), rng_(seed) {
        const int d = static_cast<int>(data.x.cols());
        if (config.max_features > 0) {
            max_features_ = std::min(config.max_features, d);
        } else if (config.max_features == 0) {
            max_features_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(d))));
        } else {
            max_features_ = d;
        }
        features_.resize(static_cast<std::size_t>(d));
    }

    RegressionTree build(std::vector<std::size_t> sample) {
        grow(std::move(sample), 0);
        return std::move(nodes_);
    }

   private:
    int grow(std::vector<std::size_t> sample, int depth) {
        std::vector<double> ys;
        ys.reserve(sample.size());
        for (auto i : sample) {
            ys.push_back(data_.y(static_cast<Eigen::Index>(i)));
        }
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back(TreeNode{-1, 0.0, -1, -1, order_free_mean(ys)});
        auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
        if (static_cast<int>(sample.size()) < config_.min_split || *ymin == *ymax ||
            (config_.max_depth > 0 && depth >= config_.max_depth)) {
            return id;
        }

        // Draw features without replacement until max_features non-constant ones were scored.
        std::iota(features_.begin(), features_.end(), 0);
        const std::size_t d = features_.size();
        int scored = 0;
        int best_feature = -1;
        double best_score = -std::numeric_limits<double>::infinity();
        double best_threshold = 0.0;
        std::vector<std::pair<double, double>> pairs(sample.size());
        for (std::size_t k = 0; k < d && scored < max_features_; k++) {
            std::size_t j = k + rng_.below(d - k);
            std::swap(features_[k], features_[j]);
            const int f = features_[k];
            for (std::size_t i = 0; i < sample.size(); i++) {
                auto r = static_cast<Eigen::Index>(sample[i]);
                pairs[i] = {data_.x(r, f), data_.y(r)};
            }
            std::sort(pairs.begin(), pairs.end());
            if (pairs.front().first == pairs.back().first) {
                continue;
            }
            scored++;
            double total = 0.0;
            for (const auto &p : pairs) {
                total += p.second;
            }
            const double n = static_cast<double>(pairs.size());
            double left = 0.0;
            for (std::size_t i = 0; i + 1 < pairs.size(); i++) {
                left += pairs[i].second;
                if (pairs[i].first == pairs[i + 1].first) {
                    continue;
                }
                const double nl = static_cast<double>(i + 1);
                const double right = total - left;
                // Maximizing this proxy maximizes the MSE reduction.
                const double score = left * left / nl + right * right / (n - nl);
                if (score > best_score) {
                    best_score = score;
                    best_feature = f;
                    double mid = pairs[i].first + (pairs[i + 1].first - pairs[i].first) / 2;
                    best_threshold = mid < pairs[i + 1].first ? mid : pairs[i].first;
                }
            }
        }
        if (best_feature < 0) {
            return id;
        }
        std::vector<std::size_t> left_sample;
        std::vector<std::size_t> right_sample;
        for (auto i : sample) {
            if (data_.x(static_cast<Eigen::Index>(i), best_feature) <= best_threshold) {
                left_sample.push_back(i);
            } else {
                right_sample.push_back(i);
            }
        }
        sample.clear();
        sample.shrink_to_fit();
        nodes_[id].feature = best_feature;
        nodes_[id].threshold = best_threshold;
        int l = grow(std::move(left_sample), depth + 1);
        nodes_[id].left = l;
        int r = grow(std::move(right_sample), depth + 1);
        nodes_[id].right = r;
        return id;
    }

    const TrainingData &data_;
    const RfConfig &config_;
    Rng rng_;
    int max_features_ = 1;
    std::vector<int> features_;
    RegressionTree nodes_;
};


}  // namespace

RegressionTree fit_tree(const TrainingData &data, std::span<const std::size_t> sample, const RfConfig &config,
                        std::uint64_t seed) {
    if (sample.empty()) {
        throw std::invalid_argument("a tree needs at least one sample");
    }
    if (config.min_split < 2) {
        throw std::invalid_argument("min_split must be at least 2");
    }
    for (auto i : sample) {
        if (i >= data.size()) {
            throw std::out_of_range("sample index out of range");
        }
    }
    TreeBuilder builder(data, config, seed);
    return builder.build(std::vector<std::size_t>(sample.begin(), sample.end()));
}

double predict_tree(const RegressionTree &tree, std::span<const double> x) {
    int node = 0;
    while (tree[node].feature >= 0) {
        node = x[tree[node].feature] <= tree[node].threshold ? tree[node].left : tree[node].right;
    }
    return tree[node].value;
}

RandomForestModel::RandomForestModel(std::size_t width, std::vector<RegressionTree> trees, RfConfig config)
    : width_(width), trees_(std::move(trees)), config_(config) {
    if (trees_.empty()) {
        throw std::invalid_argument("a forest needs at least one tree");
    }
}

double RandomForestModel::predict_raw(std::span<const double> x) const {
    const double first = predict_tree(trees_.front(), x);
    double s = 0.0;
    for (std::size_t t = 1; t < trees_.size(); t++) {
        s += predict_tree(trees_[t], x) - first;
    }
    return first + s / static_cast<double>(trees_.size());
}

namespace {

json rf_config_to_json(const RfConfig &c) {
    return {{"n_trees", c.n_trees},   {"min_split", c.min_split}, {"max_features", c.max_features},
            {"max_depth", c.max_depth}, {"bootstrap", c.bootstrap}, {"seed", c.seed}};
}

RfConfig rf_config_from_json(const json &j) {
    RfConfig c;
    c.n_trees = j.value("n_trees", c.n_trees);
    c.min_split = j.value("min_split", c.min_split);
    c.max_features = j.value("max_features", c.max_features);
    c.max_depth = j.value("max_depth", c.max_depth);
    c.bootstrap = j.value("bootstrap", c.bootstrap);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    return c;
}

json mlp_config_to_json(const MlpConfig &c) {
    return {{"hidden", c.hidden},
            {"epochs", c.epochs},
            {"batch_size", c.batch_size},
            {"learning_rate", c.learning_rate},
            {"beta1", c.beta1},
            {"beta2", c.beta2},
            {"adam_eps", c.adam_eps},
            {"validation_fraction", c.validation_fraction},
            {"patience", c.patience},
            {"seed", c.seed}};
}

MlpConfig mlp_config_from_json(const json &j) {
    MlpConfig c;
    c.hidden = j.value("hidden", c.hidden);
    c.epochs = j.value("epochs", c.epochs);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.beta1 = j.value("beta1", c.beta1);
    c.beta2 = j.value("beta2", c.beta2);
    c.adam_eps = j.value("adam_eps", c.adam_eps);
    c.validation_fraction = j.value("validation_fraction", c.validation_fraction);
    c.patience = j.value("patience", c.patience);
    c.seed = j.value("seed", c.seed);
    return c;
}

}  // namespace

void RandomForestModel::to_json(json &out) const {
    out["width"] = width_;
    out["config"] = rf_config_to_json(config_);
    json trees = json::array();
    for (const auto &t : trees_) {
        json nodes = json::array();
        for (const auto &n : t) {
            nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.value}));
        }
        trees.push_back(std::move(nodes));
    }
    out["trees"] = std::move(trees);
}

RandomForestModel RandomForestModel::from_json(const json &in) {
    std::vector<RegressionTree> trees;
    const auto width = in.at("width").get<std::size_t>();
    for (const auto &t : in.at("trees")) {
        RegressionTree tree;
        for (const auto &n : t) {
            tree.push_back(TreeNode{n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(),
                                    n.at(3).get<int>(), n.at(4).get<double>()});
        }
        const int size = static_cast<int>(tree.size());
        if (tree.empty()) {
            throw FormatError("random forest json has an empty tree");
        }
        for (const auto &n : tree) {
            if (n.feature >= 0 && (n.feature >= static_cast<int>(width) || n.left <= 0 || n.right <= 0 ||
                                   n.left >= size || n.right >= size)) {
                throw FormatError("random forest json has an invalid tree node");
            }
        }
        trees.push_back(std::move(tree));
    }
    return RandomForestModel(width, std::move(trees), rf_config_from_json(in.at("config")));
}

RandomForestModel fit_rf(const TrainingData &data, const RfConfig &config, std::vector<double> *oob) {
    require_rows(data);
    if (config.n_trees < 1) {
        throw std::invalid_argument("n_trees must be positive");
    }
    const std::size_t n = data.size();
    std::vector<RegressionTree> trees(static_cast<std::size_t>(config.n_trees));
    std::vector<std::vector<std::size_t>> samples(trees.size());
    parallel_for(trees.size(), config.threads, [&](std::size_t t) {
        std::vector<std::size_t> sample(n);
        if (config.bootstrap) {
            Rng boot(derive_seed(config.seed, 2 * t));
            for (auto &s : sample) {
                s = static_cast<std::size_t>(boot.below(n));
            }
        } else {
            std::iota(sample.begin(), sample.end(), 0);
        }
        trees[t] = fit_tree(data, sample, config, derive_seed(config.seed, 2 * t + 1));
        if (oob != nullptr) {
            samples[t] = std::move(sample);
        }
    });
    if (oob != nullptr) {
        oob->assign(n, 0.0);
        std::vector<int> votes(n, 0);
        std::vector<char> in_bag(n);
        for (std::size_t t = 0; t < trees.size(); t++) {
            std::fill(in_bag.begin(), in_bag.end(), 0);
            for (auto i : samples[t]) {
                in_bag[i] = 1;
            }
            for (std::size_t i = 0; i < n; i++) {
                if (!in_bag[i]) {
                    Eigen::VectorXd row = data.x.row(static_cast<Eigen::Index>(i));
                    (*oob)[i] += predict_tree(trees[t], {row.data(), static_cast<std::size_t>(row.size())});
                    votes[i]++;
                }
            }
        }
        for (std::size_t i = 0; i < n; i++) {
            (*oob)[i] = votes[i] > 0 ? (*oob)[i] / votes[i] : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return RandomForestModel(static_cast<std::size_t>(data.x.cols()), std::move(trees), config);
}

// ---------------------------------------------------------------------------------------------

MlpModel::MlpModel(const TrainingData &data, const MlpConfig &config) : config_(config) {
    require_rows(data);
    if (config.batch_size < 1) {
        throw std::invalid_argument("batch size must be positive");
    }
    const Eigen::Index d = data.x.cols();
    mean_ = data.x.colwise().mean().transpose();
    scale_.resize(d);
    for (Eigen::Index j = 0; j < d; j++) {
        double var = (data.x.col(j).array() - mean_(j)).square().mean();
        double sd = std::sqrt(var);
        scale_(j) = sd > 1e-12 ? sd : 1.0;
    }
    Rng rng(config.seed);
    Eigen::Index in = d;
    std::vector<int> widths = config.hidden;
    widths.push_back(1);
    for (int out : widths) {
        if (out < 1) {
            throw std::invalid_argument("hidden layer widths must be positive");
        }
        DenseLayer layer;
        layer.w.resize(out, in);
        const double s = std::sqrt(2.0 / static_cast<double>(in));
        for (Eigen::Index c = 0; c < layer.w.cols(); c++) {
            for (Eigen::Index r = 0; r < layer.w.rows(); r++) {
                layer.w(r, c) = s * rng.normal();
            }
        }
        layer.b = Eigen::VectorXd::Zero(out);
        layers_.push_back(std::move(layer));
        in = out;
    }
}

Eigen::MatrixXd MlpModel::standardize(const Eigen::MatrixXd &x) const {
    return (x.rowwise() - mean_.transpose()).array().rowwise() / scale_.transpose().array();
}

Eigen::VectorXd MlpModel::forward(const Eigen::MatrixXd &a0) const {
    Eigen::MatrixXd a = a0;
    for (std::size_t l = 0; l < layers_.size(); l++) {
        Eigen::MatrixXd z = a * layers_[l].w.transpose();
        z.rowwise() += layers_[l].b.transpose();
        a = l + 1 < layers_.size() ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
    }
    return a.col(0);
}

double MlpModel::predict_raw(std::span<const double> x) const {
    Eigen::Map<const Eigen::RowVectorXd> row(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::MatrixXd m = row;
    return forward(standardize(m))(0);
}

std::size_t MlpModel::parameter_count() const {
    std::size_t n = 0;
    for (const auto &l : layers_) {
        n += static_cast<std::size_t>(l.w.size() + l.b.size());
    }
    return n;
}

std::vector<double> MlpModel::parameters() const {
    std::vector<double> p;
    p.reserve(parameter_count());
    for (const auto &l : layers_) {
        p.insert(p.end(), l.w.data(), l.w.data() + l.w.size());
        p.insert(p.end(), l.b.data(), l.b.data() + l.b.size());
    }
    return p;
}

void MlpModel::set_parameters(std::span<const double> p) {
    if (p.size() != parameter_count()) {
        throw std::invalid_argument("parameter vector has the wrong length");
    }
    std::size_t o = 0;
    for (auto &l : layers_) {
        std::copy_n(p.begin() + o, l.w.size(), l.w.data());
        o += l.w.size();
        std::copy_n(p.begin() + o, l.b.size(), l.b.data());
        o += l.b.size();
    }
}

namespace {

double backprop(const std::vector<DenseLayer> &layers, const Eigen::MatrixXd &x, const Eigen::VectorXd &y,
                std::vector<DenseLayer> *grads) {
    const std::size_t L = layers.size();
    std::vector<Eigen::MatrixXd> acts(L + 1);
    std::vector<Eigen::MatrixXd> pre(L);
    acts[0] = x;
    for (std::size_t l = 0; l < L; l++) {
        pre[l] = acts[l] * layers[l].w.transpose();
        pre[l].rowwise() += layers[l].b.transpose();
        acts[l + 1] = l + 1 < L ? Eigen::MatrixXd(pre[l].cwiseMax(0.0)) : pre[l];
    }
    const double b = static_cast<double>(x.rows());
    Eigen::VectorXd diff = acts[L].col(0) - y;
    double loss = diff.squaredNorm() / b;
    if (grads == nullptr) {
        return loss;
    }
    grads->resize(L);
    Eigen::MatrixXd dz = (2.0 / b) * diff;
    for (std::size_t l = L; l-- > 0;) {
        (*grads)[l].w = dz.transpose() * acts[l];
        (*grads)[l].b = dz.colwise().sum().transpose();
        if (l > 0) {
            Eigen::MatrixXd da = dz * layers[l].w;
            dz = da.array() * (pre[l - 1].array() > 0.0).cast<double>();
        }
    }
    return loss;
}

}  // namespace

double MlpModel::loss_and_gradient(const Eigen::MatrixXd &standardized, const Eigen::VectorXd &y,
                                   std::vector<double> *grad) const {
    if (grad == nullptr) {
        return backprop(layers_, standardized, y, nullptr);
    }
    std::vector<DenseLayer> g;
    double loss = backprop(layers_, standardized, y, &g);
    grad->clear();
    for (const auto &l : g) {
        grad->insert(grad->end(), l.w.data(), l.w.data() + l.w.size());
        grad->insert(grad->end(), l.b.data(), l.b.data() + l.b.size());
    }
    return loss;
}

void MlpModel::train(const TrainingData &data, int epochs, std::uint64_t seed) {
    loss_history_.clear();
    if (data.size() == 0 || epochs <= 0) {
        return;
    }
    if (static_cast<std::size_t>(data.x.cols()) != width()) {
        throw std::invalid_argument("training data width does not match the network input");
    }
    Eigen::MatrixXd xs = standardize(data.x);
    const std::size_t n = data.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    for (std::size_t i = n; i > 1; i--) {
        std::swap(order[i - 1], order[rng.below(i)]);
    }
    std::size_t n_val = 0;
    if (config_.validation_fraction > 0.0 && n >= 10) {
        n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(config_.validation_fraction * n)));
    }
    std::vector<std::size_t> train_idx(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
    Eigen::MatrixXd xv(static_cast<Eigen::Index>(n_val), xs.cols());
    Eigen::VectorXd yv(static_cast<Eigen::Index>(n_val));
    for (std::size_t i = 0; i < n_val; i++) {
        xv.row(static_cast<Eigen::Index>(i)) = xs.row(static_cast<Eigen::Index>(order[i]));
        yv(static_cast<Eigen::Index>(i)) = data.y(static_cast<Eigen::Index>(order[i]));
    }

    std::vector<DenseLayer> m(layers_.size());
    std::vector<DenseLayer> v(layers_.size());
    for (std::size_t l = 0; l < layers_.size(); l++) {
        m[l].w = v[l].w = Eigen::MatrixXd::Zero(layers_[l].w.rows(), layers_[l].w.cols());
        m[l].b = v[l].b = Eigen::VectorXd::Zero(layers_[l].b.size());
    }
    long step = 0;
    double best_val = std::numeric_limits<double>::infinity();
    std::vector<DenseLayer> best = layers_;
    int since_best = 0;
    const std::size_t bs = static_cast<std::size_t>(config_.batch_size);
    std::vector<DenseLayer> g;
    for (int epoch = 0; epoch < epochs; epoch++) {
        for (std::size_t i = train_idx.size(); i > 1; i--) {
            std::swap(train_idx[i - 1], train_idx[rng.below(i)]);
        }
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < train_idx.size(); start += bs) {
            const std::size_t count = std::min(bs, train_idx.size() - start);
            Eigen::MatrixXd xb(static_cast<Eigen::Index>(count), xs.cols());
            Eigen::VectorXd yb(static_cast<Eigen::Index>(count));
            for (std::size_t k = 0; k < count; k++) {
                xb.row(static_cast<Eigen::Index>(k)) = xs.row(static_cast<Eigen::Index>(train_idx[start + k]));
                yb(static_cast<Eigen::Index>(k)) = data.y(static_cast<Eigen::Index>(train_idx[start + k]));
            }
            double loss = backprop(layers_, xb, yb, &g);
            if (!std::isfinite(loss)) {
                std::ostringstream msg;
                msg << "MLP loss became non-finite at epoch " << epoch << ", batch starting at row " << start
                    << " (learning rate " << config_.learning_rate << ")";
                throw std::runtime_error(msg.str());
            }
            epoch_loss += loss * static_cast<double>(count);
            step++;
            const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step));
            const double lr = config_.learning_rate;
            const double b1 = config_.beta1;
            const double b2 = config_.beta2;
            const double eps = config_.adam_eps;
            for (std::size_t l = 0; l < layers_.size(); l++) {
                m[l].w = b1 * m[l].w + (1 - b1) * g[l].w;
                v[l].w = b2 * v[l].w + (1 - b2) * g[l].w.cwiseProduct(g[l].w);
                m[l].b = b1 * m[l].b + (1 - b1) * g[l].b;
                v[l].b = b2 * v[l].b + (1 - b2) * g[l].b.cwiseProduct(g[l].b);
                layers_[l].w.array() -= lr * (m[l].w.array() / c1) / ((v[l].w.array() / c2).sqrt() + eps);
                layers_[l].b.array() -= lr * (m[l].b.array() / c1) / ((v[l].b.array() / c2).sqrt() + eps);
            }
        }
        loss_history_.push_back(train_idx.empty() ? 0.0 : epoch_loss / static_cast<double>(train_idx.size()));
        if (n_val > 0) {
            double val = backprop(layers_, xv, yv, nullptr);
            if (val < best_val) {
                best_val = val;
                best = layers_;
                since_best = 0;
            } else if (++since_best >= config_.patience) {
                break;
            }
        }
    }
    if (n_val > 0 && std::isfinite(best_val)) {
        layers_ = std::move(best);
    }
}

void MlpModel::to_json(json &out) const {
    json layers = json::array();
    for (const auto &l : layers_) {
        layers.push_back({{"rows", l.w.rows()},
                          {"cols", l.w.cols()},
                          {"w", std::vector<double>(l.w.data(), l.w.data() + l.w.size())},
                          {"b", to_vector(l.b)}});
    }
    out["layers"] = std::move(layers);
    out["mean"] = to_vector(mean_);
    out["scale"] = to_vector(scale_);
    out["config"] = mlp_config_to_json(config_);
}

MlpModel MlpModel::from_json(const json &in) {
    MlpModel m;
    m.config_ = mlp_config_from_json(in.at("config"));
    m.mean_ = to_eigen(in.at("mean").get<std::vector<double>>());
    m.scale_ = to_eigen(in.at("scale").get<std::vector<double>>());
    if (m.mean_.size() != m.scale_.size()) {
        throw FormatError("MLP json: mean and scale lengths differ");
    }
    Eigen::Index in_width = m.mean_.size();
    for (const auto &l : in.at("layers")) {
        DenseLayer layer;
        auto rows = l.at("rows").get<Eigen::Index>();
        auto cols = l.at("cols").get<Eigen::Index>();
        auto w = l.at("w").get<std::vector<double>>();
        auto b = l.at("b").get<std::vector<double>>();
        if (cols != in_width || static_cast<Eigen::Index>(w.size()) != rows * cols ||
            static_cast<Eigen::Index>(b.size()) != rows) {
            throw FormatError("MLP json: inconsistent layer shapes");
        }
        layer.w = Eigen::Map<Eigen::MatrixXd>(w.data(), rows, cols);
        layer.b = to_eigen(b);
        m.layers_.push_back(std::move(layer));
        in_width = rows;
    }
    if (m.layers_.empty() || in_width != 1) {
        throw FormatError("MLP json: network must end in a single output");
    }
    return m;
}

MlpModel fit_mlp(const TrainingData &data, const MlpConfig &config) {
    MlpModel model(data, config);
    model.train(data, config.epochs, derive_seed(config.seed, 1));
    return model;
}

MlpModel fine_tune(const MlpModel &model, const TrainingData &data, int epochs, std::uint64_t seed) {
    if (data.size() > 0 && static_cast<std::size_t>(data.x.cols()) != model.width()) {
        throw std::invalid_argument("fine-tuning data width does not match the model");
    }
    MlpModel tuned = model;
    tuned.train(data, epochs, seed);
    return tuned;
}

// ---------------------------------------------------------------------------------------------

json model_spec_to_json(const ModelSpec &spec) {
    return {{"kind", model_kind_name(spec.kind)},
            {"per_observable", spec.per_observable},
            {"rf", rf_config_to_json(spec.rf)},
            {"mlp", mlp_config_to_json(spec.mlp)}};
}

ModelSpec model_spec_from_json(const json &in) {
    ModelSpec s;
    if (in.contains("kind")) {
        s.kind = parse_model_kind(in.at("kind").get<std::string>());
    }
    s.per_observable = in.value("per_observable", s.per_observable);
    if (in.contains("rf")) {
        s.rf = rf_config_from_json(in.at("rf"));
    }
    if (in.contains("mlp")) {
        s.mlp = mlp_config_from_json(in.at("mlp"));
    }
    return s;
}

namespace {

std::shared_ptr<const Regressor> fit_regressor(const TrainingData &data, const ModelSpec &spec, std::uint64_t salt) {
    switch (spec.kind) {
        case ModelKind::Ols:
            return std::make_shared<OlsModel>(fit_ols(data));
        case ModelKind::RandomForest: {
            RfConfig c = spec.rf;
            c.seed = derive_seed(c.seed, salt);
            return std::make_shared<RandomForestModel>(fit_rf(data, c));
        }
        case ModelKind::Mlp: {
            MlpConfig c = spec.mlp;
            c.seed = derive_seed(c.seed, salt);
            return std::make_shared<MlpModel>(fit_mlp(data, c));
        }
    }
    throw std::logic_error("unknown model kind");
}

json regressor_json(const Regressor &r) {
    json j;
    r.to_json(j);
    return j;
}

std::shared_ptr<const Regressor> regressor_from_json(ModelKind kind, const json &j) {
    switch (kind) {
        case ModelKind::Ols:
            return std::make_shared<OlsModel>(OlsModel::from_json(j));
        case ModelKind::RandomForest:
            return std::make_shared<RandomForestModel>(RandomForestModel::from_json(j));
        case ModelKind::Mlp:
            return std::make_shared<MlpModel>(MlpModel::from_json(j));
    }
    throw std::logic_error("unknown model kind");
}

}  // namespace

MitigationModel MitigationModel::fit(const FeatureLayout &layout, std::span<const DatasetRow> rows,
                                     const ModelSpec &spec) {
    if (rows.empty()) {
        throw std::invalid_argument("cannot fit a mitigation model on an empty dataset");
    }
    for (const auto &r : rows) {
        if (r.features.size() != layout.width) {
            throw std::invalid_argument("dataset row width does not match the feature layout");
        }
    }
    MitigationModel m;
    m.spec_ = spec;
    m.fingerprint_ = layout.fingerprint();
    m.width_ = layout.width;
    if (!spec.per_observable) {
        m.shared_ = fit_regressor(TrainingData::from_rows(rows), spec, 0);
        return m;
    }
    std::map<std::string, std::vector<DatasetRow>> groups;
    for (const auto &r : rows) {
        groups[r.observable].push_back(r);
    }
    std::uint64_t k = 0;
    for (const auto &[obs, group] : groups) {
        m.per_observable_[obs] = fit_regressor(TrainingData::from_rows(group), spec, ++k);
    }
    return m;
}

double MitigationModel::predict(std::span<const double> features, const std::string &observable) const {
    if (features.size() != width_) {
        throw std::invalid_argument("feature width " + std::to_string(features.size()) +
                                    " does not match the model layout " + fingerprint_);
    }
    if (shared_) {
        return shared_->predict(features);
    }
    auto it = per_observable_.find(observable);
    if (it == per_observable_.end()) {
        throw std::invalid_argument("no per-observable model for " + observable);
    }
    return it->second->predict(features);
}

MitigationModel MitigationModel::fine_tuned(std::span<const DatasetRow> rows, int epochs, std::uint64_t seed) const {
    auto mlp = std::dynamic_pointer_cast<const MlpModel>(shared_);
    if (!mlp) {
        throw std::invalid_argument("fine-tuning needs a shared MLP model");
    }
    for (const auto &r : rows) {
        if (r.features.size() != width_) {
            throw std::invalid_argument("fine-tuning row width does not match the model layout");
        }
    }
    MitigationModel out = *this;
    out.shared_ = std::make_shared<MlpModel>(fine_tune(*mlp, TrainingData::from_rows(rows), epochs, seed));
    return out;
}

std::string MitigationModel::to_json() const {
    json j{{"format", "qemlab-model"},
           {"kind", model_kind_name(spec_.kind)},
           {"layout", fingerprint_},
           {"width", width_},
           {"config", model_spec_to_json(spec_)}};
    if (shared_) {
        j["model"] = regressor_json(*shared_);
    } else {
        json models = json::object();
        for (const auto &[obs, r] : per_observable_) {
            models[obs] = regressor_json(*r);
        }
        j["models"] = std::move(models);
    }
    return j.dump();
}

MitigationModel MitigationModel::from_json(std::string_view text) {
    try {
        json j = json::parse(text);
        MitigationModel m;
        m.spec_ = model_spec_from_json(j.at("config"));
        const ModelKind kind = parse_model_kind(j.at("kind").get<std::string>());
        if (kind != m.spec_.kind) {
            throw FormatError("model json kind does not match its config echo");
        }
        m.fingerprint_ = j.at("layout").get<std::string>();
        m.width_ = j.at("width").get<std::size_t>();
        auto check = [&](const std::shared_ptr<const Regressor> &r) {
            if (r->width() != m.width_) {
                throw FormatError("model json regressor width does not match the layout width");
            }
        };
        if (j.contains("model")) {
            m.shared_ = regressor_from_json(kind, j.at("model"));
            check(m.shared_);
        } else {
            for (const auto &[obs, r] : j.at("models").items()) {
                m.per_observable_[obs] = regressor_from_json(kind, r);
                check(m.per_observable_[obs]);
            }
        }
        return m;
    } catch (const json::exception &e) {
        throw FormatError(std::string("invalid model json: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw FormatError(std::string("invalid model json: ") + e.what());
    }
}

}  // namespace qemlab
