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

#ifndef QEMLAB_MODELS_H
#define QEMLAB_MODELS_H

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <nlohmann/json_fwd.hpp>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qemlab/features.h"

namespace qemlab {

enum class ModelKind { Ols, RandomForest, Mlp };

std::string_view model_kind_name(ModelKind kind);
/// Accepts "ols", "rf", "mlp".
ModelKind parse_model_kind(std::string_view name);

/// Design matrix (one row per sample) and targets.
struct TrainingData {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;

    static TrainingData from_rows(std::span<const DatasetRow> rows);
    std::size_t size() const {
        return static_cast<std::size_t>(y.size());
    }
};

/// Predictions of every model are clamped to this range.
double clamp_expectation(double value);

class Regressor {
   public:
    virtual ~Regressor() = default;
    virtual ModelKind kind() const = 0;
    virtual std::size_t width() const = 0;
    /// Unclamped model output. `x.size()` must equal width().
    virtual double predict_raw(std::span<const double> x) const = 0;
    virtual void to_json(nlohmann::json &out) const = 0;

    /// predict_raw followed by clamping; throws std::invalid_argument on a width mismatch.
    double predict(std::span<const double> x) const;
};

// ---------------------------------------------------------------------------------------------
// Ordinary least squares

class OlsModel final : public Regressor {
   public:
    OlsModel() = default;
    /// `weights` has one entry per feature followed by the intercept.
    explicit OlsModel(Eigen::VectorXd weights);

    ModelKind kind() const override {
        return ModelKind::Ols;
    }
    std::size_t width() const override {
        return static_cast<std::size_t>(weights_.size()) - 1;
    }
    double predict_raw(std::span<const double> x) const override;
    void to_json(nlohmann::json &out) const override;
    static OlsModel from_json(const nlohmann::json &in);

    const Eigen::VectorXd &weights() const {
        return weights_;
    }

   private:
    Eigen::VectorXd weights_ = Eigen::VectorXd::Zero(1);
};

/// Minimum-norm least-squares fit with an intercept (complete orthogonal decomposition).
OlsModel fit_ols(const TrainingData &data);

// ---------------------------------------------------------------------------------------------
// Random forest

struct RfConfig {
    int n_trees = 100;
    int min_split = 2;
    /// Features examined per split; 0 selects floor(sqrt(width)), negative selects all.
    int max_features = 1;
    /// 0 means unlimited.
    int max_depth = 0;
    bool bootstrap = true;
    std::uint64_t seed = 0;
    /// Worker threads for tree fitting; results do not depend on it.
    int threads = 1;
};

struct TreeNode {
    /// -1 marks a leaf.
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    /// Mean training target of the node.
    double value = 0.0;

    bool operator==(const TreeNode &) const = default;
};

using RegressionTree = std::vector<TreeNode>;

/// Fits one CART tree on the multiset of rows given by `sample` (indices into data). Samples
/// x <= threshold go left. The result does not depend on the order of `sample` or of the rows.
RegressionTree fit_tree(const TrainingData &data, std::span<const std::size_t> sample, const RfConfig &config,
                        std::uint64_t seed);
double predict_tree(const RegressionTree &tree, std::span<const double> x);

class RandomForestModel final : public Regressor {
   public:
    RandomForestModel() = default;
    RandomForestModel(std::size_t width, std::vector<RegressionTree> trees, RfConfig config);

    ModelKind kind() const override {
        return ModelKind::RandomForest;
    }
    std::size_t width() const override {
        return width_;
    }
    double predict_raw(std::span<const double> x) const override;
    void to_json(nlohmann::json &out) const override;
    static RandomForestModel from_json(const nlohmann::json &in);

    const std::vector<RegressionTree> &trees() const {
        return trees_;
    }
    const RfConfig &config() const {
        return config_;
    }

   private:
    std::size_t width_ = 0;
    std::vector<RegressionTree> trees_;
    RfConfig config_;
};

/// Tree t is grown on a bootstrap resample drawn with derive_seed(config.seed, t). When `oob`
/// is given it receives each row's out-of-bag prediction (NaN for rows drawn by every tree).
RandomForestModel fit_rf(const TrainingData &data, const RfConfig &config, std::vector<double> *oob = nullptr);

// ---------------------------------------------------------------------------------------------
// Multilayer perceptron

struct MlpConfig {
    std::vector<int> hidden = {64, 64};
    int epochs = 200;
    int batch_size = 32;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    /// Fraction of rows held out for early stopping; 0 disables it.
    double validation_fraction = 0.1;
    int patience = 20;
    std::uint64_t seed = 0;
};

struct DenseLayer {
    Eigen::MatrixXd w;  // out x in
    Eigen::VectorXd b;
};

class MlpModel final : public Regressor {
   public:
    MlpModel() = default;
    /// He-initialized network; standardization statistics come from `data`.
    MlpModel(const TrainingData &data, const MlpConfig &config);

    ModelKind kind() const override {
        return ModelKind::Mlp;
    }
    std::size_t width() const override {
        return static_cast<std::size_t>(mean_.size());
    }
    double predict_raw(std::span<const double> x) const override;
    void to_json(nlohmann::json &out) const override;
    static MlpModel from_json(const nlohmann::json &in);

    /// Network output for already standardized rows.
    Eigen::VectorXd forward(const Eigen::MatrixXd &standardized) const;
    Eigen::MatrixXd standardize(const Eigen::MatrixXd &x) const;

    /// Mean squared error over the batch; fills `grad` (same order as parameters()).
    double loss_and_gradient(const Eigen::MatrixXd &standardized, const Eigen::VectorXd &y,
                             std::vector<double> *grad) const;
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> params);
    std::size_t parameter_count() const;

    const MlpConfig &config() const {
        return config_;
    }
    /// Per-epoch training loss of the last fit or fine-tune.
    const std::vector<double> &loss_history() const {
        return loss_history_;
    }

    /// Runs Adam from fresh moments for up to `epochs` epochs; keeps the parameters with the
    /// best validation loss when a validation split is in use.
    void train(const TrainingData &data, int epochs, std::uint64_t seed);

   private:
    std::vector<DenseLayer> layers_;
    Eigen::VectorXd mean_;
    Eigen::VectorXd scale_;
    MlpConfig config_;
    std::vector<double> loss_history_;
};

MlpModel fit_mlp(const TrainingData &data, const MlpConfig &config);
/// Continues training `model` on new rows with fresh optimizer state. Standardization is kept.
MlpModel fine_tune(const MlpModel &model, const TrainingData &data, int epochs, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------------------------
// Mitigation model: one shared regressor, or one per observable.

struct ModelSpec {
    ModelKind kind = ModelKind::RandomForest;
    /// One regressor per observable string instead of one shared model.
    bool per_observable = false;
    RfConfig rf;
    MlpConfig mlp;
};

nlohmann::json model_spec_to_json(const ModelSpec &spec);
ModelSpec model_spec_from_json(const nlohmann::json &in);

class MitigationModel {
   public:
    MitigationModel() = default;

    /// Throws std::invalid_argument on an empty dataset.
    static MitigationModel fit(const FeatureLayout &layout, std::span<const DatasetRow> rows, const ModelSpec &spec);

    /// Clamped prediction for one encoded row. Throws when the observable has no per-observable
    /// regressor or the width differs from the layout.
    double predict(std::span<const double> features, const std::string &observable) const;

    ModelKind kind() const {
        return spec_.kind;
    }
    const ModelSpec &spec() const {
        return spec_;
    }
    const std::string &layout_fingerprint() const {
        return fingerprint_;
    }
    std::size_t width() const {
        return width_;
    }

    /// Drift workflow: fine-tunes the shared MLP on new rows.
    MitigationModel fine_tuned(std::span<const DatasetRow> rows, int epochs, std::uint64_t seed) const;

    std::string to_json() const;
    static MitigationModel from_json(std::string_view text);

   private:
    ModelSpec spec_;
    std::string fingerprint_;
    std::size_t width_ = 0;
    std::shared_ptr<const Regressor> shared_;
    std::map<std::string, std::shared_ptr<const Regressor>> per_observable_;
};

}  // namespace qemlab

#endif
