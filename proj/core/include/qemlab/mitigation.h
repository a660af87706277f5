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

#ifndef QEMLAB_MITIGATION_H
#define QEMLAB_MITIGATION_H

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qemlab/circuit.h"
#include "qemlab/executor.h"
#include "qemlab/features.h"
#include "qemlab/models.h"
#include "qemlab/noise_model.h"
#include "qemlab/pauli.h"

namespace qemlab {

enum class Extrapolation { Linear };

struct ZneConfig {
    /// Odd folding factors, ascending, starting at 1.
    std::vector<int> factors{1, 3};
    Extrapolation extrapolation = Extrapolation::Linear;
    /// Twirled instances averaged per factor; 0 runs the folded circuit as is.
    int twirls = 0;

    /// Throws ConfigError.
    void validate() const;
};

nlohmann::json zne_config_to_json(const ZneConfig &cfg);
ZneConfig zne_config_from_json(const nlohmann::json &in);

/// Least-squares line through (x, y), evaluated at x = 0.
double extrapolate_linear_to_zero(std::span<const double> x, std::span<const double> y);

struct ZneResult {
    std::map<std::string, double> mitigated;
    /// One (instance-averaged) execution per factor, in factor order.
    std::vector<ExecutionResult> per_factor;
};

/// One logical execution per factor. Expectations are extrapolated unclamped.
ZneResult zne_run(const Circuit &circuit, std::span<const PauliObservable> observables, Executor &executor,
                  const ZneConfig &cfg, std::uint64_t seed);
std::map<std::string, double> zne_mitigate(const Circuit &circuit, std::span<const PauliObservable> observables,
                                           Executor &executor, const ZneConfig &cfg, std::uint64_t seed);

enum class TargetSource { IdealSim, ZneMimic };

std::string_view target_source_name(TargetSource source);
TargetSource parse_target_source(std::string_view name);

struct ExecutionLedger {
    /// Logical executions submitted to the quantum executor.
    std::uint64_t executions = 0;
    /// Circuit instances behind them (twirls count individually).
    std::uint64_t instances = 0;
    /// Noiseless simulations used as targets; not quantum cost.
    std::uint64_t ideal_simulations = 0;

    ExecutionLedger &operator+=(const ExecutionLedger &other);
};

struct MlqemOptions {
    FeatureConfig features;
    TargetSource target_source = TargetSource::IdealSim;
    /// Used when target_source is ZneMimic; its factor-1 execution doubles as the feature run.
    ZneConfig zne;
    /// Noise scalars for the feature vector when the layout includes them.
    const NoiseModel *feature_noise = nullptr;
    std::string split = "train";
};

struct MlqemDataset {
    std::vector<DatasetRow> rows;
    /// Feature execution per circuit.
    std::vector<ExecutionResult> noisy;
    ExecutionLedger ledger;
};

/// Runs every circuit once (or once per ZNE factor in mimicry mode) and builds one row per
/// (circuit, target observable). `ids` names the circuits; empty means "c<index>".
/// Throws std::invalid_argument on an empty circuit set.
MlqemDataset mlqem_collect(std::span<const Circuit> circuits, std::span<const PauliObservable> targets,
                           Executor &executor, const MlqemOptions &options, std::uint64_t seed,
                           std::span<const std::string> ids = {});

struct MlqemTrained {
    MitigationModel model;
    MlqemDataset data;
};

MlqemTrained mlqem_train(std::span<const Circuit> circuits, std::span<const PauliObservable> targets,
                         Executor &executor, const MlqemOptions &options, const ModelSpec &spec,
                         std::uint64_t seed);

/// Encodes and predicts each observable from an existing execution; runs nothing.
/// Throws std::invalid_argument when `layout` is not the one the model was trained on.
std::map<std::string, double> mlqem_mitigate(const MitigationModel &model, const FeatureLayout &layout,
                                             const Circuit &circuit, std::span<const PauliObservable> observables,
                                             const ExecutionResult &noisy, const NoiseModel *noise);

struct OverheadReport {
    std::uint64_t total_executions_qem = 0;
    std::uint64_t total_executions_ml = 0;
    /// Negative when the training set is past the break-even point.
    double overall_reduction = 0.0;
    double runtime_reduction = 0.0;
    double breakeven_ratio = 0.0;
};

/// Cost of mimicking an m-execution method on n_test circuits versus training on n_train.
OverheadReport overhead_report(std::uint64_t n_train, std::uint64_t n_test, std::uint64_t m,
                               bool train_needs_mitigation);
double breakeven_ratio(std::uint64_t m);

enum class PecShotMode {
    /// N = 2 ln(2/delta) (gamma/eps)^2.
    Hoeffding,
    /// N = 4 (gamma/eps)^2, the shorthand for delta near 0.01; ignores delta.
    Approximate,
};

std::uint64_t pec_shot_bound(double gamma_total, double eps, double delta,
                             PecShotMode mode = PecShotMode::Hoeffding);

/// gamma_i = exp(sum_k 2 lambda_k) for one layer's Pauli-Lindblad rates.
double pec_layer_gamma(std::span<const double> lambdas);

struct PecRuntime {
    double seconds = 0.0;
    double log10_seconds = 0.0;
    /// Set when the value does not fit a double; `seconds` is then +inf.
    bool infeasible = false;
};

/// gamma_bar^(n l) * beta * l.
PecRuntime pec_runtime(int n, int l, double gamma_bar, double beta_seconds);

/// (r^2 e^(2 N eps) + e^(2 N r eps)) / (r - 1)^2 for two-point exponential extrapolation.
double zne_sampling_cost(std::uint64_t n_gates, double eps, double r);

}  // namespace qemlab

#endif
