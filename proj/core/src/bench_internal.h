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

#ifndef QEMLAB_SRC_BENCH_INTERNAL_H
#define QEMLAB_SRC_BENCH_INTERNAL_H

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qemlab/bench.h"
#include "qemlab/circuit.h"
#include "qemlab/executor.h"
#include "qemlab/features.h"
#include "qemlab/pauli.h"
#include "qemlab/rng.h"

namespace qemlab::bench_detail {

/// Independent seed streams under the master seed.
enum Stream : std::uint64_t { kCircuits = 1, kExecution = 2, kModels = 3, kBootstrap = 4, kSampling = 5 };

inline std::uint64_t stream(std::uint64_t seed, Stream s, std::uint64_t sub = 0) {
    return derive_seed(derive_seed(seed, s), sub);
}

struct Record {
    std::string id;
    std::string regime;
    double bucket = 0.0;
    Circuit circuit{1};
    std::vector<PauliObservable> observables;
    std::vector<double> ideal;
    ExecutionResult noisy;
    /// Empty unless executed with ZNE.
    std::vector<double> zne;
};

struct Counts {
    std::uint64_t executions = 0;
    std::uint64_t instances = 0;
};

/// Fills ideal values and one execution per record (or one ZNE run, whose factor-1 result is
/// stored as `noisy`). Record i uses derive_seed(seed, i).
Counts execute(std::vector<Record> &records, Executor &executor, const ZneConfig *zne, int threads,
               std::uint64_t seed);

/// One row per (record, observable); targets are ideal values or ZNE outputs.
std::vector<DatasetRow> dataset(const std::vector<Record> &records, const FeatureLayout &layout,
                                const NoiseModel *feature_noise, bool zne_targets);

using NamedModels = std::vector<std::pair<std::string, MitigationModel>>;

ModelSpec model_spec(const ExperimentConfig &cfg, ModelKind kind, bool per_observable, std::uint64_t seed);
NamedModels fit_models(const ExperimentConfig &cfg, const FeatureLayout &layout, const std::vector<DatasetRow> &rows,
                       bool allow_per_observable, std::uint64_t seed);

std::vector<double> predict(const MitigationModel &model, const FeatureLayout &layout, const Record &r,
                            const NoiseModel *feature_noise);
std::vector<double> noisy_values(const Record &r);

/// Errors against the ideal for unmitigated, ZNE (when present) and every model.
void score(const std::vector<Record> &records, const NamedModels &models, const FeatureLayout &layout,
           const NoiseModel *feature_noise, const std::string &tier, std::vector<ErrorRecord> &out);

/// Groups by (tier, regime, method, bucket) in first-appearance order.
std::vector<MetricRow> aggregate(const std::vector<ErrorRecord> &errors, std::uint64_t seed);

/// Mean and bootstrap CI of every error matching the filters (empty string matches all).
nlohmann::json overall(const std::vector<ErrorRecord> &errors, const std::string &tier, const std::string &regime,
                       const std::string &method, std::uint64_t seed);
std::vector<double> select(const std::vector<ErrorRecord> &errors, const std::string &tier,
                           const std::string &regime, const std::string &method);

nlohmann::json overhead_json(const OverheadReport &r);

/// TFIM circuit with every weight-one observable of one random Pauli basis; J is drawn uniformly below h.
Record tfim_record(std::string id, std::string regime, int n_sites, int steps, double h,
                   const std::vector<int> &excitations, std::uint64_t seed);

FeatureConfig feature_config(const ExperimentConfig &cfg, int num_qubits);

}  // namespace qemlab::bench_detail

#endif
