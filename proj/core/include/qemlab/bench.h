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

#ifndef QEMLAB_BENCH_H
#define QEMLAB_BENCH_H

#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qemlab/features.h"
#include "qemlab/mitigation.h"
#include "qemlab/models.h"
#include "qemlab/noise_model.h"
#include "qemlab/optimize.h"

namespace qemlab {

enum class Experiment { Random, Trotter, UnseenPauli, Vqe, Mimicry, Drift };

std::string_view experiment_name(Experiment e);
/// Accepts random, trotter, unseen_pauli, vqe, mimicry, drift. Throws ConfigError.
Experiment parse_experiment(std::string_view name);

struct RandomParams {
    int num_qubits = 4;
    std::vector<int> depths{2, 4, 6, 8, 10};
    int train_per_depth = 100;
    int test_per_depth = 40;
};

struct TrotterParams {
    int n_sites = 4;
    double h = 1.0;
    /// Steps 1..max_train_step are trained on and tested as interpolation; later steps up to
    /// max_step are extrapolation.
    int max_train_step = 6;
    int max_step = 10;
    int train_per_step = 300;
    int test_per_step = 300;
    /// Any of incoherent, readout, coherent.
    std::vector<std::string> tiers{"incoherent", "readout", "coherent"};
    std::vector<int> initial_excitations{0};
};

struct UnseenPauliParams {
    int n_sites = 6;
    int steps = 5;
    double h = 1.0;
    double j_over_h = 0.15;
    /// Training share of all 4^n - 1 observables; values >= 1 evaluate on the training set.
    std::vector<double> fractions{0.005, 0.01, 0.02, 0.05, 0.1};
};

struct VqeParams {
    /// Random ansatz executions per training observable (XX and ZZ).
    int train_per_observable = 1000;
    double theta_range = 5.0;
    /// Empty means every bond length in the table.
    std::vector<double> bonds;
    /// Any of unmitigated, zne, rf.
    std::vector<std::string> methods{"unmitigated", "zne", "rf"};
    /// Bond table path; empty uses the bundled table.
    std::string bond_table;
    NelderMeadOptions optimizer{.max_evals = 600, .restarts = 2, .initial_step = 0.5, .ftol = 1e-9, .xtol = 1e-7};
};

struct MimicryParams {
    int n_sites = 8;
    double h = 0.66 * std::numbers::pi;
    int max_step = 10;
    int train_couplings = 10;
    int test_couplings = 40;
    /// Z is mitigated on qubits 0..observed_qubits-1.
    int observed_qubits = 5;
    double clifford_h = 0.5 * std::numbers::pi;
};

struct DriftParams {
    int n_sites = 4;
    double h = 1.0;
    int max_step = 8;
    int train_a = 2200;
    std::vector<int> sample_counts{0, 25, 50, 100, 150, 200, 300, 400, 600, 800};
    int test = 300;
    /// Converged means within this relative margin of the scratch MLP's final error.
    double tolerance = 0.1;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::Random;
    std::uint64_t seed = 0;
    std::uint64_t shots = 10000;
    NoiseModel noise = NoiseModel::preset("lima-like");
    /// Drift target noise.
    NoiseModel noise_b = NoiseModel::preset("belem-like");
    std::vector<ModelKind> models;
    /// One regressor per observable where the experiment allows it.
    bool per_observable = true;
    RfConfig rf;
    MlpConfig mlp;
    ZneConfig zne;
    int angle_bins = 8;
    bool noise_features = false;
    int threads = 1;

    RandomParams random;
    TrotterParams trotter;
    UnseenPauliParams unseen_pauli;
    VqeParams vqe;
    MimicryParams mimicry;
    DriftParams drift;
};

/// Experiment-specific defaults (model list, twirls in mimicry mode).
ExperimentConfig default_experiment_config(Experiment e, std::uint64_t seed);
/// `seed` and `experiment` are required; everything else defaults. Throws ConfigError.
ExperimentConfig experiment_config_from_json(const nlohmann::json &in);
nlohmann::json experiment_config_to_json(const ExperimentConfig &cfg);

struct MetricRow {
    std::string tier;
    std::string regime;
    std::string method;
    double bucket = 0.0;
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t n = 0;
};

struct ErrorRecord {
    std::string tier;
    std::string regime;
    std::string method;
    double bucket = 0.0;
    std::string circuit_id;
    double l2 = 0.0;
};

struct VqeRow {
    double bond = 0.0;
    double exact = 0.0;
    /// NaN when the method was not run.
    double unmitigated = 0.0;
    double zne = 0.0;
    double rf = 0.0;
    bool converged_unmitigated = false;
    bool converged_zne = false;
    bool converged_rf = false;
};

struct BenchResult {
    Experiment experiment = Experiment::Random;
    std::vector<MetricRow> metrics;
    std::vector<ErrorRecord> errors;
    std::vector<VqeRow> vqe;
    /// Experiment-specific scalars: overall means, p-values, execution ledger, overhead report.
    nlohmann::json summary = nlohmann::json::object();

    /// Throws std::out_of_range when absent.
    const MetricRow &metric(std::string_view tier, std::string_view regime, std::string_view method,
                            double bucket) const;
};

BenchResult run_random(const ExperimentConfig &cfg);
BenchResult run_trotter(const ExperimentConfig &cfg);
BenchResult run_unseen_pauli(const ExperimentConfig &cfg);
BenchResult run_vqe(const ExperimentConfig &cfg);
BenchResult run_mimicry(const ExperimentConfig &cfg);
BenchResult run_drift(const ExperimentConfig &cfg);
BenchResult run_experiment(const ExperimentConfig &cfg);

std::string metrics_to_csv(const std::vector<MetricRow> &rows);
std::string errors_to_csv(const std::vector<ErrorRecord> &rows);
std::string vqe_to_csv(const std::vector<VqeRow> &rows);

/// Writes config.json, summary.json, metrics.csv, errors.csv (and vqe.csv) plus SVG renderings
/// into `dir`, creating it if needed.
void write_bench_outputs(const BenchResult &result, const ExperimentConfig &cfg, const std::string &dir);

/// Directory holding the bundled bond table: $QEMLAB_DATA_DIR if set, else the build-time path.
std::string default_data_dir();

}  // namespace qemlab

#endif
