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

#include "qemlab/bench.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qemlab/errors.h"
#include "qemlab/generators.h"
#include "qemlab/pauli.h"
#include "qemlab/simulator.h"

namespace qemlab {
namespace {

using nlohmann::json;

ExperimentConfig small_random(std::uint64_t seed) {
    auto cfg = default_experiment_config(Experiment::Random, seed);
    cfg.random.depths = {2, 4};
    cfg.random.train_per_depth = 12;
    cfg.random.test_per_depth = 4;
    cfg.models = {ModelKind::Ols, ModelKind::RandomForest};
    cfg.rf.n_trees = 10;
    cfg.shots = 2000;
    return cfg;
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TEST(BenchConfig, JsonRoundTrip) {
    for (auto e : {Experiment::Random, Experiment::Trotter, Experiment::UnseenPauli, Experiment::Vqe,
                   Experiment::Mimicry, Experiment::Drift}) {
        auto cfg = default_experiment_config(e, 42);
        auto j = experiment_config_to_json(cfg);
        auto back = experiment_config_from_json(j);
        EXPECT_EQ(experiment_config_to_json(back), j) << experiment_name(e);
        EXPECT_EQ(parse_experiment(experiment_name(e)), e);
    }
}

TEST(BenchConfig, MinimalConfigUsesDefaults) {
    auto cfg = experiment_config_from_json(json{{"experiment", "mimicry"}, {"seed", 3}});
    EXPECT_EQ(cfg.seed, 3u);
    EXPECT_EQ(cfg.shots, 10000u);
    EXPECT_EQ(cfg.zne.twirls, 5);
    EXPECT_EQ(cfg.mimicry.n_sites, 8);
}

TEST(BenchConfig, PartialModelBlocksKeepExperimentDefaults) {
    auto cfg = experiment_config_from_json(
        json{{"experiment", "random"}, {"seed", 3}, {"rf", {{"n_trees", 50}}}, {"mlp", {{"epochs", 7}}}});
    EXPECT_EQ(cfg.rf.n_trees, 50);
    EXPECT_EQ(cfg.rf.max_features, -1);
    EXPECT_EQ(cfg.mlp.epochs, 7);
    EXPECT_EQ(cfg.mlp.hidden, MlpConfig{}.hidden);
    EXPECT_THROW(experiment_config_from_json(json{{"experiment", "random"}, {"seed", 3}, {"rf", 4}}), ConfigError);
}

TEST(BenchConfig, Rejections) {
    EXPECT_THROW(experiment_config_from_json(json{{"experiment", "random"}}), ConfigError);
    EXPECT_THROW(experiment_config_from_json(json{{"seed", 1}}), ConfigError);
    EXPECT_THROW(experiment_config_from_json(json{{"experiment", "qaoa"}, {"seed", 1}}), ConfigError);
    EXPECT_THROW(experiment_config_from_json(json{{"experiment", "random"}, {"seed", 1}, {"bogus", 1}}), ConfigError);
    EXPECT_THROW(experiment_config_from_json(
                     json{{"experiment", "random"}, {"seed", 1}, {"random", {{"train_per_depth", 0}}}}),
                 ConfigError);
    EXPECT_THROW(experiment_config_from_json(
                     json{{"experiment", "trotter"}, {"seed", 1}, {"trotter", {{"tiers", {"thermal"}}}}}),
                 ConfigError);
    EXPECT_THROW(experiment_config_from_json(
                     json{{"experiment", "drift"}, {"seed", 1}, {"drift", {{"sample_counts", {10, 5}}}}}),
                 ConfigError);
    EXPECT_THROW(experiment_config_from_json(json{{"experiment", "random"}, {"seed", 1}, {"zne", {{"factors", {1}}}}}),
                 ConfigError);
}

TEST(BenchRandom, DeterministicAndLedgerMatches) {
    auto cfg = small_random(7);
    auto a = run_random(cfg);
    auto b = run_random(cfg);
    EXPECT_EQ(metrics_to_csv(a.metrics), metrics_to_csv(b.metrics));
    EXPECT_EQ(errors_to_csv(a.errors), errors_to_csv(b.errors));
    EXPECT_EQ(a.summary.dump(), b.summary.dump());

    const auto &ledger = a.summary.at("ledger");
    EXPECT_EQ(ledger.at("executions"), ledger.at("analytic_executions"));
    EXPECT_EQ(ledger.at("instances"), ledger.at("analytic_instances"));
    EXPECT_EQ(ledger.at("executions").get<int>(), 24 + 2 * 8);

    // 2 depths x 4 methods.
    EXPECT_EQ(a.metrics.size(), 8u);
    for (const auto &row : a.metrics) {
        EXPECT_EQ(row.n, 4u);
        EXPECT_LE(row.ci_low, row.mean);
        EXPECT_GE(row.ci_high, row.mean);
        EXPECT_GE(row.ci_low, 0.0);
    }
    EXPECT_NO_THROW(a.metric(cfg.noise.name, "test", "rf", 4));
    EXPECT_THROW(a.metric(cfg.noise.name, "test", "rf", 3), std::out_of_range);
}

TEST(BenchRandom, SeedChangesOutput) {
    auto a = run_random(small_random(1));
    auto b = run_random(small_random(2));
    EXPECT_NE(errors_to_csv(a.errors), errors_to_csv(b.errors));
}

TEST(BenchRandom, ThreadCountDoesNotChangeOutput) {
    auto cfg = small_random(5);
    auto a = run_random(cfg);
    cfg.threads = 3;
    auto b = run_random(cfg);
    EXPECT_EQ(errors_to_csv(a.errors), errors_to_csv(b.errors));
}

TEST(BenchRandom, NoiseOffStaysAtShotNoiseFloor) {
    auto cfg = small_random(3);
    cfg.noise = NoiseModel::ideal();
    cfg.shots = 10000;
    cfg.random.train_per_depth = 150;
    cfg.random.test_per_depth = 10;
    cfg.per_observable = false;
    cfg.rf.n_trees = 50;
    auto r = run_random(cfg);
    const double floor = r.summary.at("shot_noise_floor").get<double>();
    EXPECT_DOUBLE_EQ(floor, std::sqrt(4.0 / 10000.0));
    for (const auto &[method, stats] : r.summary.at("overall").items()) {
        EXPECT_LE(stats.at("mean").get<double>(), 2.0 * floor) << method;
    }
}

TEST(BenchTrotter, RegimesAndLedger) {
    auto cfg = default_experiment_config(Experiment::Trotter, 11);
    cfg.trotter.max_train_step = 2;
    cfg.trotter.max_step = 3;
    cfg.trotter.train_per_step = 6;
    cfg.trotter.test_per_step = 2;
    cfg.trotter.tiers = {"incoherent", "coherent"};
    cfg.models = {ModelKind::RandomForest};
    cfg.rf.n_trees = 8;
    cfg.shots = 1000;
    auto r = run_trotter(cfg);
    const auto &ledger = r.summary.at("ledger");
    EXPECT_EQ(ledger.at("executions"), ledger.at("analytic_executions"));
    EXPECT_EQ(ledger.at("executions").get<int>(), 2 * (12 + 2 * 6));
    EXPECT_NO_THROW(r.metric("incoherent", "interp", "rf", 2));
    EXPECT_NO_THROW(r.metric("coherent", "extrap", "zne", 3));
    EXPECT_THROW(r.metric("readout", "interp", "rf", 1), std::out_of_range);
    EXPECT_THROW(r.metric("incoherent", "extrap", "rf", 2), std::out_of_range);
}

TEST(BenchTrotter, ZeroCouplingMatchesFactorizedOracle) {
    for (int steps = 1; steps <= 4; steps++) {
        TfimParams p;
        p.n_sites = 4;
        p.steps = steps;
        p.h = 0.37;
        p.J = 0.0;
        p.initial_excitations = {0, 2};
        auto rho = simulate(trotter_tfim(p));
        for (int q = 0; q < 4; q++) {
            double sign = (q == 0 || q == 2) ? -1.0 : 1.0;
            std::string s(4, 'I');
            s[static_cast<std::size_t>(q)] = 'Z';
            EXPECT_NEAR(expectation(rho, PauliObservable(s)), sign * std::cos(steps * 2 * p.h), 1e-9);
        }
    }
}

TEST(BenchUnseenPauli, CountsAndSanityMode) {
    EXPECT_EQ(all_pauli_observables(6).size(), 4095u);
    auto cfg = default_experiment_config(Experiment::UnseenPauli, 4);
    cfg.unseen_pauli.n_sites = 3;
    cfg.unseen_pauli.steps = 2;
    cfg.unseen_pauli.fractions = {0.25, 1.0};
    cfg.rf.n_trees = 20;
    cfg.shots = 4000;
    auto r = run_unseen_pauli(cfg);
    EXPECT_EQ(r.summary.at("observables").get<int>(), 63);
    const auto &curve = r.summary.at("curve");
    ASSERT_EQ(curve.size(), 2u);
    EXPECT_EQ(curve[0].at("train_observables").get<int>(), 16);
    EXPECT_EQ(curve[0].at("eval_observables").get<int>(), 47);
    EXPECT_EQ(curve[1].at("eval_observables").get<int>(), 63);
    // Evaluated on its own training set the forest sits well below the raw noisy error.
    EXPECT_LT(curve[1].at("rf").get<double>(), curve[1].at("unmitigated").get<double>());
    EXPECT_EQ(r.metric(cfg.noise.name, "train", "rf", 1.0).n, 63u);
    const auto &ledger = r.summary.at("ledger");
    EXPECT_EQ(ledger.at("executions"), ledger.at("analytic_executions"));
}

TEST(BenchMimicry, LedgerResidualsAndOverhead) {
    auto cfg = default_experiment_config(Experiment::Mimicry, 6);
    cfg.mimicry.n_sites = 3;
    cfg.mimicry.observed_qubits = 2;
    cfg.mimicry.max_step = 2;
    cfg.mimicry.train_couplings = 3;
    cfg.mimicry.test_couplings = 2;
    cfg.zne.twirls = 2;
    cfg.rf.n_trees = 8;
    cfg.shots = 1000;
    auto r = run_mimicry(cfg);
    const auto &ledger = r.summary.at("ledger");
    EXPECT_EQ(ledger.at("executions"), ledger.at("analytic_executions"));
    EXPECT_EQ(ledger.at("instances"), ledger.at("analytic_instances"));
    EXPECT_EQ(ledger.at("executions").get<int>(), 2 * (6 + 4 + 2));
    EXPECT_EQ(ledger.at("instances").get<int>(), 4 * (6 + 4 + 2));
    EXPECT_NO_THROW(r.metric(cfg.noise.name, "residual", "rf_vs_zne", 1));
    EXPECT_NO_THROW(r.metric(cfg.noise.name, "clifford", "zne", 2));
    EXPECT_NO_THROW(r.metric(cfg.noise.name, "ideal", "unmitigated", 2));
    const auto &o = r.summary.at("overhead");
    EXPECT_EQ(o.at("total_executions_ml").get<int>(), 2 * 6 + 4);
    EXPECT_EQ(o.at("total_executions_qem").get<int>(), 2 * 4);
}

TEST(BenchMimicry, FullScaleCountsOverhead) {
    auto o = overhead_report(100, 400, 2, true);
    EXPECT_DOUBLE_EQ(o.overall_reduction, 0.25);
    EXPECT_DOUBLE_EQ(o.runtime_reduction, 0.5);
}

TEST(BenchDrift, ZeroSamplesIsBaseModelAndCurvesExist) {
    auto cfg = default_experiment_config(Experiment::Drift, 8);
    cfg.drift.train_a = 30;
    cfg.drift.sample_counts = {0, 6, 12};
    cfg.drift.test = 6;
    cfg.drift.max_step = 3;
    cfg.mlp.hidden = {8};
    cfg.mlp.epochs = 20;
    cfg.rf.n_trees = 8;
    cfg.shots = 1000;
    auto r = run_drift(cfg);
    const std::string tier = cfg.noise.name + "->" + cfg.noise_b.name;
    EXPECT_NO_THROW(r.metric(tier, "test", "mlp_finetune", 0));
    EXPECT_THROW(r.metric(tier, "test", "mlp_scratch", 0), std::out_of_range);
    EXPECT_NO_THROW(r.metric(tier, "test", "mlp_scratch", 12));
    EXPECT_NO_THROW(r.metric(tier, "test", "rf_scratch", 6));
    const auto &conv = r.summary.at("convergence");
    EXPECT_TRUE(conv.contains("mlp_finetune"));
    EXPECT_TRUE(conv.contains("finetune_halves_samples"));
    const auto &ledger = r.summary.at("ledger");
    EXPECT_EQ(ledger.at("executions").get<int>(), 30 + 12 + 6);
    EXPECT_EQ(ledger.at("executions"), ledger.at("analytic_executions"));
}

TEST(BenchVqe, NoiselessPipelineReachesGroundEnergy) {
    auto cfg = default_experiment_config(Experiment::Vqe, 2);
    cfg.noise = NoiseModel::ideal();
    cfg.shots = 0;
    cfg.vqe.methods = {"unmitigated"};
    cfg.vqe.bonds = {0.735, 1.5};
    cfg.vqe.optimizer.max_evals = 3000;
    cfg.vqe.optimizer.restarts = 3;
    auto r = run_vqe(cfg);
    ASSERT_EQ(r.vqe.size(), 2u);
    for (const auto &row : r.vqe) {
        EXPECT_NEAR(row.unmitigated, row.exact, 1e-3) << row.bond;
        EXPECT_TRUE(std::isnan(row.rf));
    }
    EXPECT_EQ(r.summary.at("ledger").at("training_executions").get<int>(), 0);
}

TEST(BenchVqe, RfTrainingLedger) {
    auto cfg = default_experiment_config(Experiment::Vqe, 2);
    cfg.vqe.train_per_observable = 15;
    cfg.vqe.bonds = {0.735};
    cfg.vqe.methods = {"unmitigated", "rf"};
    cfg.vqe.optimizer.max_evals = 40;
    cfg.vqe.optimizer.restarts = 0;
    cfg.rf.n_trees = 8;
    cfg.shots = 500;
    auto r = run_vqe(cfg);
    const auto &ledger = r.summary.at("ledger");
    EXPECT_EQ(ledger.at("training_executions").get<int>(), 30);
    EXPECT_EQ(ledger.at("training_executions"), ledger.at("analytic_training_executions"));
    // Budgeted evaluations plus one re-evaluation per method.
    EXPECT_EQ(ledger.at("optimization_executions").get<int>(), 2 * 40 + 2);
    EXPECT_FALSE(std::isnan(r.vqe[0].rf));
    EXPECT_THROW(r.metric(cfg.noise.name, "vqe", "zne", 0.735), std::out_of_range);
}

TEST(BenchOutputs, WritesByteReproducibleFiles) {
    namespace fs = std::filesystem;
    auto cfg = small_random(9);
    auto dir = fs::temp_directory_path() / "qemlab_bench_test";
    fs::remove_all(dir);
    write_bench_outputs(run_random(cfg), cfg, (dir / "a").string());
    write_bench_outputs(run_random(cfg), cfg, (dir / "b").string());
    for (const char *f : {"config.json", "summary.json", "metrics.csv", "errors.csv", "metrics.svg", "errors.svg"}) {
        ASSERT_TRUE(fs::exists(dir / "a" / f)) << f;
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
    }
    EXPECT_FALSE(fs::exists(dir / "a" / "vqe.csv"));
    auto echoed = json::parse(slurp(dir / "a" / "config.json"));
    EXPECT_EQ(experiment_config_to_json(experiment_config_from_json(echoed)), experiment_config_to_json(cfg));
    fs::remove_all(dir);
}

TEST(BenchOutputs, CsvHeaders) {
    EXPECT_EQ(metrics_to_csv({}), "tier,regime,method,bucket,mean_l2,ci_low,ci_high,n\n");
    EXPECT_EQ(errors_to_csv({{"t", "r", "m", 2, "c", 0.25}}), "tier,regime,method,bucket,circuit_id,l2\nt,r,m,2,c,0.25\n");
}

}  // namespace
}  // namespace qemlab
