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

#include "qemlab/mitigation.h"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "qemlab/errors.h"
#include "qemlab/generators.h"
#include "test_util.h"

namespace qemlab {
namespace {

int fold_factor_of(const Circuit &c) {
    auto it = c.metadata().find("fold_factor");
    return it == c.metadata().end() ? 1 : std::stoi(it->second);
}

/// Returns value(ideal, fold factor) for every observable, computed from the exact ideal state.
class SyntheticExecutor final : public Executor {
   public:
    using Signal = std::function<double(double ideal, int factor)>;

    explicit SyntheticExecutor(Signal signal) : signal_(std::move(signal)) {
    }

    ExecutionResult run(const Circuit &circuit, std::span<const PauliObservable> observables,
                        std::uint64_t seed) override {
        DensityMatrix rho = simulate(circuit);
        ExecutionResult r;
        r.seed = seed;
        for (const auto &obs : observables) {
            r.expectations[obs.paulis] = signal_(expectation(rho, obs), fold_factor_of(circuit));
        }
        return r;
    }

   private:
    Signal signal_;
};

/// Least-squares intercept from an Eigen QR solve of [1 f] c = y.
double lstsq_intercept(const std::vector<double> &f, const std::vector<double> &y) {
    Eigen::MatrixXd a(f.size(), 2);
    Eigen::VectorXd b(f.size());
    for (std::size_t i = 0; i < f.size(); i++) {
        a(i, 0) = 1.0;
        a(i, 1) = f[i];
        b(i) = y[i];
    }
    return a.colPivHouseholderQr().solve(b)(0);
}

TEST(ZneTest, ConfigValidation) {
    ZneConfig ok;
    EXPECT_NO_THROW(ok.validate());
    for (auto factors : {std::vector<int>{1}, {3, 5}, {1, 2}, {1, 5, 3}, {1, 1, 3}, {1, -3}}) {
        ZneConfig c;
        c.factors = factors;
        EXPECT_THROW(c.validate(), ConfigError);
    }
    ZneConfig neg;
    neg.twirls = -1;
    EXPECT_THROW(neg.validate(), ConfigError);
    ZneConfig custom;
    custom.factors = {1, 3, 5};
    custom.twirls = 5;
    auto back = zne_config_from_json(zne_config_to_json(custom));
    EXPECT_EQ(back.factors, custom.factors);
    EXPECT_EQ(back.twirls, 5);
    EXPECT_THROW(zne_config_from_json(nlohmann::json{{"extrapolation", "exponential"}}), ConfigError);
}

TEST(ZneTest, TwoPointExtrapolationMatchesClosedForm) {
    std::vector<double> f = {1.0, 3.0};
    EXPECT_NEAR(extrapolate_linear_to_zero(f, std::vector{0.8, 0.5}), 0.95, 1e-12);
    Rng rng(3);
    for (int i = 0; i < 200; i++) {
        double e1 = rng.uniform(-1.0, 1.0);
        double e3 = rng.uniform(-1.0, 1.0);
        EXPECT_NEAR(extrapolate_linear_to_zero(f, std::vector{e1, e3}), (3 * e1 - e3) / 2, 1e-12);
    }
    std::vector<double> f5 = {1.0, 3.0, 5.0, 7.0};
    std::vector<double> y5 = {0.9, 0.71, 0.52, 0.40};
    EXPECT_NEAR(extrapolate_linear_to_zero(f5, y5), lstsq_intercept(f5, y5), 1e-12);
    EXPECT_THROW(extrapolate_linear_to_zero(std::vector{1.0}, std::vector{1.0}), std::invalid_argument);
    EXPECT_THROW(extrapolate_linear_to_zero(std::vector{2.0, 2.0}, std::vector{1.0, 0.0}), std::invalid_argument);
}

TEST(ZneTest, FlatSignalIsReturnedUnchanged) {
    SyntheticExecutor exec([](double, int) { return 0.37; });
    Circuit c = testing::random_native_circuit(2, 20, 5);
    auto m = zne_mitigate(c, std::vector{PauliObservable("ZI")}, exec, {}, 1);
    EXPECT_NEAR(m.at("ZI"), 0.37, 1e-12);
}

TEST(ZneTest, LinearSignalRecoveredExactly) {
    const double b = 0.07;
    SyntheticExecutor exec([b](double ideal, int f) { return ideal - b * f; });
    Circuit c = testing::random_native_circuit(3, 30, 8);
    auto obs = all_pauli_observables(3);
    DensityMatrix rho = simulate(c);
    for (auto factors : {std::vector<int>{1, 3}, {1, 3, 5}, {1, 5, 7, 9}}) {
        ZneConfig cfg;
        cfg.factors = factors;
        auto m = zne_mitigate(c, obs, exec, cfg, 2);
        for (const auto &o : obs) {
            EXPECT_NEAR(m.at(o.paulis), expectation(rho, o), 1e-12) << o.paulis;
        }
    }
}

TEST(ZneTest, ExponentialDecayLeavesAnalyticBias) {
    const double k = 0.15;
    SyntheticExecutor exec([k](double ideal, int f) { return ideal * std::exp(-k * f); });
    Circuit c(1);
    ZneConfig cfg;
    cfg.factors = {1, 3, 5};
    auto m = zne_mitigate(c, std::vector{PauliObservable("Z")}, exec, cfg, 0);
    std::vector<double> f = {1.0, 3.0, 5.0};
    std::vector<double> y;
    for (double x : f) {
        y.push_back(std::exp(-k * x));
    }
    double bias = lstsq_intercept(f, y) - 1.0;
    EXPECT_LT(bias, -1e-3);
    EXPECT_NEAR(m.at("Z") - 1.0, bias, 1e-12);
}

TEST(ZneTest, CountsOneExecutionPerFactorAndTwirlInstances) {
    auto ideal = make_ideal_executor();
    CountingExecutor counting(ideal);
    Circuit c = trotter_tfim({.n_sites = 3, .steps = 2, .J = 0.3, .h = 0.7});
    ZneConfig cfg;
    cfg.factors = {1, 3, 5};
    cfg.twirls = 4;
    auto obs = weight_one_observables(3, Basis::Z);
    auto r = zne_run(c, obs, counting, cfg, 9);
    EXPECT_EQ(counting.executions(), 3u);
    EXPECT_EQ(counting.instances(), 12u);
    ASSERT_EQ(r.per_factor.size(), 3u);
    DensityMatrix rho = simulate(c);
    for (const auto &o : obs) {
        EXPECT_NEAR(r.mitigated.at(o.paulis), expectation(rho, o), 1e-10);
    }
    auto again = zne_run(c, obs, counting, cfg, 9);
    EXPECT_EQ(again.mitigated, r.mitigated);
}

TEST(ZneTest, TwirledNoisyZneMovesTowardIdeal) {
    NoiseModel noise = NoiseModel::preset("lima-like");
    noise.readout_enabled = false;
    SimulatorExecutor exec(noise, 0);
    Circuit c = trotter_tfim({.n_sites = 4, .steps = 3, .J = 0.0, .h = 0.5 * std::numbers::pi});
    ASSERT_TRUE(is_clifford(c));
    auto obs = weight_one_observables(4, Basis::Z);
    ZneConfig cfg;
    cfg.twirls = 5;
    auto r = zne_run(c, obs, exec, cfg, 4);
    DensityMatrix rho = simulate(c);
    double err_noisy = 0.0;
    double err_zne = 0.0;
    for (const auto &o : obs) {
        double ideal = expectation(rho, o);
        err_noisy += std::pow(r.per_factor[0].at(o) - ideal, 2);
        err_zne += std::pow(r.mitigated.at(o.paulis) - ideal, 2);
    }
    EXPECT_LT(err_zne, err_noisy);
}

TEST(MlqemTest, RejectsEmptyInputs) {
    auto ideal = make_ideal_executor();
    std::vector<Circuit> none;
    auto obs = weight_one_observables(2, Basis::Z);
    EXPECT_THROW(mlqem_collect(none, obs, ideal, {}, 0), std::invalid_argument);
    std::vector<Circuit> one = {Circuit(2)};
    EXPECT_THROW(mlqem_collect(one, std::vector<PauliObservable>{}, ideal, {}, 0), std::invalid_argument);
}

TEST(MlqemTest, IdealTargetsAndLedger) {
    SimulatorExecutor exec(NoiseModel::preset("lima-like"), 4000);
    std::vector<Circuit> circuits;
    for (int i = 0; i < 6; i++) {
        circuits.push_back(random_circuit(3, 4, 100 + i));
    }
    auto obs = weight_one_observables(3, Basis::Z);
    MlqemOptions opt;
    opt.features.num_qubits = 3;
    auto data = mlqem_collect(circuits, obs, exec, opt, 7);
    ASSERT_EQ(data.rows.size(), 18u);
    EXPECT_EQ(data.ledger.executions, 6u);
    EXPECT_EQ(data.ledger.instances, 6u);
    EXPECT_EQ(data.ledger.ideal_simulations, 6u);
    FeatureLayout layout(opt.features);
    for (std::size_t i = 0; i < data.rows.size(); i++) {
        const auto &row = data.rows[i];
        const Circuit &c = circuits[i / 3];
        EXPECT_EQ(row.circuit_id, "c" + std::to_string(i / 3));
        EXPECT_EQ(row.features.size(), layout.width);
        EXPECT_GE(row.target, -1.0);
        EXPECT_LE(row.target, 1.0);
        EXPECT_NEAR(row.target, expectation(simulate(c), PauliObservable(row.observable)), 1e-12);
        EXPECT_EQ(row.noisy, row.features[layout.noisy_target]);
    }
    auto again = mlqem_collect(circuits, obs, exec, opt, 7);
    EXPECT_EQ(again.rows, data.rows);
}

TEST(MlqemTest, MimicryTargetsEqualZneOutputs) {
    NoiseModel noise = NoiseModel::preset("belem-like");
    SimulatorExecutor exec(noise, 10000);
    std::vector<Circuit> circuits;
    for (int i = 0; i < 3; i++) {
        circuits.push_back(trotter_tfim({.n_sites = 3, .steps = i + 1, .J = 0.0, .h = 0.5 * std::numbers::pi}));
    }
    auto obs = weight_one_observables(3, Basis::Z);
    MlqemOptions opt;
    opt.features.num_qubits = 3;
    opt.target_source = TargetSource::ZneMimic;
    opt.zne.twirls = 5;
    auto data = mlqem_collect(circuits, obs, exec, opt, 11);
    EXPECT_EQ(data.ledger.executions, 6u);
    EXPECT_EQ(data.ledger.instances, 30u);
    EXPECT_EQ(data.ledger.ideal_simulations, 0u);
    auto measured = required_observables(obs);
    for (std::size_t i = 0; i < circuits.size(); i++) {
        auto z = zne_run(circuits[i], measured, exec, opt.zne, derive_seed(11, i));
        EXPECT_EQ(data.noisy[i].expectations, z.per_factor[0].expectations);
        for (std::size_t j = 0; j < obs.size(); j++) {
            EXPECT_EQ(data.rows[i * 3 + j].target, z.mitigated.at(obs[j].paulis));
        }
    }
}

/// OLS model whose only non-zero weight is 1 on the noisy-target slot.
MitigationModel identity_ols(const FeatureLayout &layout) {
    std::vector<DatasetRow> rows(3);
    for (std::size_t i = 0; i < rows.size(); i++) {
        rows[i].observable = "ZI";
        rows[i].features.assign(layout.width, static_cast<double>(i));
        rows[i].target = 0.1 * i;
    }
    ModelSpec spec;
    spec.kind = ModelKind::Ols;
    auto j = nlohmann::json::parse(MitigationModel::fit(layout, rows, spec).to_json());
    std::vector<double> w(layout.width + 1, 0.0);
    w[layout.noisy_target] = 1.0;
    j["model"]["weights"] = w;
    return MitigationModel::from_json(j.dump());
}

TEST(MlqemTest, IdentityModelReturnsNoisyValues) {
    FeatureLayout layout(FeatureConfig{.num_qubits = 2});
    MitigationModel model = identity_ols(layout);
    SimulatorExecutor exec(NoiseModel::preset("lima-like"), 2000);
    Circuit c = random_circuit(2, 5, 3);
    auto obs = std::vector{PauliObservable("ZI"), PauliObservable("XX"), PauliObservable("YZ")};
    auto noisy = exec.run(c, required_observables(obs), 5);
    auto m = mlqem_mitigate(model, layout, c, obs, noisy, nullptr);
    for (const auto &o : obs) {
        EXPECT_EQ(m.at(o.paulis), noisy.at(o));
    }
    FeatureLayout other(FeatureConfig{.num_qubits = 2, .angle_bins = 4});
    EXPECT_THROW(mlqem_mitigate(model, other, c, obs, noisy, nullptr), std::invalid_argument);
}

TEST(MlqemTest, OlsRemovesLayeredDepolarizingDamping) {
    // Every circuit is damped by the same factor, so ideal = noisy / (1 - p) is exactly affine.
    const double keep = 0.6;
    SyntheticExecutor exec([keep](double ideal, int) { return keep * ideal; });
    std::vector<Circuit> train;
    std::vector<Circuit> test;
    for (int i = 0; i < 40; i++) {
        train.push_back(random_circuit(3, 4, 500 + i));
        test.push_back(random_circuit(3, 4, 900 + i));
    }
    auto obs = weight_one_observables(3, Basis::Z);
    MlqemOptions opt;
    opt.features.num_qubits = 3;
    ModelSpec spec;
    spec.kind = ModelKind::Ols;
    auto trained = mlqem_train(train, obs, exec, opt, spec, 1);
    FeatureLayout layout(opt.features);
    int damped = 0;
    int better = 0;
    for (std::size_t i = 0; i < test.size(); i++) {
        auto noisy = exec.run(test[i], required_observables(obs), 0);
        auto m = mlqem_mitigate(trained.model, layout, test[i], obs, noisy, nullptr);
        DensityMatrix rho = simulate(test[i]);
        double e_raw = 0.0;
        double e_ml = 0.0;
        for (const auto &o : obs) {
            double ideal = expectation(rho, o);
            e_raw += std::pow(noisy.at(o) - ideal, 2);
            e_ml += std::pow(m.at(o.paulis) - ideal, 2);
            EXPECT_LE(std::abs(m.at(o.paulis)), 1.0);
        }
        if (e_raw > 1e-12) {
            damped++;
            better += e_ml < e_raw ? 1 : 0;
        }
    }
    ASSERT_GT(damped, 10);
    EXPECT_GE(better, 0.9 * damped);
}

TEST(OverheadTest, ReproducesPublishedScenarios) {
    auto a = overhead_report(500, 2500, 2, false);
    EXPECT_EQ(a.total_executions_qem, 5000u);
    EXPECT_EQ(a.total_executions_ml, 3000u);
    EXPECT_EQ(a.overall_reduction, 0.4);
    EXPECT_EQ(a.runtime_reduction, 0.5);
    EXPECT_EQ(a.breakeven_ratio, 0.5);
    auto b = overhead_report(100, 400, 2, true);
    EXPECT_EQ(b.total_executions_qem, 800u);
    EXPECT_EQ(b.total_executions_ml, 600u);
    EXPECT_EQ(b.overall_reduction, 0.25);
    EXPECT_EQ(b.runtime_reduction, 0.5);
    EXPECT_EQ(breakeven_ratio(2), 0.5);
    EXPECT_EQ(breakeven_ratio(3), 2.0 / 3.0);
    EXPECT_THROW(overhead_report(0, 1, 2, false), std::invalid_argument);
}

TEST(OverheadTest, BreakevenSplitEqualizesCost) {
    for (std::uint64_t m = 2; m <= 5; m++) {
        // Train share of all circuits equal to (m - 1) / m, with ideal targets.
        auto r = overhead_report((m - 1) * 1000, 1000, m, false);
        EXPECT_EQ(r.breakeven_ratio, static_cast<double>((m - 1) * 1000) / (m * 1000));
        EXPECT_EQ(r.total_executions_ml, r.total_executions_qem);
        EXPECT_EQ(r.overall_reduction, 0.0);
    }
    EXPECT_LT(overhead_report(1100, 1000, 2, false).overall_reduction, 0.0);
}

TEST(CostTest, PecShotBound) {
    EXPECT_EQ(pec_shot_bound(1.0, 1.0, 2.0 / std::exp(2.0)), 4u);
    double expected = 2.0 * std::log(200.0) * 1e6;
    EXPECT_EQ(pec_shot_bound(10.0, 0.01, 0.01), static_cast<std::uint64_t>(std::ceil(expected)));
    EXPECT_NEAR(static_cast<double>(pec_shot_bound(10.0, 0.01, 0.01)), 1.0597e7, 1e3);
    EXPECT_EQ(pec_shot_bound(10.0, 0.01, 0.01, PecShotMode::Approximate), 4000000u);
    for (double g = 1.0; g < 40.0; g *= 1.7) {
        double n1 = static_cast<double>(pec_shot_bound(g, 0.01, 0.05));
        double n2 = static_cast<double>(pec_shot_bound(2 * g, 0.01, 0.05));
        EXPECT_NEAR(n2 / n1, 4.0, 1e-4) << g;
    }
    EXPECT_THROW(pec_shot_bound(0.5, 0.1, 0.1), std::invalid_argument);
    EXPECT_THROW(pec_shot_bound(1.0, 0.0, 0.1), std::invalid_argument);
    EXPECT_THROW(pec_shot_bound(1.0, 0.1, 1.0), std::invalid_argument);
}

TEST(CostTest, PecRuntime) {
    auto r = pec_runtime(10, 10, 1.02, 1.0 / 5000);
    double oracle = std::exp(100 * std::log(1.02)) * 10 / 5000;
    EXPECT_NEAR(r.seconds / oracle, 1.0, 1e-12);
    EXPECT_NEAR(r.seconds, 1.449e-2, 1e-5);
    EXPECT_NEAR(r.log10_seconds, std::log10(oracle), 1e-12);
    EXPECT_FALSE(r.infeasible);
    EXPECT_DOUBLE_EQ(pec_runtime(50, 7, 1.0, 0.25).seconds, 0.25 * 7);
    double prev = 0.0;
    for (int n = 1; n <= 100; n += 9) {
        double s = pec_runtime(n, 20, 1.02, 2e-4).seconds;
        EXPECT_GT(s, prev);
        prev = s;
    }
    prev = 0.0;
    for (int l = 1; l <= 100; l += 9) {
        double s = pec_runtime(20, l, 1.02, 2e-4).seconds;
        EXPECT_GT(s, prev);
        prev = s;
    }
    auto huge = pec_runtime(1000, 1000, 1.04, 2e-4);
    EXPECT_TRUE(huge.infeasible);
    EXPECT_TRUE(std::isinf(huge.seconds));
    EXPECT_NEAR(huge.log10_seconds, 1e6 * std::log10(1.04) + std::log10(0.2), 1e-6);
}

TEST(CostTest, LayerGamma) {
    EXPECT_EQ(pec_layer_gamma(std::vector<double>{}), 1.0);
    EXPECT_NEAR(pec_layer_gamma(std::vector{0.01, 0.02}), std::exp(0.06), 1e-15);
    EXPECT_THROW(pec_layer_gamma(std::vector{-0.1}), std::invalid_argument);
}

TEST(CostTest, ZneSamplingCost) {
    EXPECT_EQ(zne_sampling_cost(0, 0.0, 3.0), 2.5);
    EXPECT_EQ(zne_sampling_cost(1000, 0.0, 3.0), 2.5);
    EXPECT_NEAR(zne_sampling_cost(100, 0.01, 3.0), (9 * std::exp(2.0) + std::exp(6.0)) / 4, 1e-12);
    EXPECT_NEAR(zne_sampling_cost(100, 0.01, 3.0), 117.48, 5e-3);
    EXPECT_GT(zne_sampling_cost(10, 0.0, 1.001), 1e5);
    EXPECT_THROW(zne_sampling_cost(10, 0.0, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace qemlab
