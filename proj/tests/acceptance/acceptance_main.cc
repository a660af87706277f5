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

// Acceptance checks for the benchmark suite. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "qemlab/bench.h"
#include "qemlab/density_matrix.h"
#include "qemlab/executor.h"
#include "qemlab/features.h"
#include "qemlab/generators.h"
#include "qemlab/metrics.h"
#include "qemlab/mitigation.h"
#include "qemlab/models.h"
#include "qemlab/rng.h"
#include "qemlab/simulator.h"
#include "../unit/test_util.h"

namespace {

using namespace qemlab;
using nlohmann::json;
using qemlab::testing::StateVector;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------------------------------------
// 1. Layered depolarizing oracle.

void criterion_1(Outcome &o) {
    Rng rng(101);
    double worst = 0.0;
    int checked = 0;
    for (int c = 0; c < 50; c++) {
        const int n = 1 + static_cast<int>(rng.below(6));
        const int layers = 1 + static_cast<int>(rng.below(12));
        std::vector<Circuit> parts;
        std::vector<double> rates;
        Circuit whole(n);
        double keep = 1.0;
        for (int l = 0; l < layers; l++) {
            parts.push_back(qemlab::testing::random_native_circuit(n, 2 + static_cast<int>(rng.below(6)),
                                                                   derive_seed(202, 100 * c + l)));
            whole.extend(parts.back());
            rates.push_back(0.1 * rng.uniform());
            keep *= 1.0 - rates.back();
        }
        DensityMatrix rho = simulate_layered(parts, rates);
        StateVector sv(n);
        sv.run(whole);
        std::vector<PauliObservable> paulis = weight_one_observables(n, Basis::Z);
        for (int k = 0; k < 20; k++) {
            paulis.push_back(qemlab::testing::random_traceless_pauli(n, rng));
        }
        for (const auto &p : paulis) {
            worst = std::max(worst, std::abs(expectation(rho, p) - keep * sv.expect(p)));
            checked++;
        }
    }
    o.detail << "max deviation " << fmt(worst) << " over " << checked << " Pauli checks";
    o.require(worst <= 1e-9, "deviation <= 1e-9");
}

// ---------------------------------------------------------------------------------------------
// 2. OLS under layered depolarizing noise sits at the shot-noise floor.

struct LayeredSample {
    Circuit circuit{1};
    std::vector<double> ideal;
    std::vector<double> exact_noisy;
    ExecutionResult sampled;
};

LayeredSample layered_sample(int n, int layers, double rate, std::uint64_t shots, std::uint64_t seed) {
    std::vector<Circuit> parts;
    std::vector<double> rates(static_cast<std::size_t>(layers), rate);
    LayeredSample s;
    s.circuit = Circuit(n);
    for (int l = 0; l < layers; l++) {
        parts.push_back(random_circuit(n, 1, derive_seed(seed, l)));
        s.circuit.extend(parts.back());
    }
    DensityMatrix rho = simulate_layered(parts, rates);
    StateVector sv(n);
    sv.run(s.circuit);
    const auto obs = weight_one_observables(n, Basis::Z);
    for (const auto &p : obs) {
        s.ideal.push_back(sv.expect(p));
        s.exact_noisy.push_back(expectation(rho, p));
    }
    s.sampled = sample_counts(rho, shots, nullptr, derive_seed(seed, 999), obs);
    return s;
}

void criterion_2(Outcome &o) {
    const int n = 4;
    const double rate = 0.04;
    const std::uint64_t shots = 10000;
    const auto obs = weight_one_observables(n, Basis::Z);
    FeatureLayout layout(FeatureConfig{n, 8, false});
    ModelSpec spec;
    spec.kind = ModelKind::Ols;
    std::uint64_t idx = 0;
    for (int depth : {2, 4, 6, 8, 10}) {
        std::vector<DatasetRow> rows;
        for (int i = 0; i < 200; i++) {
            auto s = layered_sample(n, depth, rate, shots, derive_seed(303, idx++));
            for (std::size_t q = 0; q < obs.size(); q++) {
                DatasetRow r;
                r.observable = obs[q].paulis;
                r.features = encode(s.circuit, obs[q], s.sampled, nullptr, layout);
                r.noisy = s.sampled.at(obs[q]);
                r.target = s.ideal[q];
                rows.push_back(std::move(r));
            }
        }
        auto model = MitigationModel::fit(layout, rows, spec);
        const double f = std::pow(1.0 - rate, depth);
        double err = 0.0;
        double floor = 0.0;
        const int tests = 100;
        for (int i = 0; i < tests; i++) {
            auto s = layered_sample(n, depth, rate, shots, derive_seed(404, idx++));
            std::vector<double> pred;
            double var = 0.0;
            for (std::size_t q = 0; q < obs.size(); q++) {
                pred.push_back(model.predict(encode(s.circuit, obs[q], s.sampled, nullptr, layout), obs[q].paulis));
                var += (1.0 - s.exact_noisy[q] * s.exact_noisy[q]) / static_cast<double>(shots);
            }
            err += l2_error(pred, s.ideal) / tests;
            // Standard deviation of the rescaled estimator noisy / f.
            floor += std::sqrt(var) / f / tests;
        }
        o.detail << "d" << depth << " " << fmt(err) << "/" << fmt(floor) << " ";
        o.require(err <= 1.5 * floor, "depth " + std::to_string(depth) + " error <= 1.5x floor");
    }
}

// ---------------------------------------------------------------------------------------------
// 3. ZNE algebra, exact recovery of a linear signal, noiseless folding and twirling.

int fold_factor_of(const Circuit &c) {
    auto it = c.metadata().find("fold_factor");
    return it == c.metadata().end() ? 1 : std::stoi(it->second);
}

class LinearDecayExecutor final : public Executor {
   public:
    explicit LinearDecayExecutor(double slope) : slope_(slope) {
    }
    ExecutionResult run(const Circuit &circuit, std::span<const PauliObservable> observables,
                        std::uint64_t seed) override {
        StateVector sv(circuit.num_qubits());
        sv.run(circuit);
        ExecutionResult r;
        r.seed = seed;
        const double scale = 1.0 - slope_ * fold_factor_of(circuit);
        for (const auto &obs : observables) {
            r.expectations[obs.paulis] = scale * sv.expect(obs);
        }
        return r;
    }

   private:
    double slope_;
};

void criterion_3(Outcome &o) {
    Rng rng(505);
    double algebra = 0.0;
    for (int k = 0; k < 1000; k++) {
        const double e1 = rng.uniform(-1, 1);
        const double e3 = rng.uniform(-1, 1);
        const std::vector<double> x{1.0, 3.0};
        const std::vector<double> y{e1, e3};
        algebra = std::max(algebra, std::abs(extrapolate_linear_to_zero(x, y) - (3 * e1 - e3) / 2));
    }
    o.require(algebra <= 1e-12, "least squares equals (3E1-E3)/2");

    LinearDecayExecutor exec(0.07);
    double recovery = 0.0;
    double invariance = 0.0;
    for (int c = 0; c < 20; c++) {
        const int n = 2 + c % 3;
        Circuit circ = random_circuit(n, 3, derive_seed(506, c));
        auto obs = weight_one_observables(n, Basis::Z);
        for (int t = 0; t < 5; t++) {
            obs.push_back(qemlab::testing::random_traceless_pauli(n, rng));
        }
        StateVector sv(n);
        sv.run(circ);
        for (const std::vector<int> &factors : {std::vector<int>{1, 3}, std::vector<int>{1, 3, 5}}) {
            ZneConfig cfg;
            cfg.factors = factors;
            auto z = zne_mitigate(circ, obs, exec, cfg, 1);
            for (const auto &p : obs) {
                recovery = std::max(recovery, std::abs(z.at(p.paulis) - sv.expect(p)));
            }
        }
        std::vector<Circuit> variants{fold_two_qubit_gates(circ, 3), fold_two_qubit_gates(circ, 5)};
        for (std::uint64_t s = 0; s < 4; s++) {
            variants.push_back(pauli_twirl(circ, derive_seed(507, 10 * c + s)));
        }
        for (const auto &v : variants) {
            DensityMatrix rho = simulate(v);
            for (const auto &p : obs) {
                invariance = std::max(invariance, std::abs(expectation(rho, p) - sv.expect(p)));
            }
        }
    }
    o.detail << "algebra " << fmt(algebra) << ", linear recovery " << fmt(recovery) << ", fold/twirl "
             << fmt(invariance);
    o.require(recovery <= 1e-12, "linear signal recovered");
    o.require(invariance <= 1e-10, "noiseless invariance");
}

// ---------------------------------------------------------------------------------------------
// 4. Overhead accounting.

void criterion_4(Outcome &o) {
    auto a = overhead_report(500, 2500, 2, false);
    auto b = overhead_report(100, 400, 2, true);
    o.detail << "ideal " << fmt(a.overall_reduction) << "/" << fmt(a.runtime_reduction) << ", mimicry "
             << fmt(b.overall_reduction) << "/" << fmt(b.runtime_reduction) << ", breakeven "
             << fmt(breakeven_ratio(2)) << " " << fmt(breakeven_ratio(3));
    o.require(a.total_executions_qem == 5000 && a.total_executions_ml == 3000, "ideal-target counts");
    o.require(a.overall_reduction == 0.4 && a.runtime_reduction == 0.5, "40% / 50%");
    o.require(b.total_executions_qem == 800 && b.total_executions_ml == 600, "mimicry counts");
    o.require(b.overall_reduction == 0.25 && b.runtime_reduction == 0.5, "25% / 50%");
    o.require(breakeven_ratio(2) == 0.5 && breakeven_ratio(3) == 2.0 / 3.0, "breakeven ratios");
}

// ---------------------------------------------------------------------------------------------
// 5. Closed-form costs.

void criterion_5(Outcome &o) {
    const double oracle = std::exp(100 * std::log(1.02)) * (1.0 / 5000) * 10;
    auto r = pec_runtime(10, 10, 1.02, 1.0 / 5000);
    const double rel = std::abs(r.seconds - oracle) / oracle;
    o.require(rel <= 1e-4, "pec_runtime matches independent evaluation");
    o.require(std::abs(r.seconds - 1.45e-2) <= 0.01 * 1.45e-2, "pec_runtime ~ 1.45e-2 s");
    const double zero_eps = zne_sampling_cost(100, 0.0, 3.0);
    o.require(zero_eps == 2.5, "zne cost at eps=0 is 2.5");
    double worst = 0.0;
    const double eps = 0.01;
    const double delta = 0.05;
    const double c = 2.0 * std::log(2.0 / delta) / (eps * eps);
    for (double gamma = 1.0; gamma <= 20.0; gamma += 0.5) {
        const double n = static_cast<double>(pec_shot_bound(gamma, eps, delta));
        worst = std::max(worst, std::abs(n - c * gamma * gamma));
        const double n2 = static_cast<double>(pec_shot_bound(2 * gamma, eps, delta));
        o.require(std::abs(n2 - 4 * n) <= 4.0, "doubling gamma quadruples the bound");
    }
    o.require(worst <= 1.0, "bound equals c*gamma^2 up to ceiling");
    o.detail << "pec " << fmt(r.seconds) << " s (rel " << fmt(rel) << "), zne(eps=0) " << zero_eps
             << ", shot-bound residual " << fmt(worst);
}

// ---------------------------------------------------------------------------------------------
// 6-11. Benchmarks.

double overall_mean(const json &summary_overall, const std::string &method) {
    return summary_overall.at(method).at("mean").get<double>();
}

void criterion_6(Outcome &o) {
    auto cfg = default_experiment_config(Experiment::Random, 1);
    auto r = run_random(cfg);
    const auto &ov = r.summary.at("overall");
    const double rf = overall_mean(ov, "rf");
    const double zne = overall_mean(ov, "zne");
    const double raw = overall_mean(ov, "unmitigated");
    const double p = r.summary.at("p_value_rf_lt_zne").get<double>();
    o.detail << "rf " << fmt(rf) << " < zne " << fmt(zne) << " < unmitigated " << fmt(raw) << ", p " << fmt(p);
    o.require(rf < zne && zne < raw, "ordering");
    o.require(p < 0.05, "p < 0.05");
}

void criterion_7(Outcome &o) {
    auto cfg = default_experiment_config(Experiment::Trotter, 1);
    auto r = run_trotter(cfg);
    const auto &p = cfg.trotter;
    for (const std::string tier : {"incoherent", "readout"}) {
        for (int s = 1; s <= p.max_step; s++) {
            const bool interp = s <= p.max_train_step;
            const std::string regime = interp ? "interp" : "extrap";
            const double rf = r.metric(tier, regime, "rf", s).mean;
            const double other = r.metric(tier, regime, interp ? "zne" : "unmitigated", s).mean;
            o.require(rf < other, tier + " " + regime + " step " + std::to_string(s));
        }
        const auto &t = r.summary.at("tiers").at(tier);
        o.detail << tier << " interp rf/zne " << fmt(overall_mean(t.at("interp"), "rf")) << "/"
                 << fmt(overall_mean(t.at("interp"), "zne")) << ", extrap rf/unmit "
                 << fmt(overall_mean(t.at("extrap"), "rf")) << "/"
                 << fmt(overall_mean(t.at("extrap"), "unmitigated")) << "; ";
    }
    const auto &coh = r.summary.at("tiers").at("coherent").at("interp");
    const double rf = overall_mean(coh, "rf");
    const double raw = overall_mean(coh, "unmitigated");
    o.detail << "coherent interp rf/unmit " << fmt(rf) << "/" << fmt(raw);
    o.require(rf < raw, "coherent interp improves");
}

void criterion_8(Outcome &o) {
    auto cfg = default_experiment_config(Experiment::UnseenPauli, 1);
    auto r = run_unseen_pauli(cfg);
    const int total = r.summary.at("observables").get<int>();
    o.require(total == 4095, "4095 observables");
    bool found = false;
    for (const auto &pt : r.summary.at("curve")) {
        if (std::abs(pt.at("fraction").get<double>() - 0.02) < 1e-12) {
            found = true;
            const double rf = pt.at("rf").get<double>();
            const double zne = pt.at("zne").get<double>();
            o.detail << "2%: " << pt.at("train_observables").get<int>() << " training observables, unseen rf "
                     << fmt(rf) << " vs zne " << fmt(zne);
            o.require(rf < zne, "unseen rf < zne");
        }
    }
    o.require(found, "2% point present");
}

double h2_oracle(const H2Coefficients &c) {
    const Eigen::Matrix2d x{{0, 1}, {1, 0}};
    const Eigen::Matrix2d z{{1, 0}, {0, -1}};
    const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
    auto kron = [](const Eigen::Matrix2d &a, const Eigen::Matrix2d &b) {
        Eigen::Matrix4d k;
        for (int i = 0; i < 2; i++) {
            for (int j = 0; j < 2; j++) {
                k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
            }
        }
        return k;
    };
    Eigen::Matrix4d h = c.c_xx * kron(x, x) + c.c_zz * kron(z, z) + c.c_iz * kron(id, z) + c.c_zi * kron(z, id) +
                        c.offset * Eigen::Matrix4d::Identity();
    return Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(h).eigenvalues().minCoeff();
}

void criterion_9(Outcome &o) {
    auto table = BondTable::load(default_data_dir() + "/h2_bond_table.csv");
    auto quiet = default_experiment_config(Experiment::Vqe, 1);
    quiet.noise = NoiseModel::ideal();
    quiet.shots = 0;
    quiet.vqe.methods = {"unmitigated"};
    quiet.vqe.bonds = {0.5, 0.735, 1.5, 2.5};
    quiet.vqe.optimizer.max_evals = 3000;
    quiet.vqe.optimizer.restarts = 3;
    double worst = 0.0;
    for (const auto &row : run_vqe(quiet).vqe) {
        worst = std::max(worst, std::abs(row.unmitigated - h2_oracle(table.at(row.bond))));
    }
    o.require(worst <= 1e-3, "noiseless within 1e-3");

    auto cfg = default_experiment_config(Experiment::Vqe, 1);
    auto r = run_vqe(cfg);
    int better = 0;
    for (const auto &row : r.vqe) {
        const double exact = h2_oracle(table.at(row.bond));
        better += std::abs(row.rf - exact) < std::abs(row.unmitigated - exact) ? 1 : 0;
    }
    const double frac = static_cast<double>(better) / static_cast<double>(r.vqe.size());
    o.detail << "noiseless max error " << fmt(worst) << "; rf closer than unmitigated at " << better << "/"
             << r.vqe.size() << " bonds";
    o.require(frac >= 0.8, "fraction >= 0.8");
}

void criterion_10(Outcome &o) {
    auto cfg = default_experiment_config(Experiment::Mimicry, 1);
    cfg.mimicry.n_sites = QEMLAB_ACCEPTANCE_MIMICRY_SITES;
    auto r = run_mimicry(cfg);
    std::vector<double> steps;
    for (const auto &row : r.metrics) {
        if (row.regime == "residual") {
            steps.push_back(row.mean);
        }
    }
    const double worst = r.summary.at("max_step_residual").get<double>();
    const auto &cl = r.summary.at("clifford");
    const double zne = overall_mean(cl, "zne");
    const double raw = overall_mean(cl, "unmitigated");
    o.detail << cfg.mimicry.n_sites << " sites, max per-step residual " << fmt(worst) << " over " << steps.size()
             << " steps; clifford zne " << fmt(zne) << " vs unmitigated " << fmt(raw);
    o.require(!steps.empty() && worst <= 0.1, "residual <= 0.1 at every step");
    o.require(zne < raw, "clifford anchor");
}

void criterion_11(Outcome &o) {
    auto cfg = default_experiment_config(Experiment::Drift, 1);
    auto r = run_drift(cfg);
    const auto &c = r.summary.at("convergence");
    o.detail << "threshold " << fmt(c.at("threshold").get<double>()) << ", fine-tune converged at "
             << c.at("mlp_finetune").get<int>() << ", scratch MLP at " << c.at("mlp_scratch").get<int>();
    if (c.contains("rf_scratch")) {
        o.detail << ", scratch RF at " << c.at("rf_scratch").get<int>();
    }
    o.require(c.at("finetune_halves_samples").get<bool>(), "fine-tune needs at most half the samples");
}

// ---------------------------------------------------------------------------------------------
// 12. Model properties and reproducibility.

TrainingData synthetic(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    TrainingData d;
    d.x.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    d.y.resize(static_cast<Eigen::Index>(rows));
    for (Eigen::Index i = 0; i < d.x.rows(); i++) {
        double y = 0.0;
        for (Eigen::Index j = 0; j < d.x.cols(); j++) {
            d.x(i, j) = rng.uniform(-1, 1);
            y += std::sin(2.0 * d.x(i, j)) / static_cast<double>(j + 1);
        }
        d.y(i) = y + 0.05 * rng.normal();
    }
    return d;
}

std::vector<double> row_of(const Eigen::MatrixXd &x, Eigen::Index i) {
    std::vector<double> v(static_cast<std::size_t>(x.cols()));
    for (Eigen::Index j = 0; j < x.cols(); j++) {
        v[static_cast<std::size_t>(j)] = x(i, j);
    }
    return v;
}

double gradient_check() {
    auto t = synthetic(40, 5, 601);
    MlpConfig c;
    c.seed = 602;
    MlpModel m(t, c);
    std::vector<double> p = m.parameters();
    Eigen::MatrixXd xs = m.standardize(t.x);
    std::vector<double> grad;
    m.loss_and_gradient(xs, t.y, &grad);
    double worst = 0.0;
    for (std::size_t k = 0; k < p.size(); k += 5) {
        // Small enough that no ReLU pre-activation changes sign inside the stencil.
        const double h = 1e-7;
        std::vector<double> q = p;
        q[k] = p[k] + h;
        m.set_parameters(q);
        const double up = m.loss_and_gradient(xs, t.y, nullptr);
        q[k] = p[k] - h;
        m.set_parameters(q);
        const double down = m.loss_and_gradient(xs, t.y, nullptr);
        const double fd = (up - down) / (2 * h);
        // The floor keeps near-zero gradients from turning rounding noise into relative error.
        worst = std::max(worst, std::abs(fd - grad[k]) / std::max({std::abs(fd), std::abs(grad[k]), 1e-4}));
    }
    return worst;
}

std::string bench_fingerprint(const ExperimentConfig &cfg) {
    auto r = run_experiment(cfg);
    return metrics_to_csv(r.metrics) + errors_to_csv(r.errors) + vqe_to_csv(r.vqe) + r.summary.dump();
}

void criterion_12(Outcome &o) {
    const double grad = gradient_check();
    o.require(grad <= 1e-4, "MLP gradient vs finite differences");

    auto t = synthetic(150, 4, 603);
    RfConfig rc;
    rc.n_trees = 15;
    rc.seed = 604;
    auto forest = fit_rf(t, rc);
    const double lo = t.y.minCoeff();
    const double hi = t.y.maxCoeff();
    bool leaves_ok = true;
    for (const auto &tree : forest.trees()) {
        for (const auto &node : tree) {
            leaves_ok = leaves_ok && node.value >= lo && node.value <= hi;
        }
    }
    Rng rng(605);
    for (int k = 0; k < 200; k++) {
        std::vector<double> x{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        const double p = forest.predict_raw(x);
        leaves_ok = leaves_ok && p >= lo && p <= hi;
    }
    o.require(leaves_ok, "RF leaves and predictions within the target range");
    auto one = synthetic(1, 4, 606);
    auto single = fit_rf(one, rc);
    bool single_ok = true;
    for (int k = 0; k < 50; k++) {
        std::vector<double> x{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        single_ok = single_ok && single.predict_raw(x) == one.y(0);
    }
    o.require(single_ok, "single-sample RF is constant");

    FeatureLayout layout(FeatureConfig{2, 4, false});
    auto data = synthetic(120, layout.width, 607);
    std::vector<DatasetRow> rows;
    for (Eigen::Index i = 0; i < data.x.rows(); i++) {
        DatasetRow r;
        r.observable = i % 2 == 0 ? "ZI" : "IZ";
        r.features = row_of(data.x, i);
        r.target = std::clamp(data.y(i), -1.0, 1.0);
        rows.push_back(std::move(r));
    }
    bool round_trip = true;
    for (ModelKind kind : {ModelKind::Ols, ModelKind::RandomForest, ModelKind::Mlp}) {
        for (bool per : {false, true}) {
            ModelSpec spec;
            spec.kind = kind;
            spec.per_observable = per;
            spec.rf.n_trees = 10;
            spec.mlp.epochs = 10;
            auto m = MitigationModel::fit(layout, rows, spec);
            const std::string text = m.to_json();
            auto back = MitigationModel::from_json(text);
            round_trip = round_trip && back.to_json() == text;
            for (const auto &r : rows) {
                round_trip = round_trip && back.predict(r.features, r.observable) == m.predict(r.features, r.observable);
            }
        }
    }
    o.require(round_trip, "model json round trip");

    std::vector<ExperimentConfig> runs;
    {
        auto c = default_experiment_config(Experiment::Random, 7);
        c.random.depths = {2, 4};
        c.random.train_per_depth = 15;
        c.random.test_per_depth = 5;
        c.rf.n_trees = 10;
        c.mlp.epochs = 5;
        runs.push_back(c);
    }
    {
        auto c = default_experiment_config(Experiment::Trotter, 7);
        c.trotter.max_train_step = 2;
        c.trotter.max_step = 3;
        c.trotter.train_per_step = 6;
        c.trotter.test_per_step = 3;
        c.rf.n_trees = 10;
        c.mlp.epochs = 5;
        runs.push_back(c);
    }
    {
        auto c = default_experiment_config(Experiment::UnseenPauli, 7);
        c.unseen_pauli.n_sites = 3;
        c.unseen_pauli.fractions = {0.25, 1.0};
        c.rf.n_trees = 10;
        runs.push_back(c);
    }
    {
        auto c = default_experiment_config(Experiment::Vqe, 7);
        c.vqe.train_per_observable = 10;
        c.vqe.bonds = {0.735};
        c.vqe.optimizer.max_evals = 30;
        c.vqe.optimizer.restarts = 0;
        c.rf.n_trees = 10;
        runs.push_back(c);
    }
    {
        auto c = default_experiment_config(Experiment::Mimicry, 7);
        c.mimicry.n_sites = 4;
        c.mimicry.observed_qubits = 2;
        c.mimicry.max_step = 2;
        c.mimicry.train_couplings = 3;
        c.mimicry.test_couplings = 2;
        c.zne.twirls = 2;
        c.rf.n_trees = 10;
        runs.push_back(c);
    }
    {
        auto c = default_experiment_config(Experiment::Drift, 7);
        c.drift.max_step = 2;
        c.drift.train_a = 20;
        c.drift.sample_counts = {0, 5, 10};
        c.drift.test = 5;
        c.mlp.epochs = 5;
        c.rf.n_trees = 10;
        runs.push_back(c);
    }
    int reproducible = 0;
    for (const auto &c : runs) {
        const bool same = bench_fingerprint(c) == bench_fingerprint(c);
        reproducible += same ? 1 : 0;
        o.require(same, std::string(experiment_name(c.experiment)) + " reproducible");
    }
    o.detail << "gradient rel error " << fmt(grad) << ", RF bounds " << (leaves_ok ? "ok" : "violated")
             << ", json round trip " << (round_trip ? "exact" : "differs") << ", " << reproducible << "/"
             << runs.size() << " experiments byte-reproducible";
}

}  // namespace

int main(int argc, char **argv) {
    const std::vector<std::function<void(Outcome &)>> criteria{
        criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5,  criterion_6,
        criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12,
    };
    std::set<int> selected;
    for (int i = 1; i < argc; i++) {
        selected.insert(std::atoi(argv[i]));
    }
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); k++) {
        const int id = static_cast<int>(k + 1);
        if (!selected.empty() && !selected.contains(id)) {
            continue;
        }
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[k](o);
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << fmt(secs) << " s): "
                  << o.detail.str() << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
