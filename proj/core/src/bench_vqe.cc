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

#include <algorithm>
#include <cmath>
#include <limits>

#include "bench_internal.h"
#include "qemlab/errors.h"
#include "qemlab/generators.h"

namespace qemlab {

using nlohmann::json;
using namespace bench_detail;

namespace {

enum class VqeMethod { Unmitigated, Zne, Rf };

VqeMethod parse_vqe_method(const std::string &name) {
    if (name == "unmitigated") {
        return VqeMethod::Unmitigated;
    }
    if (name == "zne") {
        return VqeMethod::Zne;
    }
    if (name == "rf") {
        return VqeMethod::Rf;
    }
    throw ConfigError("unknown vqe method '" + name + "' (known: unmitigated, zne, rf)");
}

std::vector<double> random_thetas(Rng &rng, double range) {
    std::vector<double> t(kAnsatzParams);
    for (double &v : t) {
        v = range * (2.0 * rng.uniform() - 1.0);
    }
    return t;
}

struct EnergyOracle {
    const ExperimentConfig &cfg;
    Executor &executor;
    const MitigationModel *model;
    const FeatureLayout &layout;
    const NoiseModel *feature_noise;

    double operator()(const H2Hamiltonian &ham, VqeMethod method, std::span<const double> thetas,
                      std::uint64_t seed) const {
        Circuit circuit = two_local_ansatz(thetas);
        const auto terms = ham.measured_observables();
        const auto measured = required_observables(terms);
        switch (method) {
            case VqeMethod::Unmitigated:
                return ham.energy(executor.run(circuit, measured, seed).expectations);
            case VqeMethod::Zne:
                return ham.energy(zne_mitigate(circuit, measured, executor, cfg.zne, seed));
            case VqeMethod::Rf: {
                auto noisy = executor.run(circuit, measured, seed);
                return ham.energy(mlqem_mitigate(*model, layout, circuit, terms, noisy, feature_noise));
            }
        }
        throw std::logic_error("unknown vqe method");
    }
};

}  // namespace

BenchResult run_vqe(const ExperimentConfig &cfg) {
    const auto &p = cfg.vqe;
    BenchResult result;
    result.experiment = Experiment::Vqe;

    std::vector<VqeMethod> methods;
    for (const auto &m : p.methods) {
        methods.push_back(parse_vqe_method(m));
    }
    const bool need_rf = std::find(methods.begin(), methods.end(), VqeMethod::Rf) != methods.end();

    const BondTable table =
        BondTable::load(p.bond_table.empty() ? default_data_dir() + "/h2_bond_table.csv" : p.bond_table);
    const std::vector<double> bonds = p.bonds.empty() ? table.bond_lengths() : p.bonds;

    SimulatorExecutor executor(cfg.noise, cfg.shots);
    CountingExecutor runtime(executor);
    FeatureLayout layout(feature_config(cfg, 2));
    const NoiseModel *fn = cfg.noise_features ? &cfg.noise : nullptr;

    Counts training;
    MitigationModel model;
    if (need_rf) {
        std::vector<Record> train;
        Rng rng(stream(cfg.seed, kCircuits, 0));
        for (const char *obs : {"XX", "ZZ"}) {
            for (int i = 0; i < p.train_per_observable; i++) {
                Record r;
                r.id = std::string(obs) + "_" + std::to_string(i);
                r.regime = "train";
                r.circuit = two_local_ansatz(random_thetas(rng, p.theta_range));
                r.observables = {PauliObservable(obs)};
                train.push_back(std::move(r));
            }
        }
        training = execute(train, executor, nullptr, cfg.threads, stream(cfg.seed, kExecution, 0));
        model = MitigationModel::fit(layout, dataset(train, layout, fn, false),
                                     model_spec(cfg, ModelKind::RandomForest, cfg.per_observable,
                                                stream(cfg.seed, kModels)));
    }

    EnergyOracle energy{cfg, runtime, need_rf ? &model : nullptr, layout, fn};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::size_t rf_better = 0;
    std::size_t compared = 0;
    double zne_rf_gap = 0.0;
    for (std::size_t b = 0; b < bonds.size(); b++) {
        const H2Hamiltonian ham = h2_hamiltonian(table, bonds[b]);
        VqeRow row;
        row.bond = bonds[b];
        row.exact = h2_ground_energy(ham);
        row.unmitigated = row.zne = row.rf = nan;
        Rng start_rng(stream(cfg.seed, kSampling, b));
        const std::vector<double> x0 = random_thetas(start_rng, std::numbers::pi);

        for (std::size_t mi = 0; mi < methods.size(); mi++) {
            const VqeMethod method = methods[mi];
            const std::uint64_t base = derive_seed(stream(cfg.seed, kExecution, 1 + b), mi);
            std::uint64_t calls = 0;
            auto objective = [&](std::span<const double> t) { return energy(ham, method, t, derive_seed(base, ++calls)); };
            NelderMeadResult opt = nelder_mead(objective, x0, p.optimizer);
            // Reported energy is a fresh evaluation at the optimum, not the optimizer's best sample.
            const double e = energy(ham, method, opt.x, derive_seed(base, 0));
            const std::string name = p.methods[mi];
            result.errors.push_back({cfg.noise.name, "vqe", name, row.bond, "bond_" + std::to_string(b),
                                     std::abs(e - row.exact)});
            switch (method) {
                case VqeMethod::Unmitigated:
                    row.unmitigated = e;
                    row.converged_unmitigated = opt.converged;
                    break;
                case VqeMethod::Zne:
                    row.zne = e;
                    row.converged_zne = opt.converged;
                    break;
                case VqeMethod::Rf:
                    row.rf = e;
                    row.converged_rf = opt.converged;
                    break;
            }
        }
        if (!std::isnan(row.rf) && !std::isnan(row.unmitigated)) {
            compared++;
            if (std::abs(row.rf - row.exact) < std::abs(row.unmitigated - row.exact)) {
                rf_better++;
            }
        }
        if (!std::isnan(row.rf) && !std::isnan(row.zne)) {
            zne_rf_gap += std::abs(row.zne - row.rf) / static_cast<double>(bonds.size());
        }
        result.vqe.push_back(row);
    }
    result.metrics = aggregate(result.errors, stream(cfg.seed, kBootstrap, 0));
    if (compared > 0) {
        result.summary["rf_better_than_unmitigated_fraction"] =
            static_cast<double>(rf_better) / static_cast<double>(compared);
    }
    result.summary["mean_abs_zne_rf"] = zne_rf_gap;
    result.summary["ledger"] = {{"training_executions", training.executions},
                                {"analytic_training_executions", need_rf ? 2 * p.train_per_observable : 0},
                                {"optimization_executions", runtime.executions()},
                                {"optimization_instances", runtime.instances()}};
    return result;
}

}  // namespace qemlab
