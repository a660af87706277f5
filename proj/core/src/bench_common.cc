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

#include <cmath>
#include <map>
#include <tuple>

#include "bench_internal.h"
#include "qemlab/generators.h"
#include "qemlab/metrics.h"
#include "qemlab/parallel.h"

namespace qemlab::bench_detail {

using nlohmann::json;

Counts execute(std::vector<Record> &records, Executor &executor, const ZneConfig *zne, int threads,
               std::uint64_t seed) {
    CountingExecutor counting(executor);
    parallel_for(records.size(), executor.concurrent_safe() ? threads : 1, [&](std::size_t i) {
        Record &r = records[i];
        DensityMatrix rho = simulate(r.circuit);
        r.ideal.clear();
        for (const auto &obs : r.observables) {
            r.ideal.push_back(expectation(rho, obs));
        }
        const auto measured = required_observables(r.observables);
        const std::uint64_t s = derive_seed(seed, i);
        if (zne == nullptr) {
            r.noisy = counting.run(r.circuit, measured, s);
            return;
        }
        ZneResult z = zne_run(r.circuit, measured, counting, *zne, s);
        r.noisy = std::move(z.per_factor.front());
        r.zne.clear();
        for (const auto &obs : r.observables) {
            r.zne.push_back(z.mitigated.at(obs.paulis));
        }
    });
    return {counting.executions(), counting.instances()};
}

std::vector<DatasetRow> dataset(const std::vector<Record> &records, const FeatureLayout &layout,
                                const NoiseModel *feature_noise, bool zne_targets) {
    std::vector<DatasetRow> rows;
    for (const auto &r : records) {
        for (std::size_t k = 0; k < r.observables.size(); k++) {
            DatasetRow row;
            row.circuit_id = r.id;
            row.split = "train";
            row.observable = r.observables[k].paulis;
            row.features = encode(r.circuit, r.observables[k], r.noisy, feature_noise, layout);
            row.noisy = r.noisy.at(r.observables[k]);
            row.target = zne_targets ? r.zne.at(k) : r.ideal.at(k);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

ModelSpec model_spec(const ExperimentConfig &cfg, ModelKind kind, bool per_observable, std::uint64_t seed) {
    ModelSpec spec;
    spec.kind = kind;
    spec.per_observable = per_observable;
    spec.rf = cfg.rf;
    spec.rf.threads = cfg.threads;
    spec.rf.seed = derive_seed(seed, 1);
    spec.mlp = cfg.mlp;
    spec.mlp.seed = derive_seed(seed, 2);
    return spec;
}

NamedModels fit_models(const ExperimentConfig &cfg, const FeatureLayout &layout, const std::vector<DatasetRow> &rows,
                       bool allow_per_observable, std::uint64_t seed) {
    NamedModels out;
    for (std::size_t k = 0; k < cfg.models.size(); k++) {
        ModelKind kind = cfg.models[k];
        ModelSpec spec = model_spec(cfg, kind, allow_per_observable && cfg.per_observable, derive_seed(seed, k));
        out.emplace_back(std::string(model_kind_name(kind)), MitigationModel::fit(layout, rows, spec));
    }
    return out;
}

std::vector<double> predict(const MitigationModel &model, const FeatureLayout &layout, const Record &r,
                            const NoiseModel *feature_noise) {
    auto m = mlqem_mitigate(model, layout, r.circuit, r.observables, r.noisy, feature_noise);
    std::vector<double> out;
    for (const auto &obs : r.observables) {
        out.push_back(m.at(obs.paulis));
    }
    return out;
}

std::vector<double> noisy_values(const Record &r) {
    std::vector<double> out;
    for (const auto &obs : r.observables) {
        out.push_back(r.noisy.at(obs));
    }
    return out;
}

void score(const std::vector<Record> &records, const NamedModels &models, const FeatureLayout &layout,
           const NoiseModel *feature_noise, const std::string &tier, std::vector<ErrorRecord> &out) {
    for (const auto &r : records) {
        auto add = [&](const std::string &method, const std::vector<double> &values) {
            out.push_back({tier, r.regime, method, r.bucket, r.id, l2_error(values, r.ideal)});
        };
        add("unmitigated", noisy_values(r));
        if (!r.zne.empty()) {
            add("zne", r.zne);
        }
        for (const auto &[name, model] : models) {
            add(name, predict(model, layout, r, feature_noise));
        }
    }
}

std::vector<MetricRow> aggregate(const std::vector<ErrorRecord> &errors, std::uint64_t seed) {
    using Key = std::tuple<std::string, std::string, std::string, double>;
    std::map<Key, std::size_t> index;
    std::vector<std::vector<double>> groups;
    std::vector<MetricRow> rows;
    for (const auto &e : errors) {
        Key key{e.tier, e.regime, e.method, e.bucket};
        auto [it, fresh] = index.emplace(key, groups.size());
        if (fresh) {
            groups.emplace_back();
            rows.push_back({e.tier, e.regime, e.method, e.bucket, 0.0, 0.0, 0.0, 0});
        }
        groups[it->second].push_back(e.l2);
    }
    for (std::size_t g = 0; g < groups.size(); g++) {
        auto ci = bootstrap_ci(groups[g], derive_seed(seed, g));
        rows[g].mean = ci.mean;
        rows[g].ci_low = ci.low;
        rows[g].ci_high = ci.high;
        rows[g].n = groups[g].size();
    }
    return rows;
}

std::vector<double> select(const std::vector<ErrorRecord> &errors, const std::string &tier,
                           const std::string &regime, const std::string &method) {
    std::vector<double> out;
    for (const auto &e : errors) {
        if ((tier.empty() || e.tier == tier) && (regime.empty() || e.regime == regime) &&
            (method.empty() || e.method == method)) {
            out.push_back(e.l2);
        }
    }
    return out;
}

json overall(const std::vector<ErrorRecord> &errors, const std::string &tier, const std::string &regime,
             const std::string &method, std::uint64_t seed) {
    auto v = select(errors, tier, regime, method);
    if (v.empty()) {
        return nullptr;
    }
    auto ci = bootstrap_ci(v, seed);
    return {{"mean", ci.mean}, {"ci_low", ci.low}, {"ci_high", ci.high}, {"n", v.size()}};
}

json overhead_json(const OverheadReport &r) {
    return {{"total_executions_qem", r.total_executions_qem},
            {"total_executions_ml", r.total_executions_ml},
            {"overall_reduction", r.overall_reduction},
            {"runtime_reduction", r.runtime_reduction},
            {"breakeven_ratio", r.breakeven_ratio}};
}

Record tfim_record(std::string id, std::string regime, int n_sites, int steps, double h,
                   const std::vector<int> &excitations, std::uint64_t seed) {
    Rng rng(seed);
    TfimParams p;
    p.n_sites = n_sites;
    p.steps = steps;
    p.h = h;
    p.J = h * rng.uniform();
    p.initial_excitations = excitations;
    Record r;
    r.id = std::move(id);
    r.regime = std::move(regime);
    r.bucket = steps;
    r.circuit = trotter_tfim(p);
    r.circuit.metadata()["J"] = std::to_string(p.J);
    static constexpr Basis bases[] = {Basis::X, Basis::Y, Basis::Z};
    r.observables = weight_one_observables(n_sites, bases[rng.below(3)]);
    return r;
}

FeatureConfig feature_config(const ExperimentConfig &cfg, int num_qubits) {
    return FeatureConfig{.num_qubits = num_qubits, .angle_bins = cfg.angle_bins,
                         .include_noise_params = cfg.noise_features};
}

}  // namespace qemlab::bench_detail
