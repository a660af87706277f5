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
#include <numeric>
#include <stdexcept>

#include "bench_internal.h"
#include "qemlab/errors.h"
#include "qemlab/generators.h"
#include "qemlab/metrics.h"

namespace qemlab {

using nlohmann::json;
using namespace bench_detail;

namespace {

std::string make_id(std::string_view prefix, double bucket, std::size_t i) {
    return std::string(prefix) + "_" + std::to_string(static_cast<long long>(bucket)) + "_" + std::to_string(i);
}

const NoiseModel *feature_noise_of(const ExperimentConfig &cfg, const NoiseModel &noise) {
    return cfg.noise_features ? &noise : nullptr;
}

std::vector<std::string> method_names(const ExperimentConfig &cfg, bool with_zne) {
    std::vector<std::string> out{"unmitigated"};
    if (with_zne) {
        out.emplace_back("zne");
    }
    for (ModelKind k : cfg.models) {
        out.emplace_back(model_kind_name(k));
    }
    return out;
}

json ledger_json(const Counts &c, std::uint64_t analytic_executions, std::uint64_t analytic_instances) {
    return {{"executions", c.executions},
            {"instances", c.instances},
            {"analytic_executions", analytic_executions},
            {"analytic_instances", analytic_instances}};
}

std::uint64_t zne_instances(const ZneConfig &zne) {
    return zne.factors.size() * static_cast<std::uint64_t>(std::max(1, zne.twirls));
}

NoiseModel tier_noise(const NoiseModel &base, const std::string &tier) {
    NoiseModel m = base;
    m.name = tier;
    if (tier == "incoherent") {
        m.readout_enabled = false;
        m.coherent_enabled = false;
    } else if (tier == "readout") {
        m.readout_enabled = true;
        m.coherent_enabled = false;
    } else if (tier == "coherent") {
        m.readout_enabled = true;
        m.coherent_enabled = true;
    } else {
        throw ConfigError("unknown trotter tier '" + tier + "'");
    }
    return m;
}

}  // namespace

BenchResult run_random(const ExperimentConfig &cfg) {
    const auto &p = cfg.random;
    BenchResult result;
    result.experiment = Experiment::Random;
    const auto observables = weight_one_observables(p.num_qubits, Basis::Z);

    std::vector<Record> train;
    std::vector<Record> test;
    std::size_t idx = 0;
    for (int depth : p.depths) {
        for (int split = 0; split < 2; split++) {
            int count = split == 0 ? p.train_per_depth : p.test_per_depth;
            auto &out = split == 0 ? train : test;
            for (int i = 0; i < count; i++) {
                Record r;
                r.id = make_id(split == 0 ? "train" : "test", depth, static_cast<std::size_t>(i));
                r.regime = split == 0 ? "train" : "test";
                r.bucket = depth;
                r.circuit = random_circuit(p.num_qubits, depth, stream(cfg.seed, kCircuits, idx++));
                r.observables = observables;
                out.push_back(std::move(r));
            }
        }
    }

    SimulatorExecutor executor(cfg.noise, cfg.shots);
    Counts a = execute(train, executor, nullptr, cfg.threads, stream(cfg.seed, kExecution, 0));
    Counts b = execute(test, executor, &cfg.zne, cfg.threads, stream(cfg.seed, kExecution, 1));

    FeatureLayout layout(feature_config(cfg, p.num_qubits));
    const NoiseModel *fn = feature_noise_of(cfg, cfg.noise);
    auto models = fit_models(cfg, layout, dataset(train, layout, fn, false), true, stream(cfg.seed, kModels));
    score(test, models, layout, fn, cfg.noise.name, result.errors);
    result.metrics = aggregate(result.errors, stream(cfg.seed, kBootstrap, 0));

    json overall_j = json::object();
    std::uint64_t k = 0;
    for (const auto &m : method_names(cfg, true)) {
        overall_j[m] = overall(result.errors, "", "test", m, stream(cfg.seed, kBootstrap, ++k));
    }
    result.summary["overall"] = overall_j;
    if (std::find(cfg.models.begin(), cfg.models.end(), ModelKind::RandomForest) != cfg.models.end()) {
        result.summary["p_value_rf_lt_zne"] = paired_bootstrap_pvalue(
            select(result.errors, "", "test", "rf"), select(result.errors, "", "test", "zne"),
            stream(cfg.seed, kBootstrap, 100));
    }
    const std::uint64_t m = cfg.zne.factors.size();
    const std::uint64_t twirl = static_cast<std::uint64_t>(std::max(1, cfg.zne.twirls));
    result.summary["ledger"] = ledger_json({a.executions + b.executions, a.instances + b.instances},
                                           train.size() + m * test.size(),
                                           train.size() + m * twirl * test.size());
    result.summary["overhead"] = overhead_json(overhead_report(train.size(), test.size(), m, false));
    result.summary["shot_noise_floor"] =
        cfg.shots == 0 ? 0.0 : std::sqrt(static_cast<double>(p.num_qubits) / static_cast<double>(cfg.shots));
    return result;
}

BenchResult run_trotter(const ExperimentConfig &cfg) {
    const auto &p = cfg.trotter;
    BenchResult result;
    result.experiment = Experiment::Trotter;

    std::vector<Record> train;
    std::vector<Record> test;
    std::size_t idx = 0;
    for (int s = 1; s <= p.max_train_step; s++) {
        for (int i = 0; i < p.train_per_step; i++) {
            train.push_back(tfim_record(make_id("train", s, static_cast<std::size_t>(i)), "train", p.n_sites, s, p.h,
                                        p.initial_excitations, stream(cfg.seed, kCircuits, idx++)));
        }
    }
    for (int s = 1; s <= p.max_step; s++) {
        for (int i = 0; i < p.test_per_step; i++) {
            test.push_back(tfim_record(make_id("test", s, static_cast<std::size_t>(i)),
                                       s <= p.max_train_step ? "interp" : "extrap", p.n_sites, s, p.h,
                                       p.initial_excitations, stream(cfg.seed, kCircuits, idx++)));
        }
    }

    FeatureLayout layout(feature_config(cfg, p.n_sites));
    Counts total;
    json tiers = json::object();
    for (std::size_t t = 0; t < p.tiers.size(); t++) {
        const std::string &tier = p.tiers[t];
        NoiseModel noise = tier_noise(cfg.noise, tier);
        SimulatorExecutor executor(noise, cfg.shots);
        auto tr = train;
        auto te = test;
        Counts a = execute(tr, executor, nullptr, cfg.threads, stream(cfg.seed, kExecution, 2 * t));
        Counts b = execute(te, executor, &cfg.zne, cfg.threads, stream(cfg.seed, kExecution, 2 * t + 1));
        total.executions += a.executions + b.executions;
        total.instances += a.instances + b.instances;
        const NoiseModel *fn = feature_noise_of(cfg, noise);
        auto models = fit_models(cfg, layout, dataset(tr, layout, fn, false), true, stream(cfg.seed, kModels, t));
        score(te, models, layout, fn, tier, result.errors);

        json per = json::object();
        std::uint64_t k = 0;
        for (const char *regime : {"interp", "extrap"}) {
            for (const auto &m : method_names(cfg, true)) {
                per[regime][m] = overall(result.errors, tier, regime, m, stream(cfg.seed, kBootstrap, 1000 * t + ++k));
            }
        }
        tiers[tier] = per;
    }
    result.metrics = aggregate(result.errors, stream(cfg.seed, kBootstrap, 0));
    result.summary["tiers"] = tiers;
    const std::uint64_t m = cfg.zne.factors.size();
    const std::uint64_t twirl = static_cast<std::uint64_t>(std::max(1, cfg.zne.twirls));
    const std::uint64_t nt = p.tiers.size();
    result.summary["ledger"] = ledger_json(total, nt * (train.size() + m * test.size()),
                                           nt * (train.size() + m * twirl * test.size()));
    result.summary["overhead"] = overhead_json(overhead_report(train.size(), test.size(), m, false));
    return result;
}

BenchResult run_unseen_pauli(const ExperimentConfig &cfg) {
    const auto &p = cfg.unseen_pauli;
    BenchResult result;
    result.experiment = Experiment::UnseenPauli;

    TfimParams tp;
    tp.n_sites = p.n_sites;
    tp.steps = p.steps;
    tp.h = p.h;
    tp.J = p.j_over_h * p.h;
    std::vector<Record> records(1);
    Record &rec = records[0];
    rec.id = "tfim";
    rec.regime = "unseen";
    rec.circuit = trotter_tfim(tp);
    rec.observables = all_pauli_observables(p.n_sites);

    SimulatorExecutor executor(cfg.noise, cfg.shots);
    Counts c = execute(records, executor, &cfg.zne, cfg.threads, stream(cfg.seed, kExecution, 0));

    FeatureLayout layout(feature_config(cfg, p.n_sites));
    const NoiseModel *fn = feature_noise_of(cfg, cfg.noise);
    const auto rows = dataset(records, layout, fn, false);
    const std::size_t total = rows.size();
    const auto noisy = noisy_values(rec);

    json curve = json::array();
    for (std::size_t fi = 0; fi < p.fractions.size(); fi++) {
        const double f = p.fractions[fi];
        const bool sanity = f >= 1.0;
        std::size_t k = sanity ? total
                               : std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(f * total)), 1,
                                                         total - 1);
        std::vector<std::size_t> order(total);
        std::iota(order.begin(), order.end(), 0);
        Rng rng(stream(cfg.seed, kSampling, fi));
        for (std::size_t i = total - 1; i > 0; i--) {
            std::swap(order[i], order[rng.below(i + 1)]);
        }
        std::vector<DatasetRow> fit_rows;
        for (std::size_t i = 0; i < k; i++) {
            fit_rows.push_back(rows[order[i]]);
        }
        std::vector<std::size_t> eval(sanity ? order.begin() : order.begin() + static_cast<std::ptrdiff_t>(k),
                                      order.end());
        std::sort(eval.begin(), eval.end());

        auto models = fit_models(cfg, layout, fit_rows, false, stream(cfg.seed, kModels, fi));
        const std::string regime = sanity ? "train" : "unseen";
        for (std::size_t j : eval) {
            const auto &row = rows[j];
            auto add = [&](const std::string &method, double v) {
                result.errors.push_back({cfg.noise.name, regime, method, f, row.observable, std::abs(v - row.target)});
            };
            add("unmitigated", noisy[j]);
            add("zne", rec.zne[j]);
            for (const auto &[name, model] : models) {
                add(name, model.predict(row.features, row.observable));
            }
        }
        json point{{"fraction", f}, {"train_observables", k}, {"eval_observables", eval.size()}};
        for (const auto &m : method_names(cfg, true)) {
            auto v = select(result.errors, cfg.noise.name, regime, m);
            v.erase(v.begin(), v.end() - static_cast<std::ptrdiff_t>(eval.size()));
            point[m] = mean_of(v);
        }
        curve.push_back(point);
    }
    result.metrics = aggregate(result.errors, stream(cfg.seed, kBootstrap, 0));
    result.summary["observables"] = total;
    result.summary["curve"] = curve;
    const std::uint64_t m = cfg.zne.factors.size();
    result.summary["ledger"] = ledger_json(c, m, zne_instances(cfg.zne));
    return result;
}

namespace {

Record mimic_record(std::string id, std::string regime, int n_sites, int steps, double J, double h, int observed) {
    TfimParams tp;
    tp.n_sites = n_sites;
    tp.steps = steps;
    tp.J = J;
    tp.h = h;
    Record r;
    r.id = std::move(id);
    r.regime = std::move(regime);
    r.bucket = steps;
    r.circuit = trotter_tfim(tp);
    r.circuit.metadata()["J"] = std::to_string(J);
    auto z = weight_one_observables(n_sites, Basis::Z);
    r.observables.assign(z.begin(), z.begin() + observed);
    return r;
}

}  // namespace

BenchResult run_mimicry(const ExperimentConfig &cfg) {
    const auto &p = cfg.mimicry;
    if (p.observed_qubits < 1 || p.observed_qubits > p.n_sites) {
        throw ConfigError("mimicry.observed_qubits must lie in [1, n_sites]");
    }
    BenchResult result;
    result.experiment = Experiment::Mimicry;

    std::vector<Record> train;
    std::vector<Record> test;
    std::vector<Record> anchor;
    const int couplings = p.train_couplings + p.test_couplings;
    for (int c = 0; c < couplings; c++) {
        Rng rng(stream(cfg.seed, kCircuits, static_cast<std::uint64_t>(c)));
        const double J = p.h * rng.uniform();
        const bool is_train = c < p.train_couplings;
        for (int s = 1; s <= p.max_step; s++) {
            auto &out = is_train ? train : test;
            out.push_back(mimic_record(make_id(is_train ? "train" : "test", s, static_cast<std::size_t>(c)),
                                       is_train ? "train" : "ideal", p.n_sites, s, J, p.h, p.observed_qubits));
        }
    }
    for (int s = 1; s <= p.max_step; s++) {
        anchor.push_back(mimic_record(make_id("clifford", s, 0), "clifford", p.n_sites, s, 0.0, p.clifford_h,
                                      p.observed_qubits));
    }

    SimulatorExecutor executor(cfg.noise, cfg.shots);
    Counts a = execute(train, executor, &cfg.zne, cfg.threads, stream(cfg.seed, kExecution, 0));
    Counts b = execute(test, executor, &cfg.zne, cfg.threads, stream(cfg.seed, kExecution, 1));
    Counts c = execute(anchor, executor, &cfg.zne, cfg.threads, stream(cfg.seed, kExecution, 2));

    FeatureLayout layout(feature_config(cfg, p.n_sites));
    const NoiseModel *fn = feature_noise_of(cfg, cfg.noise);
    auto models = fit_models(cfg, layout, dataset(train, layout, fn, true), true, stream(cfg.seed, kModels));
    const std::string tier = cfg.noise.name;
    score(test, models, layout, fn, tier, result.errors);
    score(anchor, models, layout, fn, tier, result.errors);
    for (const auto &r : test) {
        for (const auto &[name, model] : models) {
            result.errors.push_back(
                {tier, "residual", name + "_vs_zne", r.bucket, r.id, l2_error(predict(model, layout, r, fn), r.zne)});
        }
    }
    result.metrics = aggregate(result.errors, stream(cfg.seed, kBootstrap, 0));

    double worst = 0.0;
    for (const auto &row : result.metrics) {
        if (row.regime == "residual") {
            worst = std::max(worst, row.mean);
        }
    }
    json clifford = json::object();
    std::uint64_t k = 0;
    for (const auto &m : method_names(cfg, true)) {
        clifford[m] = overall(result.errors, tier, "clifford", m, stream(cfg.seed, kBootstrap, ++k));
    }
    result.summary["max_step_residual"] = worst;
    result.summary["clifford"] = clifford;
    const std::uint64_t m = cfg.zne.factors.size();
    const std::uint64_t n = train.size() + test.size() + anchor.size();
    result.summary["ledger"] = ledger_json({a.executions + b.executions + c.executions,
                                            a.instances + b.instances + c.instances},
                                           m * n, n * zne_instances(cfg.zne));
    result.summary["overhead"] = overhead_json(overhead_report(train.size(), test.size(), m, true));
    return result;
}

namespace {

std::vector<Record> drift_records(const DriftParams &p, std::string_view prefix, int count, std::uint64_t seed) {
    std::vector<Record> out;
    for (int i = 0; i < count; i++) {
        const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
        Rng rng(derive_seed(s, 0));
        const int steps = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(p.max_step)));
        out.push_back(tfim_record(make_id(prefix, steps, static_cast<std::size_t>(i)), "test", p.n_sites, steps,
                                  p.h, {0}, derive_seed(s, 1)));
    }
    return out;
}

/// Smallest sample count whose mean error reaches `threshold`, or -1.
int converged_at(const std::vector<MetricRow> &metrics, const std::string &method, double threshold) {
    int best = -1;
    for (const auto &row : metrics) {
        if (row.method == method && row.mean <= threshold) {
            int n = static_cast<int>(row.bucket);
            if (best < 0 || n < best) {
                best = n;
            }
        }
    }
    return best;
}

}  // namespace

BenchResult run_drift(const ExperimentConfig &cfg) {
    const auto &p = cfg.drift;
    if (p.sample_counts.empty()) {
        throw ConfigError("drift.sample_counts must not be empty");
    }
    BenchResult result;
    result.experiment = Experiment::Drift;
    const int pool = *std::max_element(p.sample_counts.begin(), p.sample_counts.end());

    auto set_a = drift_records(p, "a", p.train_a, stream(cfg.seed, kCircuits, 0));
    auto set_b = drift_records(p, "b", pool, stream(cfg.seed, kCircuits, 1));
    auto test = drift_records(p, "test", p.test, stream(cfg.seed, kCircuits, 2));

    SimulatorExecutor exec_a(cfg.noise, cfg.shots);
    SimulatorExecutor exec_b(cfg.noise_b, cfg.shots);
    Counts ca = execute(set_a, exec_a, nullptr, cfg.threads, stream(cfg.seed, kExecution, 0));
    Counts cb = execute(set_b, exec_b, nullptr, cfg.threads, stream(cfg.seed, kExecution, 1));
    Counts ct = execute(test, exec_b, nullptr, cfg.threads, stream(cfg.seed, kExecution, 2));

    FeatureLayout layout(feature_config(cfg, p.n_sites));
    const NoiseModel *fn_a = feature_noise_of(cfg, cfg.noise);
    const NoiseModel *fn_b = feature_noise_of(cfg, cfg.noise_b);
    const auto rows_a = dataset(set_a, layout, fn_a, false);
    const auto rows_b = dataset(set_b, layout, fn_b, false);
    const std::size_t per_circuit = set_b.empty() ? 0 : set_b.front().observables.size();

    auto base = MitigationModel::fit(layout, rows_a, model_spec(cfg, ModelKind::Mlp, false, stream(cfg.seed, kModels)));
    const std::string tier = cfg.noise.name + "->" + cfg.noise_b.name;
    auto emit = [&](const std::string &method, int n, const MitigationModel &model) {
        for (const auto &r : test) {
            result.errors.push_back({tier, "test", method, static_cast<double>(n), r.id,
                                     l2_error(predict(model, layout, r, fn_b), r.ideal)});
        }
    };

    for (std::size_t si = 0; si < p.sample_counts.size(); si++) {
        const int n = p.sample_counts[si];
        for (const auto &r : test) {
            result.errors.push_back({tier, "test", "unmitigated", static_cast<double>(n), r.id,
                                     l2_error(noisy_values(r), r.ideal)});
        }
        if (n == 0) {
            emit("mlp_finetune", 0, base);
            continue;
        }
        std::span<const DatasetRow> sub(rows_b.data(), static_cast<std::size_t>(n) * per_circuit);
        const std::uint64_t ms = stream(cfg.seed, kModels, si + 1);
        emit("mlp_finetune", n, base.fine_tuned(sub, cfg.mlp.epochs, derive_seed(ms, 0)));
        for (ModelKind kind : cfg.models) {
            auto model = MitigationModel::fit(layout, sub, model_spec(cfg, kind, false, derive_seed(ms, 1)));
            emit(std::string(model_kind_name(kind)) + "_scratch", n, model);
        }
    }
    result.metrics = aggregate(result.errors, stream(cfg.seed, kBootstrap, 0));

    json conv = json::object();
    double scratch_final = std::numeric_limits<double>::quiet_NaN();
    int largest = -1;
    for (const auto &row : result.metrics) {
        if (row.method == "mlp_scratch" && static_cast<int>(row.bucket) > largest) {
            largest = static_cast<int>(row.bucket);
            scratch_final = row.mean;
        }
    }
    if (largest > 0) {
        const double threshold = (1.0 + p.tolerance) * scratch_final;
        const int ft = converged_at(result.metrics, "mlp_finetune", threshold);
        const int mlp = converged_at(result.metrics, "mlp_scratch", threshold);
        conv = {{"threshold", threshold}, {"scratch_final", scratch_final}, {"mlp_finetune", ft}, {"mlp_scratch", mlp}};
        if (std::find(cfg.models.begin(), cfg.models.end(), ModelKind::RandomForest) != cfg.models.end()) {
            conv["rf_scratch"] = converged_at(result.metrics, "rf_scratch", threshold);
        }
        conv["finetune_halves_samples"] = ft >= 0 && mlp > 0 && 2 * ft <= mlp;
    }
    result.summary["convergence"] = conv;
    result.summary["ledger"] =
        ledger_json({ca.executions + cb.executions + ct.executions, ca.instances + cb.instances + ct.instances},
                    set_a.size() + set_b.size() + test.size(), set_a.size() + set_b.size() + test.size());
    return result;
}

BenchResult run_experiment(const ExperimentConfig &cfg) {
    switch (cfg.experiment) {
        case Experiment::Random:
            return run_random(cfg);
        case Experiment::Trotter:
            return run_trotter(cfg);
        case Experiment::UnseenPauli:
            return run_unseen_pauli(cfg);
        case Experiment::Vqe:
            return run_vqe(cfg);
        case Experiment::Mimicry:
            return run_mimicry(cfg);
        case Experiment::Drift:
            return run_drift(cfg);
    }
    throw std::logic_error("unknown experiment");
}

const MetricRow &BenchResult::metric(std::string_view tier, std::string_view regime, std::string_view method,
                                     double bucket) const {
    for (const auto &row : metrics) {
        if (row.tier == tier && row.regime == regime && row.method == method && row.bucket == bucket) {
            return row;
        }
    }
    throw std::out_of_range("no metric row for " + std::string(tier) + "/" + std::string(regime) + "/" +
                            std::string(method));
}

}  // namespace qemlab
