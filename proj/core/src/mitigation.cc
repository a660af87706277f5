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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qemlab/errors.h"
#include "qemlab/rng.h"

namespace qemlab {

void ZneConfig::validate() const {
    if (factors.size() < 2) {
        throw ConfigError("zne needs at least two noise factors");
    }
    if (factors.front() != 1) {
        throw ConfigError("zne factors must start at 1");
    }
    for (std::size_t i = 0; i < factors.size(); i++) {
        if (factors[i] <= 0 || factors[i] % 2 == 0) {
            throw ConfigError("zne factor " + std::to_string(factors[i]) + " is not a positive odd integer");
        }
        if (i > 0 && factors[i] <= factors[i - 1]) {
            throw ConfigError("zne factors must be strictly ascending");
        }
    }
    if (twirls < 0) {
        throw ConfigError("zne twirls must be non-negative");
    }
}

nlohmann::json zne_config_to_json(const ZneConfig &cfg) {
    return {{"factors", cfg.factors}, {"extrapolation", "linear"}, {"twirls", cfg.twirls}};
}

ZneConfig zne_config_from_json(const nlohmann::json &in) {
    ZneConfig cfg;
    try {
        cfg.factors = in.value("factors", cfg.factors);
        std::string ex = in.value("extrapolation", std::string("linear"));
        if (ex != "linear") {
            throw ConfigError("unsupported zne extrapolation '" + ex + "' (known: linear)");
        }
        cfg.twirls = in.value("twirls", cfg.twirls);
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("invalid zne config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

double extrapolate_linear_to_zero(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("linear extrapolation needs at least two (x, y) points");
    }
    const double n = static_cast<double>(x.size());
    const double xm = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double ym = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); i++) {
        sxy += (x[i] - xm) * (y[i] - ym);
        sxx += (x[i] - xm) * (x[i] - xm);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("linear extrapolation needs distinct x values");
    }
    return ym - (sxy / sxx) * xm;
}

ZneResult zne_run(const Circuit &circuit, std::span<const PauliObservable> observables, Executor &executor,
                  const ZneConfig &cfg, std::uint64_t seed) {
    cfg.validate();
    ZneResult out;
    for (std::size_t k = 0; k < cfg.factors.size(); k++) {
        std::uint64_t factor_seed = derive_seed(seed, k);
        Circuit folded = fold_two_qubit_gates(circuit, cfg.factors[k]);
        if (cfg.twirls == 0) {
            out.per_factor.push_back(executor.run(folded, observables, derive_seed(factor_seed, 0)));
            continue;
        }
        std::vector<Circuit> instances;
        instances.reserve(static_cast<std::size_t>(cfg.twirls));
        std::uint64_t twirl_seed = derive_seed(factor_seed, 1);
        for (int t = 0; t < cfg.twirls; t++) {
            instances.push_back(pauli_twirl(folded, derive_seed(twirl_seed, static_cast<std::uint64_t>(t))));
        }
        out.per_factor.push_back(executor.run_instances(instances, observables, derive_seed(factor_seed, 0)));
    }
    std::vector<double> x(cfg.factors.begin(), cfg.factors.end());
    std::vector<double> y(x.size());
    for (const auto &obs : observables) {
        for (std::size_t k = 0; k < x.size(); k++) {
            y[k] = out.per_factor[k].at(obs);
        }
        out.mitigated[obs.paulis] = extrapolate_linear_to_zero(x, y);
    }
    return out;
}

std::map<std::string, double> zne_mitigate(const Circuit &circuit, std::span<const PauliObservable> observables,
                                           Executor &executor, const ZneConfig &cfg, std::uint64_t seed) {
    return zne_run(circuit, observables, executor, cfg, seed).mitigated;
}

std::string_view target_source_name(TargetSource source) {
    return source == TargetSource::IdealSim ? "ideal_sim" : "zne_mimic";
}

TargetSource parse_target_source(std::string_view name) {
    if (name == "ideal_sim") {
        return TargetSource::IdealSim;
    }
    if (name == "zne_mimic") {
        return TargetSource::ZneMimic;
    }
    throw ConfigError("unknown target source '" + std::string(name) + "' (known: ideal_sim, zne_mimic)");
}

ExecutionLedger &ExecutionLedger::operator+=(const ExecutionLedger &other) {
    executions += other.executions;
    instances += other.instances;
    ideal_simulations += other.ideal_simulations;
    return *this;
}

MlqemDataset mlqem_collect(std::span<const Circuit> circuits, std::span<const PauliObservable> targets,
                           Executor &executor, const MlqemOptions &options, std::uint64_t seed,
                           std::span<const std::string> ids) {
    if (circuits.empty()) {
        throw std::invalid_argument("ml-qem training needs at least one circuit");
    }
    if (targets.empty()) {
        throw std::invalid_argument("ml-qem training needs at least one observable");
    }
    if (!ids.empty() && ids.size() != circuits.size()) {
        throw std::invalid_argument("circuit id count does not match circuit count");
    }
    if (!is_valid_split(options.split)) {
        throw std::invalid_argument("invalid split '" + options.split + "'");
    }
    const FeatureLayout layout(options.features);
    const auto measured = required_observables(targets);
    CountingExecutor counting(executor);
    SimulatorExecutor ideal = make_ideal_executor();

    MlqemDataset data;
    data.noisy.reserve(circuits.size());
    data.rows.reserve(circuits.size() * targets.size());
    for (std::size_t i = 0; i < circuits.size(); i++) {
        const Circuit &circuit = circuits[i];
        const std::uint64_t circuit_seed = derive_seed(seed, i);
        ExecutionResult noisy;
        std::map<std::string, double> target_values;
        if (options.target_source == TargetSource::IdealSim) {
            noisy = counting.run(circuit, measured, circuit_seed);
            target_values = ideal.run(circuit, targets, 0).expectations;
            data.ledger.ideal_simulations++;
        } else {
            ZneResult z = zne_run(circuit, measured, counting, options.zne, circuit_seed);
            noisy = std::move(z.per_factor.front());
            target_values = std::move(z.mitigated);
        }
        std::string id = ids.empty() ? "c" + std::to_string(i) : ids[i];
        for (const auto &obs : targets) {
            DatasetRow row;
            row.circuit_id = id;
            row.split = options.split;
            row.observable = obs.paulis;
            row.features = encode(circuit, obs, noisy, options.feature_noise, layout);
            row.noisy = noisy.at(obs);
            row.target = target_values.at(obs.paulis);
            data.rows.push_back(std::move(row));
        }
        data.noisy.push_back(std::move(noisy));
    }
    data.ledger.executions = counting.executions();
    data.ledger.instances = counting.instances();
    return data;
}

MlqemTrained mlqem_train(std::span<const Circuit> circuits, std::span<const PauliObservable> targets,
                         Executor &executor, const MlqemOptions &options, const ModelSpec &spec,
                         std::uint64_t seed) {
    MlqemTrained out;
    out.data = mlqem_collect(circuits, targets, executor, options, derive_seed(seed, 0));
    out.model = MitigationModel::fit(FeatureLayout(options.features), out.data.rows, spec);
    return out;
}

std::map<std::string, double> mlqem_mitigate(const MitigationModel &model, const FeatureLayout &layout,
                                             const Circuit &circuit, std::span<const PauliObservable> observables,
                                             const ExecutionResult &noisy, const NoiseModel *noise) {
    if (model.layout_fingerprint() != layout.fingerprint()) {
        throw std::invalid_argument("feature layout " + layout.fingerprint() + " does not match the model's " +
                                    model.layout_fingerprint());
    }
    std::map<std::string, double> out;
    for (const auto &obs : observables) {
        auto features = encode(circuit, obs, noisy, noise, layout);
        out[obs.paulis] = model.predict(features, obs.paulis);
    }
    return out;
}

double breakeven_ratio(std::uint64_t m) {
    if (m == 0) {
        throw std::invalid_argument("noise factor count must be positive");
    }
    return static_cast<double>(m - 1) / static_cast<double>(m);
}

OverheadReport overhead_report(std::uint64_t n_train, std::uint64_t n_test, std::uint64_t m,
                               bool train_needs_mitigation) {
    if (n_train == 0 || n_test == 0 || m == 0) {
        throw std::invalid_argument("overhead counts must be positive");
    }
    OverheadReport r;
    r.total_executions_qem = m * n_test;
    r.total_executions_ml = (train_needs_mitigation ? m : 1) * n_train + n_test;
    double qem = static_cast<double>(r.total_executions_qem);
    r.overall_reduction = (qem - static_cast<double>(r.total_executions_ml)) / qem;
    r.runtime_reduction = breakeven_ratio(m);
    r.breakeven_ratio = breakeven_ratio(m);
    return r;
}

std::uint64_t pec_shot_bound(double gamma_total, double eps, double delta, PecShotMode mode) {
    if (!(eps > 0.0) || !(delta > 0.0 && delta < 1.0) || !(gamma_total >= 1.0)) {
        throw std::invalid_argument("pec shot bound needs eps > 0, 0 < delta < 1, gamma >= 1");
    }
    double ratio = gamma_total / eps;
    double n = mode == PecShotMode::Hoeffding ? 2.0 * std::log(2.0 / delta) * ratio * ratio : 4.0 * ratio * ratio;
    // Absorb last-bit rounding so values that are integers in exact arithmetic do not round up.
    n *= 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
    if (!(n < 0x1.0p64)) {
        throw std::overflow_error("pec shot bound exceeds 2^64");
    }
    return static_cast<std::uint64_t>(std::ceil(n));
}

double pec_layer_gamma(std::span<const double> lambdas) {
    double s = 0.0;
    for (double l : lambdas) {
        if (!(l >= 0.0)) {
            throw std::invalid_argument("pauli-lindblad rates must be non-negative");
        }
        s += 2.0 * l;
    }
    return std::exp(s);
}

PecRuntime pec_runtime(int n, int l, double gamma_bar, double beta_seconds) {
    if (n < 0 || l < 0 || !(gamma_bar >= 1.0) || !(beta_seconds > 0.0) || !std::isfinite(gamma_bar)) {
        throw std::invalid_argument("pec runtime needs n, l >= 0, gamma_bar >= 1 and beta > 0");
    }
    PecRuntime r;
    const double nl = static_cast<double>(n) * static_cast<double>(l);
    r.log10_seconds = nl * std::log10(gamma_bar) + std::log10(beta_seconds * l);
    r.seconds = std::pow(gamma_bar, nl) * beta_seconds * l;
    if (!std::isfinite(r.seconds)) {
        r.seconds = std::numeric_limits<double>::infinity();
        r.infeasible = true;
    }
    return r;
}

double zne_sampling_cost(std::uint64_t n_gates, double eps, double r) {
    if (!(r > 1.0)) {
        throw std::invalid_argument("zne amplification scale must exceed 1");
    }
    const double n = static_cast<double>(n_gates);
    return (r * r * std::exp(2.0 * n * eps) + std::exp(2.0 * n * r * eps)) / ((r - 1.0) * (r - 1.0));
}

}  // namespace qemlab
