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

#include <cstdlib>
#include <set>

#include "qemlab/bench.h"
#include "qemlab/errors.h"

#ifndef QEMLAB_DEFAULT_DATA_DIR
#define QEMLAB_DEFAULT_DATA_DIR "data"
#endif

namespace qemlab {

using nlohmann::json;

std::string_view experiment_name(Experiment e) {
    switch (e) {
        case Experiment::Random:
            return "random";
        case Experiment::Trotter:
            return "trotter";
        case Experiment::UnseenPauli:
            return "unseen_pauli";
        case Experiment::Vqe:
            return "vqe";
        case Experiment::Mimicry:
            return "mimicry";
        case Experiment::Drift:
            return "drift";
    }
    throw std::logic_error("unknown experiment");
}

Experiment parse_experiment(std::string_view name) {
    for (auto e : {Experiment::Random, Experiment::Trotter, Experiment::UnseenPauli, Experiment::Vqe,
                   Experiment::Mimicry, Experiment::Drift}) {
        if (experiment_name(e) == name) {
            return e;
        }
    }
    throw ConfigError("unknown experiment '" + std::string(name) +
                      "' (known: random, trotter, unseen_pauli, vqe, mimicry, drift)");
}

std::string default_data_dir() {
    if (const char *env = std::getenv("QEMLAB_DATA_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return QEMLAB_DEFAULT_DATA_DIR;
}

ExperimentConfig default_experiment_config(Experiment e, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.experiment = e;
    cfg.seed = seed;
    // Every feature is examined at each split.
    cfg.rf.max_features = -1;
    switch (e) {
        case Experiment::Random:
        case Experiment::Trotter:
            cfg.models = {ModelKind::Ols, ModelKind::RandomForest, ModelKind::Mlp};
            break;
        case Experiment::UnseenPauli:
        case Experiment::Vqe:
            cfg.models = {ModelKind::RandomForest};
            cfg.per_observable = false;
            break;
        case Experiment::Mimicry:
            cfg.models = {ModelKind::RandomForest};
            cfg.zne.twirls = 5;
            cfg.per_observable = false;
            break;
        case Experiment::Drift:
            cfg.models = {ModelKind::Mlp, ModelKind::RandomForest};
            cfg.per_observable = false;
            break;
    }
    return cfg;
}

namespace {

void reject_unknown(const json &in, const std::set<std::string> &known, const std::string &where) {
    if (!in.is_object()) {
        throw ConfigError(where + " must be a JSON object");
    }
    for (const auto &[key, value] : in.items()) {
        if (!known.contains(key)) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
void read(const json &in, const char *key, T &out) {
    if (in.contains(key)) {
        out = in.at(key).get<T>();
    }
}

void require_positive(int v, const char *what) {
    if (v <= 0) {
        throw ConfigError(std::string(what) + " must be positive");
    }
}

NoiseModel noise_from(const json &in) {
    return noise_model_from_json(in.dump());
}

void parse_random(const json &in, RandomParams &p) {
    reject_unknown(in, {"num_qubits", "depths", "train_per_depth", "test_per_depth"}, "random");
    read(in, "num_qubits", p.num_qubits);
    read(in, "depths", p.depths);
    read(in, "train_per_depth", p.train_per_depth);
    read(in, "test_per_depth", p.test_per_depth);
}

void parse_trotter(const json &in, TrotterParams &p) {
    reject_unknown(in,
                   {"n_sites", "h", "max_train_step", "max_step", "train_per_step", "test_per_step", "tiers",
                    "initial_excitations"},
                   "trotter");
    read(in, "n_sites", p.n_sites);
    read(in, "h", p.h);
    read(in, "max_train_step", p.max_train_step);
    read(in, "max_step", p.max_step);
    read(in, "train_per_step", p.train_per_step);
    read(in, "test_per_step", p.test_per_step);
    read(in, "tiers", p.tiers);
    read(in, "initial_excitations", p.initial_excitations);
}

void parse_unseen(const json &in, UnseenPauliParams &p) {
    reject_unknown(in, {"n_sites", "steps", "h", "j_over_h", "fractions"}, "unseen_pauli");
    read(in, "n_sites", p.n_sites);
    read(in, "steps", p.steps);
    read(in, "h", p.h);
    read(in, "j_over_h", p.j_over_h);
    read(in, "fractions", p.fractions);
}

void parse_vqe(const json &in, VqeParams &p) {
    reject_unknown(in, {"train_per_observable", "theta_range", "bonds", "methods", "bond_table", "optimizer"}, "vqe");
    read(in, "train_per_observable", p.train_per_observable);
    read(in, "theta_range", p.theta_range);
    read(in, "bonds", p.bonds);
    read(in, "methods", p.methods);
    read(in, "bond_table", p.bond_table);
    if (in.contains("optimizer")) {
        const json &o = in.at("optimizer");
        reject_unknown(o, {"max_evals", "restarts", "initial_step", "ftol", "xtol"}, "vqe.optimizer");
        read(o, "max_evals", p.optimizer.max_evals);
        read(o, "restarts", p.optimizer.restarts);
        read(o, "initial_step", p.optimizer.initial_step);
        read(o, "ftol", p.optimizer.ftol);
        read(o, "xtol", p.optimizer.xtol);
    }
}

void parse_mimicry(const json &in, MimicryParams &p) {
    reject_unknown(in,
                   {"n_sites", "h", "max_step", "train_couplings", "test_couplings", "observed_qubits", "clifford_h"},
                   "mimicry");
    read(in, "n_sites", p.n_sites);
    read(in, "h", p.h);
    read(in, "max_step", p.max_step);
    read(in, "train_couplings", p.train_couplings);
    read(in, "test_couplings", p.test_couplings);
    read(in, "observed_qubits", p.observed_qubits);
    read(in, "clifford_h", p.clifford_h);
}

void parse_drift(const json &in, DriftParams &p) {
    reject_unknown(in, {"n_sites", "h", "max_step", "train_a", "sample_counts", "test", "tolerance"}, "drift");
    read(in, "n_sites", p.n_sites);
    read(in, "h", p.h);
    read(in, "max_step", p.max_step);
    read(in, "train_a", p.train_a);
    read(in, "sample_counts", p.sample_counts);
    read(in, "test", p.test);
    read(in, "tolerance", p.tolerance);
}

void validate(const ExperimentConfig &c) {
    require_positive(c.threads, "threads");
    require_positive(c.angle_bins, "angle_bins");
    if (c.models.empty()) {
        throw ConfigError("at least one model kind is required");
    }
    c.zne.validate();
    const auto &r = c.random;
    require_positive(r.num_qubits, "random.num_qubits");
    require_positive(r.train_per_depth, "random.train_per_depth");
    require_positive(r.test_per_depth, "random.test_per_depth");
    if (r.depths.empty()) {
        throw ConfigError("random.depths must not be empty");
    }
    for (int d : r.depths) {
        require_positive(d, "random.depths entries");
    }
    const auto &t = c.trotter;
    require_positive(t.n_sites - 1, "trotter.n_sites - 1");
    require_positive(t.max_train_step, "trotter.max_train_step");
    require_positive(t.train_per_step, "trotter.train_per_step");
    require_positive(t.test_per_step, "trotter.test_per_step");
    if (t.max_step < t.max_train_step) {
        throw ConfigError("trotter.max_step must be >= trotter.max_train_step");
    }
    for (const auto &tier : t.tiers) {
        if (tier != "incoherent" && tier != "readout" && tier != "coherent") {
            throw ConfigError("unknown trotter tier '" + tier + "' (known: incoherent, readout, coherent)");
        }
    }
    const auto &u = c.unseen_pauli;
    require_positive(u.n_sites - 1, "unseen_pauli.n_sites - 1");
    require_positive(u.steps, "unseen_pauli.steps");
    if (u.fractions.empty()) {
        throw ConfigError("unseen_pauli.fractions must not be empty");
    }
    for (double f : u.fractions) {
        if (!(f > 0.0)) {
            throw ConfigError("unseen_pauli.fractions entries must be positive");
        }
    }
    const auto &v = c.vqe;
    require_positive(v.train_per_observable, "vqe.train_per_observable");
    for (const auto &m : v.methods) {
        if (m != "unmitigated" && m != "zne" && m != "rf") {
            throw ConfigError("unknown vqe method '" + m + "' (known: unmitigated, zne, rf)");
        }
    }
    const auto &m = c.mimicry;
    require_positive(m.n_sites - 1, "mimicry.n_sites - 1");
    require_positive(m.max_step, "mimicry.max_step");
    require_positive(m.train_couplings, "mimicry.train_couplings");
    require_positive(m.test_couplings, "mimicry.test_couplings");
    if (m.observed_qubits < 1 || m.observed_qubits > m.n_sites) {
        throw ConfigError("mimicry.observed_qubits must lie in [1, n_sites]");
    }
    const auto &d = c.drift;
    require_positive(d.n_sites - 1, "drift.n_sites - 1");
    require_positive(d.max_step, "drift.max_step");
    require_positive(d.train_a, "drift.train_a");
    require_positive(d.test, "drift.test");
    if (d.sample_counts.empty()) {
        throw ConfigError("drift.sample_counts must not be empty");
    }
    for (std::size_t i = 0; i < d.sample_counts.size(); i++) {
        if (d.sample_counts[i] < 0 || (i > 0 && d.sample_counts[i] <= d.sample_counts[i - 1])) {
            throw ConfigError("drift.sample_counts must be non-negative and strictly ascending");
        }
    }
}

}  // namespace

ExperimentConfig experiment_config_from_json(const json &in) {
    try {
        reject_unknown(in,
                       {"experiment", "seed", "shots", "noise", "noise_b", "models", "per_observable", "rf", "mlp",
                        "zne", "angle_bins", "noise_features", "threads", "random", "trotter", "unseen_pauli", "vqe",
                        "mimicry", "drift"},
                       "experiment config");
        if (!in.contains("experiment")) {
            throw ConfigError("experiment config needs 'experiment'");
        }
        if (!in.contains("seed")) {
            throw ConfigError("experiment config needs 'seed'");
        }
        ExperimentConfig c = default_experiment_config(parse_experiment(in.at("experiment").get<std::string>()),
                                                       in.at("seed").get<std::uint64_t>());
        read(in, "shots", c.shots);
        if (in.contains("noise")) {
            c.noise = noise_from(in.at("noise"));
        }
        if (in.contains("noise_b")) {
            c.noise_b = noise_from(in.at("noise_b"));
        }
        if (in.contains("models")) {
            c.models.clear();
            for (const auto &m : in.at("models")) {
                c.models.push_back(parse_model_kind(m.get<std::string>()));
            }
        }
        read(in, "per_observable", c.per_observable);
        // Partial rf/mlp blocks override the experiment defaults key by key.
        ModelSpec current;
        current.rf = c.rf;
        current.mlp = c.mlp;
        json spec = model_spec_to_json(current);
        for (const char *key : {"rf", "mlp"}) {
            if (in.contains(key)) {
                if (!in.at(key).is_object()) {
                    throw ConfigError(std::string(key) + " must be a JSON object");
                }
                for (const auto &[k, v] : in.at(key).items()) {
                    spec[key][k] = v;
                }
            }
        }
        ModelSpec s = model_spec_from_json(spec);
        if (in.contains("rf")) {
            c.rf = s.rf;
        }
        if (in.contains("mlp")) {
            c.mlp = s.mlp;
        }
        if (in.contains("zne")) {
            c.zne = zne_config_from_json(in.at("zne"));
        }
        read(in, "angle_bins", c.angle_bins);
        read(in, "noise_features", c.noise_features);
        read(in, "threads", c.threads);
        if (in.contains("random")) {
            parse_random(in.at("random"), c.random);
        }
        if (in.contains("trotter")) {
            parse_trotter(in.at("trotter"), c.trotter);
        }
        if (in.contains("unseen_pauli")) {
            parse_unseen(in.at("unseen_pauli"), c.unseen_pauli);
        }
        if (in.contains("vqe")) {
            parse_vqe(in.at("vqe"), c.vqe);
        }
        if (in.contains("mimicry")) {
            parse_mimicry(in.at("mimicry"), c.mimicry);
        }
        if (in.contains("drift")) {
            parse_drift(in.at("drift"), c.drift);
        }
        validate(c);
        return c;
    } catch (const json::exception &e) {
        throw ConfigError(std::string("invalid experiment config: ") + e.what());
    } catch (const ConfigError &) {
        throw;
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
}

json experiment_config_to_json(const ExperimentConfig &c) {
    json models = json::array();
    for (auto m : c.models) {
        models.push_back(model_kind_name(m));
    }
    ModelSpec spec;
    spec.rf = c.rf;
    spec.mlp = c.mlp;
    json s = model_spec_to_json(spec);
    const auto &v = c.vqe;
    return {
        {"experiment", experiment_name(c.experiment)},
        {"seed", c.seed},
        {"shots", c.shots},
        {"noise", json::parse(noise_model_to_json(c.noise))},
        {"noise_b", json::parse(noise_model_to_json(c.noise_b))},
        {"models", models},
        {"per_observable", c.per_observable},
        {"rf", s.at("rf")},
        {"mlp", s.at("mlp")},
        {"zne", zne_config_to_json(c.zne)},
        {"angle_bins", c.angle_bins},
        {"noise_features", c.noise_features},
        {"threads", c.threads},
        {"random",
         {{"num_qubits", c.random.num_qubits},
          {"depths", c.random.depths},
          {"train_per_depth", c.random.train_per_depth},
          {"test_per_depth", c.random.test_per_depth}}},
        {"trotter",
         {{"n_sites", c.trotter.n_sites},
          {"h", c.trotter.h},
          {"max_train_step", c.trotter.max_train_step},
          {"max_step", c.trotter.max_step},
          {"train_per_step", c.trotter.train_per_step},
          {"test_per_step", c.trotter.test_per_step},
          {"tiers", c.trotter.tiers},
          {"initial_excitations", c.trotter.initial_excitations}}},
        {"unseen_pauli",
         {{"n_sites", c.unseen_pauli.n_sites},
          {"steps", c.unseen_pauli.steps},
          {"h", c.unseen_pauli.h},
          {"j_over_h", c.unseen_pauli.j_over_h},
          {"fractions", c.unseen_pauli.fractions}}},
        {"vqe",
         {{"train_per_observable", v.train_per_observable},
          {"theta_range", v.theta_range},
          {"bonds", v.bonds},
          {"methods", v.methods},
          {"bond_table", v.bond_table},
          {"optimizer",
           {{"max_evals", v.optimizer.max_evals},
            {"restarts", v.optimizer.restarts},
            {"initial_step", v.optimizer.initial_step},
            {"ftol", v.optimizer.ftol},
            {"xtol", v.optimizer.xtol}}}}},
        {"mimicry",
         {{"n_sites", c.mimicry.n_sites},
          {"h", c.mimicry.h},
          {"max_step", c.mimicry.max_step},
          {"train_couplings", c.mimicry.train_couplings},
          {"test_couplings", c.mimicry.test_couplings},
          {"observed_qubits", c.mimicry.observed_qubits},
          {"clifford_h", c.mimicry.clifford_h}}},
        {"drift",
         {{"n_sites", c.drift.n_sites},
          {"h", c.drift.h},
          {"max_step", c.drift.max_step},
          {"train_a", c.drift.train_a},
          {"sample_counts", c.drift.sample_counts},
          {"test", c.drift.test},
          {"tolerance", c.drift.tolerance}}},
    };
}

}  // namespace qemlab
