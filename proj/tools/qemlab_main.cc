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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qemlab/bench.h"
#include "qemlab/csv.h"
#include "qemlab/errors.h"
#include "qemlab/executor.h"
#include "qemlab/features.h"
#include "qemlab/generators.h"
#include "qemlab/mitigation.h"
#include "qemlab/models.h"
#include "qemlab/plot.h"
#include "qemlab/rng.h"

namespace {

using nlohmann::json;
using namespace qemlab;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) {
        throw ResourceError("cannot write '" + path + "'");
    }
}

json parse_json_file(const std::string &path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error &e) {
        throw ConfigError("'" + path + "' is not valid json: " + e.what());
    }
}

// ---------------------------------------------------------------------------------------------
// bench

struct BenchArgs {
    std::string experiment;
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

void run_bench(const BenchArgs &a) {
    json j = a.config.empty() ? json::object() : parse_json_file(a.config);
    if (!j.is_object()) {
        throw ConfigError("config must be a json object");
    }
    const Experiment e = parse_experiment(a.experiment);
    if (j.contains("experiment")) {
        if (!j.at("experiment").is_string() || parse_experiment(j.at("experiment").get<std::string>()) != e) {
            throw ConfigError("config is for experiment '" + j.at("experiment").dump() + "', not '" + a.experiment +
                              "'");
        }
    }
    j["experiment"] = std::string(experiment_name(e));
    if (a.seed) {
        j["seed"] = *a.seed;
    }
    if (a.threads) {
        j["threads"] = *a.threads;
    }
    ExperimentConfig cfg = experiment_config_from_json(j);
    BenchResult result = run_experiment(cfg);
    write_bench_outputs(result, cfg, a.out);
    std::cout << result.summary.dump(2) << "\n";
}

// ---------------------------------------------------------------------------------------------
// cost

struct BreakevenArgs {
    std::uint64_t m = 0;
    std::optional<std::uint64_t> n_train;
    std::optional<std::uint64_t> n_test;
    bool needs_mitigation = false;
};

void run_breakeven(const BreakevenArgs &a) {
    if (a.m < 2) {
        throw ConfigError("--m must be at least 2");
    }
    std::cout << "breakeven_ratio " << format_double(breakeven_ratio(a.m)) << "\n";
    if (a.n_train || a.n_test) {
        if (!a.n_train || !a.n_test || *a.n_test == 0) {
            throw ConfigError("--n-train and --n-test go together (n-test > 0)");
        }
        auto r = overhead_report(*a.n_train, *a.n_test, a.m, a.needs_mitigation);
        std::cout << "total_executions_qem " << r.total_executions_qem << "\n"
                  << "total_executions_ml " << r.total_executions_ml << "\n"
                  << "overall_reduction " << format_double(r.overall_reduction) << "\n"
                  << "runtime_reduction " << format_double(r.runtime_reduction) << "\n";
    }
}

struct PecArgs {
    std::optional<double> gamma_bar;
    std::vector<double> lambdas;
    double beta = 0.0;
    int n = 0;
    int l = 0;
    bool sweep = false;
    int n_max = 100;
    int l_max = 100;
    int step = 10;
    std::optional<double> gamma_total;
    double eps = 0.01;
    double delta = 0.01;
    std::string mode = "hoeffding";
};

std::string seconds_text(const PecRuntime &r) {
    return r.infeasible ? std::string("inf") : format_double(r.seconds);
}

void run_pec(const PecArgs &a) {
    if (a.gamma_total) {
        PecShotMode mode;
        if (a.mode == "hoeffding") {
            mode = PecShotMode::Hoeffding;
        } else if (a.mode == "approximate") {
            mode = PecShotMode::Approximate;
        } else {
            throw ConfigError("--mode must be hoeffding or approximate");
        }
        std::cout << "shots " << pec_shot_bound(*a.gamma_total, a.eps, a.delta, mode) << "\n";
        return;
    }
    double gamma_bar = 0.0;
    if (a.gamma_bar) {
        gamma_bar = *a.gamma_bar;
    } else if (!a.lambdas.empty()) {
        gamma_bar = pec_layer_gamma(a.lambdas);
        std::cout << "gamma_bar " << format_double(gamma_bar) << "\n";
    } else {
        throw ConfigError("pec needs --gamma-bar, --lambdas or --gamma-total");
    }
    if (a.sweep) {
        if (a.step <= 0 || a.n_max < 1 || a.l_max < 1) {
            throw ConfigError("sweep bounds and --step must be positive");
        }
        std::string out = "n,l,seconds,log10_seconds\n";
        for (int n = a.step; n <= a.n_max; n += a.step) {
            for (int l = a.step; l <= a.l_max; l += a.step) {
                auto r = pec_runtime(n, l, gamma_bar, a.beta);
                out += std::to_string(n) + "," + std::to_string(l) + "," + seconds_text(r) + ",";
                append_double(out, r.log10_seconds);
                out += "\n";
            }
        }
        std::cout << out;
        return;
    }
    if (a.n <= 0 || a.l <= 0) {
        throw ConfigError("pec needs positive --n and --l (or --sweep)");
    }
    auto r = pec_runtime(a.n, a.l, gamma_bar, a.beta);
    std::cout << "seconds " << seconds_text(r) << "\n"
              << "log10_seconds " << format_double(r.log10_seconds) << "\n";
}

struct ZneCostArgs {
    std::uint64_t gates = 0;
    double eps = 0.0;
    double r = 3.0;
};

void run_zne_cost(const ZneCostArgs &a) {
    std::cout << "sampling_cost " << format_double(zne_sampling_cost(a.gates, a.eps, a.r)) << "\n";
}

// ---------------------------------------------------------------------------------------------
// plot

void run_plot(const std::string &csv, const std::string &kind, std::string out) {
    const PlotKind k = parse_plot_kind(kind);
    std::string svg = render_plot(read_file(csv), k);
    if (out.empty()) {
        out = std::filesystem::path(csv).replace_extension(".svg").string();
    }
    write_file(out, svg);
    std::cout << out << "\n";
}

// ---------------------------------------------------------------------------------------------
// train / mitigate

struct ExecArgs {
    std::string noise = "lima-like";
    std::string noise_file;
    std::uint64_t shots = 10000;
    std::uint64_t seed = 0;
    int angle_bins = 8;
    bool noise_features = false;
    std::vector<std::string> observables;
    std::vector<int> factors{1, 3};
    int twirls = 0;
};

void add_exec_options(CLI::App *cmd, ExecArgs &a) {
    cmd->add_option("--noise", a.noise, "Noise preset (lima-like, belem-like, ideal)");
    cmd->add_option("--noise-file", a.noise_file, "Noise model json; overrides --noise");
    cmd->add_option("--shots", a.shots, "Shots per execution; 0 gives exact expectations");
    cmd->add_option("--seed", a.seed, "Master seed")->required();
    cmd->add_option("--angle-bins", a.angle_bins, "RZ angle histogram bins");
    cmd->add_flag("--noise-features", a.noise_features, "Append noise scalars to the features");
    cmd->add_option("--observables", a.observables, "Pauli strings; default every weight-one Z")->delimiter(',');
    cmd->add_option("--factors", a.factors, "ZNE folding factors")->delimiter(',');
    cmd->add_option("--twirls", a.twirls, "Twirled instances per ZNE factor");
}

NoiseModel load_noise(const ExecArgs &a) {
    if (!a.noise_file.empty()) {
        return noise_model_from_json(read_file(a.noise_file));
    }
    return NoiseModel::preset(a.noise);
}

ZneConfig zne_from(const ExecArgs &a) {
    ZneConfig z;
    z.factors = a.factors;
    z.twirls = a.twirls;
    z.validate();
    return z;
}

std::vector<PauliObservable> observables_for(const ExecArgs &a, int n) {
    if (a.observables.empty()) {
        return weight_one_observables(n, Basis::Z);
    }
    std::vector<PauliObservable> out;
    for (const auto &s : a.observables) {
        PauliObservable obs(s);
        if (obs.num_qubits() != n) {
            throw ConfigError("observable " + s + " does not have " + std::to_string(n) + " qubits");
        }
        out.push_back(std::move(obs));
    }
    return out;
}

json ledger_json(const ExecutionLedger &l) {
    return {{"executions", l.executions}, {"instances", l.instances}, {"ideal_simulations", l.ideal_simulations}};
}

json executor_json(const ExecArgs &a, const NoiseModel &noise) {
    return {{"kind", "density_matrix_simulator"},
            {"shots", a.shots},
            {"noise_preset", noise.name},
            {"noise", json::parse(noise_model_to_json(noise))}};
}

struct TrainArgs {
    ExecArgs exec;
    std::string data;
    std::string family = "random";
    int num_qubits = 4;
    std::vector<int> depths{2, 4, 6, 8, 10};
    int max_step = 6;
    double h = 1.0;
    int count = 100;
    std::string target = "ideal_sim";
    std::string model = "rf";
    bool per_observable = false;
    int trees = 100;
    std::string out;
    std::string dataset_out;
    std::string manifest;
};

std::vector<Circuit> family_circuits(const TrainArgs &a) {
    if (a.count <= 0) {
        throw ConfigError("--count must be positive");
    }
    std::vector<Circuit> out;
    std::uint64_t idx = 0;
    if (a.family == "random") {
        for (int d : a.depths) {
            for (int i = 0; i < a.count; i++) {
                out.push_back(random_circuit(a.num_qubits, d, derive_seed(a.exec.seed, idx++)));
            }
        }
        return out;
    }
    if (a.family == "trotter") {
        for (int s = 1; s <= a.max_step; s++) {
            for (int i = 0; i < a.count; i++) {
                Rng rng(derive_seed(a.exec.seed, idx++));
                TfimParams p;
                p.n_sites = a.num_qubits;
                p.steps = s;
                p.h = a.h;
                p.J = a.h * rng.uniform();
                out.push_back(trotter_tfim(p));
            }
        }
        return out;
    }
    throw ConfigError("unknown family '" + a.family + "' (known: random, trotter)");
}

void run_train(const TrainArgs &a) {
    ModelSpec spec;
    spec.kind = parse_model_kind(a.model);
    spec.per_observable = a.per_observable;
    spec.rf.n_trees = a.trees;
    spec.rf.max_features = -1;
    spec.rf.seed = derive_seed(a.exec.seed, 1);
    spec.mlp.seed = derive_seed(a.exec.seed, 2);

    FeatureConfig fc{a.num_qubits, a.exec.angle_bins, a.exec.noise_features};
    FeatureLayout layout(fc);
    json manifest = json::object();
    std::vector<DatasetRow> rows;
    if (!a.data.empty()) {
        rows = csv_to_dataset(read_file(a.data), layout);
        manifest["dataset"] = a.data;
    } else {
        NoiseModel noise = load_noise(a.exec);
        SimulatorExecutor sim(noise, a.exec.shots);
        auto circuits = family_circuits(a);
        auto targets = observables_for(a.exec, a.num_qubits);
        MlqemOptions opt;
        opt.features = fc;
        opt.target_source = parse_target_source(a.target);
        opt.zne = zne_from(a.exec);
        opt.feature_noise = &noise;
        auto data = mlqem_collect(circuits, targets, sim, opt, derive_seed(a.exec.seed, 3));
        rows = std::move(data.rows);
        manifest["executor"] = executor_json(a.exec, noise);
        manifest["target_source"] = a.target;
        if (opt.target_source == TargetSource::ZneMimic) {
            manifest["zne"] = zne_config_to_json(opt.zne);
        }
        manifest["ledger"] = ledger_json(data.ledger);
        manifest["circuits"] = circuits.size();
    }
    if (!a.dataset_out.empty()) {
        write_file(a.dataset_out, dataset_to_csv(layout, rows));
    }
    auto model = MitigationModel::fit(layout, rows, spec);
    write_file(a.out, model.to_json());
    manifest["model_file"] = a.out;
    manifest["layout"] = layout.fingerprint();
    manifest["rows"] = rows.size();
    if (!a.manifest.empty()) {
        write_file(a.manifest, manifest.dump(2) + "\n");
    }
    std::cout << manifest.dump(2) << "\n";
}

struct MitigateArgs {
    ExecArgs exec;
    std::string model;
    std::string circuits;
    bool zne = false;
    std::string out;
};

std::vector<Circuit> load_circuits(const std::string &path) {
    json j = parse_json_file(path);
    std::vector<Circuit> out;
    if (j.is_array()) {
        for (const auto &c : j) {
            out.push_back(circuit_from_json(c.dump()));
        }
    } else {
        out.push_back(circuit_from_json(j.dump()));
    }
    if (out.empty()) {
        throw ConfigError("'" + path + "' holds no circuits");
    }
    return out;
}

void run_mitigate(const MitigateArgs &a) {
    auto model = MitigationModel::from_json(read_file(a.model));
    auto circuits = load_circuits(a.circuits);
    const int n = circuits.front().num_qubits();
    FeatureLayout layout(FeatureConfig{n, a.exec.angle_bins, a.exec.noise_features});
    if (layout.fingerprint() != model.layout_fingerprint()) {
        throw ConfigError("model was trained on " + model.layout_fingerprint() + ", inputs give " +
                          layout.fingerprint());
    }
    NoiseModel noise = load_noise(a.exec);
    SimulatorExecutor sim(noise, a.exec.shots);
    CountingExecutor counting(sim);
    auto targets = observables_for(a.exec, n);
    auto measured = required_observables(targets);
    ZneConfig zcfg = zne_from(a.exec);

    json results = json::array();
    for (std::size_t i = 0; i < circuits.size(); i++) {
        const Circuit &c = circuits[i];
        if (c.num_qubits() != n) {
            throw ConfigError("every circuit must have " + std::to_string(n) + " qubits");
        }
        const std::uint64_t seed = derive_seed(a.exec.seed, i);
        json r{{"index", i}};
        ExecutionResult noisy;
        if (a.zne) {
            auto z = zne_run(c, measured, counting, zcfg, seed);
            noisy = z.per_factor.front();
            json zj = json::object();
            for (const auto &t : targets) {
                zj[t.paulis] = z.mitigated.at(t.paulis);
            }
            r["zne"] = zj;
        } else {
            noisy = counting.run(c, measured, seed);
        }
        json nj = json::object();
        for (const auto &t : targets) {
            nj[t.paulis] = noisy.expectations.at(t.paulis);
        }
        r["noisy"] = nj;
        r["mitigated"] = mlqem_mitigate(model, layout, c, targets, noisy, &noise);
        results.push_back(std::move(r));
    }
    json manifest{
        {"executor", executor_json(a.exec, noise)},
        {"noise_preset", noise.name},
        {"zne", a.zne ? zne_config_to_json(zcfg) : json(nullptr)},
        {"model_file", a.model},
        {"model_kind", model_kind_name(model.kind())},
        {"layout", model.layout_fingerprint()},
        {"ledger", {{"executions", counting.executions()}, {"instances", counting.instances()}}},
        {"seed", a.exec.seed},
        {"results", std::move(results)},
    };
    std::string text = manifest.dump(2) + "\n";
    if (!a.out.empty()) {
        write_file(a.out, text);
    }
    std::cout << text;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qemlab: machine-learning quantum error mitigation benchmarks"};
    app.require_subcommand(1);

    BenchArgs bench;
    auto *bench_cmd = app.add_subcommand("bench", "Run a benchmark experiment");
    bench_cmd->add_option("experiment", bench.experiment, "random, trotter, unseen_pauli, vqe, mimicry, drift")
        ->required();
    bench_cmd->add_option("--config", bench.config, "Experiment config json");
    bench_cmd->add_option("--out", bench.out, "Output directory")->required();
    bench_cmd->add_option("--seed", bench.seed, "Master seed; overrides the config");
    bench_cmd->add_option("--threads", bench.threads, "Worker threads; overrides the config");

    auto *cost_cmd = app.add_subcommand("cost", "Closed-form mitigation cost calculators");
    cost_cmd->require_subcommand(1);
    BreakevenArgs be;
    auto *be_cmd = cost_cmd->add_subcommand("breakeven", "Training-set break-even ratio");
    be_cmd->add_option("--m", be.m, "Executions per mitigated circuit of the mimicked method")->required();
    be_cmd->add_option("--n-train", be.n_train, "Training circuits");
    be_cmd->add_option("--n-test", be.n_test, "Test circuits");
    be_cmd->add_flag("--needs-mitigation", be.needs_mitigation, "Training targets come from the mitigation method");
    PecArgs pec;
    auto *pec_cmd = cost_cmd->add_subcommand("pec", "Error-cancellation runtime and shot bound");
    pec_cmd->add_option("--gamma-bar", pec.gamma_bar, "Mean per-qubit per-layer sampling overhead");
    pec_cmd->add_option("--lambdas", pec.lambdas, "Pauli-Lindblad rates of one layer")->delimiter(',');
    pec_cmd->add_option("--beta", pec.beta, "Seconds per layer execution");
    pec_cmd->add_option("--n", pec.n, "Qubits");
    pec_cmd->add_option("--l", pec.l, "Layers");
    pec_cmd->add_flag("--sweep", pec.sweep, "Emit a CSV grid over n and l");
    pec_cmd->add_option("--n-max", pec.n_max, "Sweep upper bound for n");
    pec_cmd->add_option("--l-max", pec.l_max, "Sweep upper bound for l");
    pec_cmd->add_option("--step", pec.step, "Sweep stride");
    pec_cmd->add_option("--gamma-total", pec.gamma_total, "Total overhead; prints the shot bound instead");
    pec_cmd->add_option("--eps", pec.eps, "Target precision for the shot bound");
    pec_cmd->add_option("--delta", pec.delta, "Failure probability for the shot bound");
    pec_cmd->add_option("--mode", pec.mode, "hoeffding or approximate");
    ZneCostArgs zc;
    auto *zc_cmd = cost_cmd->add_subcommand("zne", "Two-point exponential extrapolation sampling cost");
    zc_cmd->add_option("--gates", zc.gates, "Noisy gate count")->required();
    zc_cmd->add_option("--eps", zc.eps, "Error per gate")->required();
    zc_cmd->add_option("--r", zc.r, "Noise scale factor");

    std::string plot_csv;
    std::string plot_kind = "line";
    std::string plot_out;
    auto *plot_cmd = app.add_subcommand("plot", "Render a benchmark CSV as SVG");
    plot_cmd->add_option("csv", plot_csv, "metrics.csv, errors.csv or vqe.csv")->required();
    plot_cmd->add_option("--kind", plot_kind, "line or box");
    plot_cmd->add_option("--out", plot_out, "SVG path; default replaces the CSV extension");

    TrainArgs train;
    auto *train_cmd = app.add_subcommand("train", "Fit a mitigation model");
    add_exec_options(train_cmd, train.exec);
    train_cmd->add_option("--data", train.data, "Dataset CSV; skips execution");
    train_cmd->add_option("--family", train.family, "random or trotter");
    train_cmd->add_option("--num-qubits", train.num_qubits, "Circuit width");
    train_cmd->add_option("--depths", train.depths, "Random-circuit two-qubit depths")->delimiter(',');
    train_cmd->add_option("--max-step", train.max_step, "Trotter steps 1..max-step");
    train_cmd->add_option("--field", train.h, "Transverse field; J is drawn uniformly below it");
    train_cmd->add_option("--count", train.count, "Circuits per depth or step");
    train_cmd->add_option("--target", train.target, "ideal_sim or zne_mimic");
    train_cmd->add_option("--model", train.model, "ols, rf or mlp");
    train_cmd->add_flag("--per-observable", train.per_observable, "One regressor per observable");
    train_cmd->add_option("--trees", train.trees, "Random-forest size");
    train_cmd->add_option("--out", train.out, "Model json")->required();
    train_cmd->add_option("--dataset-out", train.dataset_out, "Also write the dataset CSV");
    train_cmd->add_option("--manifest", train.manifest, "Also write the run manifest json");

    MitigateArgs mit;
    auto *mit_cmd = app.add_subcommand("mitigate", "Execute circuits and apply a trained model");
    add_exec_options(mit_cmd, mit.exec);
    mit_cmd->add_option("--model", mit.model, "Model json from `qemlab train`")->required();
    mit_cmd->add_option("--circuits", mit.circuits, "Circuit json (object or array)")->required();
    mit_cmd->add_flag("--zne", mit.zne, "Also run ZNE for comparison");
    mit_cmd->add_option("--out", mit.out, "Manifest json path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (bench_cmd->parsed()) {
            run_bench(bench);
        } else if (be_cmd->parsed()) {
            run_breakeven(be);
        } else if (pec_cmd->parsed()) {
            run_pec(pec);
        } else if (zc_cmd->parsed()) {
            run_zne_cost(zc);
        } else if (plot_cmd->parsed()) {
            run_plot(plot_csv, plot_kind, plot_out);
        } else if (train_cmd->parsed()) {
            run_train(train);
        } else if (mit_cmd->parsed()) {
            run_mitigate(mit);
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument &e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
