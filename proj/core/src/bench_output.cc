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
#include <filesystem>
#include <fstream>

#include "qemlab/bench.h"
#include "qemlab/csv.h"
#include "qemlab/errors.h"
#include "qemlab/plot.h"

namespace qemlab {

namespace {

void write_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ResourceError("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw ResourceError("failed writing " + path.string());
    }
}

}  // namespace

std::string metrics_to_csv(const std::vector<MetricRow> &rows) {
    std::string out(kMetricsHeader);
    out += '\n';
    for (const auto &r : rows) {
        out += r.tier + ',' + r.regime + ',' + r.method + ',';
        append_double(out, r.bucket);
        for (double v : {r.mean, r.ci_low, r.ci_high}) {
            out += ',';
            append_double(out, v);
        }
        out += ',' + std::to_string(r.n) + '\n';
    }
    return out;
}

std::string errors_to_csv(const std::vector<ErrorRecord> &rows) {
    std::string out(kErrorsHeader);
    out += '\n';
    for (const auto &r : rows) {
        out += r.tier + ',' + r.regime + ',' + r.method + ',';
        append_double(out, r.bucket);
        out += ',' + r.circuit_id + ',';
        append_double(out, r.l2);
        out += '\n';
    }
    return out;
}

std::string vqe_to_csv(const std::vector<VqeRow> &rows) {
    std::string out(kVqeHeader);
    out += '\n';
    for (const auto &r : rows) {
        append_double(out, r.bond);
        for (double v : {r.exact, r.unmitigated, r.zne, r.rf, std::abs(r.zne - r.rf)}) {
            out += ',';
            append_double(out, v);
        }
        for (bool b : {r.converged_unmitigated, r.converged_zne, r.converged_rf}) {
            out += b ? ",1" : ",0";
        }
        out += '\n';
    }
    return out;
}

void write_bench_outputs(const BenchResult &result, const ExperimentConfig &cfg, const std::string &dir) {
    namespace fs = std::filesystem;
    const fs::path root(dir);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) {
        throw ResourceError("cannot create output directory " + dir + ": " + ec.message());
    }
    const nlohmann::json config = experiment_config_to_json(cfg);
    nlohmann::json summary = result.summary;
    summary["experiment"] = experiment_name(result.experiment);
    summary["config"] = config;
    write_file(root / "config.json", config.dump(2) + '\n');
    write_file(root / "summary.json", summary.dump(2) + '\n');

    const std::string metrics = metrics_to_csv(result.metrics);
    const std::string errors = errors_to_csv(result.errors);
    write_file(root / "metrics.csv", metrics);
    write_file(root / "errors.csv", errors);
    write_file(root / "metrics.svg", render_plot(metrics, PlotKind::Line));
    write_file(root / "errors.svg", render_plot(errors, PlotKind::Box));
    if (!result.vqe.empty()) {
        const std::string vqe = vqe_to_csv(result.vqe);
        write_file(root / "vqe.csv", vqe);
        write_file(root / "vqe.svg", render_plot(vqe, PlotKind::Line));
    }
}

}  // namespace qemlab
