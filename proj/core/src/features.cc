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

#include "qemlab/features.h"

#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qemlab/csv.h"
#include "qemlab/errors.h"

namespace qemlab {

namespace {

constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};

int letter_index(char p) {
    switch (p) {
        case 'I':
            return 0;
        case 'X':
            return 1;
        case 'Y':
            return 2;
        case 'Z':
            return 3;
    }
    throw std::invalid_argument(std::string("bad Pauli letter ") + p);
}

double rate(double t) {
    return std::isfinite(t) ? 1.0 / t : 0.0;
}

}  // namespace

FeatureLayout::FeatureLayout(const FeatureConfig &cfg) : config(cfg) {
    if (cfg.num_qubits < 1) {
        throw std::invalid_argument("feature layout needs at least one qubit");
    }
    if (cfg.angle_bins < 1) {
        throw std::invalid_argument("angle bin count must be positive");
    }
    const auto n = static_cast<std::size_t>(cfg.num_qubits);
    gate_counts = 0;
    angle_bins = gate_counts + 3;
    observable = angle_bins + static_cast<std::size_t>(cfg.angle_bins);
    noisy_target = observable + 4 * n;
    siblings = noisy_target + 1;
    noise_params = siblings + n;
    width = noise_params + (cfg.include_noise_params ? kNoiseScalarCount : 0);
}

std::vector<std::string> FeatureLayout::column_names() const {
    std::vector<std::string> names = {"count_x", "count_sx", "count_cx"};
    for (int b = 0; b < config.angle_bins; b++) {
        names.push_back("rz_bin_" + std::to_string(b));
    }
    for (int q = 0; q < config.num_qubits; q++) {
        for (char l : kLetters) {
            names.push_back("obs_q" + std::to_string(q) + "_" + l);
        }
    }
    names.push_back("noisy_target");
    for (int q = 0; q < config.num_qubits; q++) {
        names.push_back("sibling_q" + std::to_string(q));
    }
    if (config.include_noise_params) {
        for (const char *s : {"dep_1q", "dep_2q", "rate_t1", "rate_t2", "readout_flip", "coherent_angle"}) {
            names.push_back(std::string("noise_") + s);
        }
    }
    return names;
}

std::string FeatureLayout::fingerprint() const {
    return "qemlab-features-v1;n=" + std::to_string(config.num_qubits) + ";bins=" +
           std::to_string(config.angle_bins) + ";noise=" + (config.include_noise_params ? "1" : "0") +
           ";width=" + std::to_string(width);
}

std::vector<PauliObservable> sibling_observables(const PauliObservable &obs) {
    std::vector<PauliObservable> out;
    const int n = obs.num_qubits();
    for (int q = 0; q < n; q++) {
        if (obs.paulis[q] != 'I') {
            std::string s(n, 'I');
            s[q] = obs.paulis[q];
            out.emplace_back(s);
        }
    }
    return out;
}

std::vector<PauliObservable> required_observables(std::span<const PauliObservable> targets) {
    std::vector<PauliObservable> out;
    std::set<std::string> seen;
    auto add = [&](const PauliObservable &o) {
        if (seen.insert(o.paulis).second) {
            out.emplace_back(o.paulis);
        }
    };
    for (const auto &t : targets) {
        add(t);
        for (const auto &s : sibling_observables(t)) {
            add(s);
        }
    }
    return out;
}

int angle_bin(double angle, int bins) {
    const double two_pi = 2 * std::numbers::pi;
    double a = std::fmod(angle, two_pi);
    if (a < 0) {
        a += two_pi;
    }
    int b = static_cast<int>(a / (two_pi / bins));
    return std::min(b, bins - 1);
}

std::vector<double> encode(const Circuit &circuit, const PauliObservable &obs, const ExecutionResult &noisy,
                           const NoiseModel *noise, const FeatureLayout &layout) {
    const int n = layout.config.num_qubits;
    if (circuit.num_qubits() != n || obs.num_qubits() != n) {
        throw std::invalid_argument("circuit/observable width does not match the feature layout");
    }
    std::vector<double> v(layout.width, 0.0);
    for (const auto &op : circuit.ops()) {
        switch (op.kind) {
            case GateKind::X:
                v[layout.gate_counts + 0] += 1;
                break;
            case GateKind::SX:
                v[layout.gate_counts + 1] += 1;
                break;
            case GateKind::CX:
                v[layout.gate_counts + 2] += 1;
                break;
            case GateKind::RZ:
                v[layout.angle_bins + angle_bin(op.params[0], layout.config.angle_bins)] += 1;
                break;
        }
    }
    for (int q = 0; q < n; q++) {
        v[layout.observable + 4 * q + letter_index(obs.paulis[q])] = 1.0;
    }
    auto lookup = [&](const std::string &key) {
        auto it = noisy.expectations.find(key);
        if (it == noisy.expectations.end()) {
            throw std::invalid_argument("execution has no noisy value for " + key);
        }
        return it->second;
    };
    v[layout.noisy_target] = lookup(obs.paulis);
    for (int q = 0; q < n; q++) {
        if (obs.paulis[q] != 'I') {
            std::string s(n, 'I');
            s[q] = obs.paulis[q];
            v[layout.siblings + q] = lookup(s);
        }
    }
    if (layout.config.include_noise_params) {
        NoiseModel m = noise != nullptr ? *noise : NoiseModel::ideal();
        double flip = 0.0;
        for (int q = 0; q < n; q++) {
            flip += m.readout_flip_for(q);
        }
        std::size_t o = layout.noise_params;
        v[o + 0] = m.depolarizing_enabled ? m.dep_1q : 0.0;
        v[o + 1] = m.depolarizing_enabled ? m.dep_2q : 0.0;
        v[o + 2] = m.relaxation_enabled ? rate(m.t1) : 0.0;
        v[o + 3] = m.relaxation_enabled ? rate(m.t2) : 0.0;
        v[o + 4] = flip / n;
        v[o + 5] = m.coherent_enabled ? m.coherent_cx_angle : 0.0;
    }
    return v;
}

bool is_valid_split(std::string_view split) {
    return split == "train" || split == "test" || split == "interp" || split == "extrap";
}

namespace {

std::string header_line(const FeatureLayout &layout) {
    std::string h = "circuit_id,split,observable";
    for (const auto &c : layout.column_names()) {
        h += ',';
        h += c;
    }
    h += ",noisy,target";
    return h;
}

}  // namespace

std::string dataset_to_csv(const FeatureLayout &layout, const std::vector<DatasetRow> &rows) {
    std::string out = header_line(layout);
    out += '\n';
    for (const auto &r : rows) {
        if (r.features.size() != layout.width) {
            throw std::invalid_argument("row feature width does not match the layout");
        }
        if (r.circuit_id.find_first_of(",\n\r") != std::string::npos) {
            throw std::invalid_argument("circuit id must not contain commas or newlines");
        }
        if (!is_valid_split(r.split)) {
            throw std::invalid_argument("unknown split tag '" + r.split + "'");
        }
        out += r.circuit_id;
        out += ',';
        out += r.split;
        out += ',';
        out += r.observable;
        for (double x : r.features) {
            out += ',';
            append_double(out, x);
        }
        out += ',';
        append_double(out, r.noisy);
        out += ',';
        append_double(out, r.target);
        out += '\n';
    }
    return out;
}

std::vector<DatasetRow> csv_to_dataset(std::string_view text, const FeatureLayout &layout) {
    std::vector<DatasetRow> rows;
    std::size_t pos = 0;
    int line_no = 0;
    const std::string expected = header_line(layout);
    const std::size_t columns = layout.width + 5;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        line_no++;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        auto where = [&] { return "dataset line " + std::to_string(line_no) + ": "; };
        if (line_no == 1) {
            if (line != expected) {
                throw FormatError(where() + "header does not match the feature layout " + layout.fingerprint());
            }
            continue;
        }
        if (line.empty()) {
            continue;
        }
        auto fields = split_csv_fields(line);
        if (fields.size() != columns) {
            throw FormatError(where() + "expected " + std::to_string(columns) + " columns, found " +
                              std::to_string(fields.size()));
        }
        DatasetRow r;
        r.circuit_id = std::string(fields[0]);
        r.split = std::string(fields[1]);
        r.observable = std::string(fields[2]);
        if (!is_valid_split(r.split)) {
            throw FormatError(where() + "unknown split tag '" + r.split + "'");
        }
        std::vector<double> values;
        values.reserve(columns - 3);
        for (std::size_t i = 3; i < fields.size(); i++) {
            double x = 0.0;
            auto f = fields[i];
            auto res = std::from_chars(f.data(), f.data() + f.size(), x);
            if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
                throw FormatError(where() + "bad number '" + std::string(f) + "' in column " + std::to_string(i + 1));
            }
            values.push_back(x);
        }
        r.target = values.back();
        values.pop_back();
        r.noisy = values.back();
        values.pop_back();
        r.features = std::move(values);
        rows.push_back(std::move(r));
    }
    if (line_no == 0) {
        throw FormatError("dataset line 1: missing header");
    }
    return rows;
}

}  // namespace qemlab
