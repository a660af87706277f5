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

#include "qemlab/noise_model.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qemlab/errors.h"

namespace qemlab {

double infidelity_to_depolarizing(double r, int d) {
    if (d < 2) {
        throw std::invalid_argument("subsystem dimension must be at least 2");
    }
    double max_r = static_cast<double>(d - 1) / d;
    if (!(r >= 0.0) || r > max_r) {
        throw std::invalid_argument(
            "average gate infidelity " + std::to_string(r) + " outside [0, " + std::to_string(max_r) + "]");
    }
    return r * d / (d - 1);
}

double depolarizing_to_infidelity(double p, int d) {
    return p * (d - 1) / d;
}

namespace {

void check_probability(double p, const char *what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
    }
}

}  // namespace

void NoiseModel::validate() const {
    check_probability(dep_1q, "dep_1q");
    check_probability(dep_2q, "dep_2q");
    check_probability(readout_flip, "readout_flip");
    for (double r : readout_flip_per_qubit) {
        check_probability(r, "readout_flip_per_qubit");
    }
    if (!(t1 > 0.0) || !(t2 > 0.0)) {
        throw std::invalid_argument("t1 and t2 must be positive");
    }
    if (std::isfinite(t2) && t2 > 2.0 * t1) {
        throw std::invalid_argument("t2 must not exceed 2 * t1");
    }
    if (!(dur_1q >= 0.0) || !(dur_2q >= 0.0) || !std::isfinite(dur_1q) || !std::isfinite(dur_2q)) {
        throw std::invalid_argument("gate durations must be finite and non-negative");
    }
    if (!std::isfinite(coherent_cx_angle) || !std::isfinite(coherent_cx_spread) || coherent_cx_spread < 0.0) {
        throw std::invalid_argument("coherent over-rotation parameters must be finite (spread >= 0)");
    }
}

double NoiseModel::readout_flip_for(int qubit) const {
    if (!readout_enabled) {
        return 0.0;
    }
    if (!readout_flip_per_qubit.empty()) {
        return readout_flip_per_qubit.at(static_cast<std::size_t>(qubit));
    }
    return readout_flip;
}

bool NoiseModel::has_readout_error() const {
    if (!readout_enabled) {
        return false;
    }
    if (readout_flip > 0.0) {
        return true;
    }
    for (double r : readout_flip_per_qubit) {
        if (r > 0.0) {
            return true;
        }
    }
    return false;
}

NoiseModel NoiseModel::ideal() {
    NoiseModel m;
    m.name = "ideal";
    m.depolarizing_enabled = false;
    m.relaxation_enabled = false;
    m.readout_enabled = false;
    m.coherent_enabled = false;
    return m;
}

NoiseModel NoiseModel::preset(std::string_view name) {
    NoiseModel m;
    m.name = std::string(name);
    // Gate errors are average gate infidelities; the coherent CX angle is only used when enabled.
    m.coherent_cx_angle = 0.04 * std::numbers::pi;
    if (name == "lima-like") {
        m.t1 = 61.0;
        m.t2 = 73.0;
        m.readout_flip = 3.4e-2;
        m.dep_1q = infidelity_to_depolarizing(4.4e-4, 2);
        m.dep_2q = infidelity_to_depolarizing(1.2e-2, 4);
        return m;
    }
    if (name == "belem-like") {
        m.t1 = 80.0;
        m.t2 = 79.0;
        m.readout_flip = 3.0e-2;
        m.dep_1q = infidelity_to_depolarizing(4.1e-4, 2);
        m.dep_2q = infidelity_to_depolarizing(1.4e-2, 4);
        return m;
    }
    if (name == "ideal") {
        return ideal();
    }
    throw ConfigError("unknown noise preset '" + std::string(name) + "' (known: lima-like, belem-like, ideal)");
}

std::vector<std::string> NoiseModel::preset_names() {
    return {"lima-like", "belem-like", "ideal"};
}

namespace {

nlohmann::json time_to_json(double t) {
    if (std::isfinite(t)) {
        return t;
    }
    return nullptr;
}

double time_from_json(const nlohmann::json &j) {
    if (j.is_null()) {
        return std::numeric_limits<double>::infinity();
    }
    return j.get<double>();
}

}  // namespace

std::string noise_model_to_json(const NoiseModel &m) {
    nlohmann::json j{
        {"name", m.name},
        {"dep_1q", m.dep_1q},
        {"dep_2q", m.dep_2q},
        {"t1", time_to_json(m.t1)},
        {"t2", time_to_json(m.t2)},
        {"dur_1q", m.dur_1q},
        {"dur_2q", m.dur_2q},
        {"readout_flip", m.readout_flip},
        {"readout_flip_per_qubit", m.readout_flip_per_qubit},
        {"coherent_cx_angle", m.coherent_cx_angle},
        {"coherent_cx_spread", m.coherent_cx_spread},
        {"coherent_spread_seed", m.coherent_spread_seed},
        {"depolarizing", m.depolarizing_enabled},
        {"relaxation", m.relaxation_enabled},
        {"readout", m.readout_enabled},
        {"coherent", m.coherent_enabled},
    };
    return j.dump();
}

NoiseModel noise_model_from_json(std::string_view text) {
    try {
        auto j = nlohmann::json::parse(text);
        NoiseModel m = j.contains("preset") ? NoiseModel::preset(j.at("preset").get<std::string>()) : NoiseModel{};
        m.name = j.value("name", m.name);
        m.dep_1q = j.value("dep_1q", m.dep_1q);
        m.dep_2q = j.value("dep_2q", m.dep_2q);
        if (j.contains("t1")) {
            m.t1 = time_from_json(j.at("t1"));
        }
        if (j.contains("t2")) {
            m.t2 = time_from_json(j.at("t2"));
        }
        m.dur_1q = j.value("dur_1q", m.dur_1q);
        m.dur_2q = j.value("dur_2q", m.dur_2q);
        m.readout_flip = j.value("readout_flip", m.readout_flip);
        m.readout_flip_per_qubit = j.value("readout_flip_per_qubit", m.readout_flip_per_qubit);
        m.coherent_cx_angle = j.value("coherent_cx_angle", m.coherent_cx_angle);
        m.coherent_cx_spread = j.value("coherent_cx_spread", m.coherent_cx_spread);
        m.coherent_spread_seed = j.value("coherent_spread_seed", m.coherent_spread_seed);
        m.depolarizing_enabled = j.value("depolarizing", m.depolarizing_enabled);
        m.relaxation_enabled = j.value("relaxation", m.relaxation_enabled);
        m.readout_enabled = j.value("readout", m.readout_enabled);
        m.coherent_enabled = j.value("coherent", m.coherent_enabled);
        m.validate();
        return m;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("invalid noise model json: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
}

}  // namespace qemlab
