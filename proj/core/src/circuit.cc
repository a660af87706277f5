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

#include "qemlab/circuit.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qemlab/errors.h"
#include "qemlab/rng.h"

namespace qemlab {

std::string_view gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::X:
            return "x";
        case GateKind::SX:
            return "sx";
        case GateKind::RZ:
            return "rz";
        case GateKind::CX:
            return "cx";
    }
    throw std::logic_error("unknown gate kind");
}

GateKind parse_gate_name(std::string_view name) {
    if (name == "x") {
        return GateKind::X;
    }
    if (name == "sx") {
        return GateKind::SX;
    }
    if (name == "rz") {
        return GateKind::RZ;
    }
    if (name == "cx") {
        return GateKind::CX;
    }
    throw std::invalid_argument("unknown gate name '" + std::string(name) + "'");
}

void validate_op(const GateOp &op, int num_qubits) {
    std::size_t expected_qubits = op.kind == GateKind::CX ? 2 : 1;
    std::size_t expected_params = op.kind == GateKind::RZ ? 1 : 0;
    if (op.qubits.size() != expected_qubits) {
        throw std::invalid_argument(
            std::string(gate_name(op.kind)) + " expects " + std::to_string(expected_qubits) + " qubit(s), got " +
            std::to_string(op.qubits.size()));
    }
    if (op.params.size() != expected_params) {
        throw std::invalid_argument(
            std::string(gate_name(op.kind)) + " expects " + std::to_string(expected_params) + " parameter(s), got " +
            std::to_string(op.params.size()));
    }
    for (int q : op.qubits) {
        if (q < 0 || q >= num_qubits) {
            throw std::invalid_argument(
                "qubit index " + std::to_string(q) + " out of range for " + std::to_string(num_qubits) + " qubits");
        }
    }
    if (op.qubits.size() == 2 && op.qubits[0] == op.qubits[1]) {
        throw std::invalid_argument("cx qubits must be distinct");
    }
    for (double p : op.params) {
        if (!std::isfinite(p)) {
            throw std::invalid_argument("gate parameter must be finite");
        }
    }
}

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits <= 0) {
        throw std::invalid_argument("circuit needs at least one qubit");
    }
}

Circuit &Circuit::append(GateOp op) {
    validate_op(op, num_qubits_);
    ops_.push_back(std::move(op));
    return *this;
}

Circuit &Circuit::x(int q) {
    return append({GateKind::X, {q}, {}});
}

Circuit &Circuit::sx(int q) {
    return append({GateKind::SX, {q}, {}});
}

Circuit &Circuit::rz(int q, double angle) {
    return append({GateKind::RZ, {q}, {angle}});
}

Circuit &Circuit::cx(int control, int target) {
    return append({GateKind::CX, {control, target}, {}});
}

Circuit &Circuit::extend(const Circuit &other) {
    if (other.num_qubits_ != num_qubits_) {
        throw std::invalid_argument("cannot extend a circuit with one of a different width");
    }
    ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
    return *this;
}

std::size_t Circuit::count(GateKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(ops_.begin(), ops_.end(), [kind](const GateOp &op) { return op.kind == kind; }));
}

int two_qubit_depth(const Circuit &circuit) {
    std::vector<int> level(circuit.num_qubits(), 0);
    int depth = 0;
    for (const auto &op : circuit.ops()) {
        if (op.kind != GateKind::CX) {
            continue;
        }
        int l = std::max(level[op.qubits[0]], level[op.qubits[1]]) + 1;
        level[op.qubits[0]] = l;
        level[op.qubits[1]] = l;
        depth = std::max(depth, l);
    }
    return depth;
}

Circuit fold_two_qubit_gates(const Circuit &circuit, int factor) {
    if (factor <= 0 || factor % 2 == 0) {
        throw std::invalid_argument("folding factor must be a positive odd integer, got " + std::to_string(factor));
    }
    Circuit out(circuit.num_qubits());
    out.metadata() = circuit.metadata();
    for (const auto &op : circuit.ops()) {
        int copies = op.kind == GateKind::CX ? factor : 1;
        for (int k = 0; k < copies; k++) {
            out.append(op);
        }
    }
    if (factor != 1) {
        out.metadata()["fold_factor"] = std::to_string(factor);
    }
    return out;
}

TwoQubitPauli twirl_correction(TwoQubitPauli pre) {
    // CX maps X_c -> X_c X_t and Z_t -> Z_c Z_t; X_t and Z_c are fixed.
    return TwoQubitPauli{
        .xc = pre.xc,
        .zc = pre.zc != pre.zt,
        .xt = pre.xt != pre.xc,
        .zt = pre.zt,
    };
}

namespace {

struct PendingPauli {
    bool x = false;
    bool z = false;
};

void emit_pauli(Circuit &out, int q, PendingPauli &p) {
    if (p.z) {
        out.rz(q, std::numbers::pi);
    }
    if (p.x) {
        out.x(q);
    }
    p = {};
}

}  // namespace

Circuit pauli_twirl(const Circuit &circuit, std::uint64_t seed) {
    Rng rng(seed);
    Circuit out(circuit.num_qubits());
    out.metadata() = circuit.metadata();
    out.metadata()["twirl_seed"] = std::to_string(seed);
    std::vector<PendingPauli> pending(circuit.num_qubits());
    for (const auto &op : circuit.ops()) {
        if (op.kind != GateKind::CX) {
            emit_pauli(out, op.qubits[0], pending[op.qubits[0]]);
            out.append(op);
            continue;
        }
        int c = op.qubits[0];
        int t = op.qubits[1];
        auto bits = rng.below(16);
        TwoQubitPauli pre{
            .xc = (bits & 1) != 0,
            .zc = (bits & 2) != 0,
            .xt = (bits & 4) != 0,
            .zt = (bits & 8) != 0,
        };
        pending[c].x ^= pre.xc;
        pending[c].z ^= pre.zc;
        pending[t].x ^= pre.xt;
        pending[t].z ^= pre.zt;
        emit_pauli(out, c, pending[c]);
        emit_pauli(out, t, pending[t]);
        out.append(op);
        auto post = twirl_correction(pre);
        pending[c] = {post.xc, post.zc};
        pending[t] = {post.xt, post.zt};
    }
    for (int q = 0; q < circuit.num_qubits(); q++) {
        emit_pauli(out, q, pending[q]);
    }
    return out;
}

Basis parse_basis(char letter) {
    switch (letter) {
        case 'X':
        case 'x':
            return Basis::X;
        case 'Y':
        case 'y':
            return Basis::Y;
        case 'Z':
        case 'z':
            return Basis::Z;
        default:
            throw std::invalid_argument(std::string("unknown measurement basis '") + letter + "'");
    }
}

char basis_letter(Basis basis) {
    switch (basis) {
        case Basis::X:
            return 'X';
        case Basis::Y:
            return 'Y';
        case Basis::Z:
            return 'Z';
    }
    throw std::logic_error("unknown basis");
}

Circuit append_measurement_basis(const Circuit &circuit, Basis basis) {
    return append_measurement_basis(circuit, std::string(circuit.num_qubits(), basis_letter(basis)));
}

Circuit append_measurement_basis(const Circuit &circuit, std::string_view bases) {
    if (static_cast<int>(bases.size()) != circuit.num_qubits()) {
        throw std::invalid_argument("basis string length does not match qubit count");
    }
    Circuit out = circuit;
    for (int q = 0; q < circuit.num_qubits(); q++) {
        char b = bases[q];
        if (b == 'I' || b == 'i') {
            continue;
        }
        switch (parse_basis(b)) {
            case Basis::X:
                // (sx . rz(pi/2))^dag Z (sx . rz(pi/2)) = X
                out.rz(q, std::numbers::pi / 2);
                out.sx(q);
                break;
            case Basis::Y:
                // sx^dag Z sx = Y
                out.sx(q);
                break;
            case Basis::Z:
                break;
        }
    }
    return out;
}

bool is_clifford(const Circuit &circuit, double tol) {
    constexpr double quarter = std::numbers::pi / 2;
    for (const auto &op : circuit.ops()) {
        if (op.kind != GateKind::RZ) {
            continue;
        }
        double a = op.params[0];
        if (std::abs(a - std::round(a / quarter) * quarter) > tol) {
            return false;
        }
    }
    return true;
}

std::string circuit_to_json(const Circuit &circuit) {
    nlohmann::json ops = nlohmann::json::array();
    for (const auto &op : circuit.ops()) {
        ops.push_back({{"name", gate_name(op.kind)}, {"qubits", op.qubits}, {"params", op.params}});
    }
    nlohmann::json j{
        {"num_qubits", circuit.num_qubits()},
        {"ops", std::move(ops)},
        {"metadata", circuit.metadata()},
    };
    return j.dump();
}

Circuit circuit_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        Circuit circuit(j.at("num_qubits").get<int>());
        for (const auto &o : j.at("ops")) {
            GateOp op{parse_gate_name(o.at("name").get<std::string>()), o.at("qubits").get<std::vector<int>>(), {}};
            if (o.contains("params")) {
                op.params = o.at("params").get<std::vector<double>>();
            }
            circuit.append(std::move(op));
        }
        if (j.contains("metadata")) {
            circuit.metadata() = j.at("metadata").get<std::map<std::string, std::string>>();
        }
        return circuit;
    } catch (const nlohmann::json::exception &e) {
        throw FormatError(std::string("invalid circuit json: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw FormatError(std::string("invalid circuit: ") + e.what());
    }
}

}  // namespace qemlab
