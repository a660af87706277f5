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

#include "qemlab/simulator.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "qemlab/errors.h"
#include "qemlab/rng.h"

namespace qemlab {

Mat2 gate_matrix_x() {
    return {0.0, 1.0, 1.0, 0.0};
}

Mat2 gate_matrix_sx() {
    const cplx a{0.5, 0.5};
    const cplx b{0.5, -0.5};
    return {a, b, b, a};
}

Mat2 gate_matrix_rz(double angle) {
    return {std::polar(1.0, -angle / 2), 0.0, 0.0, std::polar(1.0, angle / 2)};
}

Mat4 gate_matrix_crx(double angle) {
    Mat4 u{};
    const double c = std::cos(angle / 2);
    const cplx s{0.0, -std::sin(angle / 2)};
    // Local index = control + 2 * target.
    u[0 * 4 + 0] = 1.0;
    u[2 * 4 + 2] = 1.0;
    u[1 * 4 + 1] = c;
    u[1 * 4 + 3] = s;
    u[3 * 4 + 1] = s;
    u[3 * 4 + 3] = c;
    return u;
}

namespace {

void check_capacity(int num_qubits, const SimulatorOptions &options) {
    if (num_qubits > options.max_qubits) {
        throw ResourceError(
            "circuit has " + std::to_string(num_qubits) + " qubits; simulator limit is " +
            std::to_string(options.max_qubits));
    }
}

bool want_checks(const SimulatorOptions &options) {
#ifndef NDEBUG
    (void)options;
    return true;
#else
    return options.check_invariants;
#endif
}

void relax_qubit(DensityMatrix &rho, int q, double duration, const NoiseModel &noise) {
    if (duration <= 0.0) {
        return;
    }
    double gamma = std::isfinite(noise.t1) ? 1.0 - std::exp(-duration / noise.t1) : 0.0;
    double coherence = std::isfinite(noise.t2) ? std::exp(-duration / noise.t2) : 1.0;
    // Without a finite T2 the coherence decays only through amplitude damping.
    if (!std::isfinite(noise.t2)) {
        coherence = std::sqrt(1.0 - gamma);
    }
    rho.relax(q, gamma, coherence);
}

}  // namespace

void apply_circuit(DensityMatrix &rho, const Circuit &circuit, const NoiseModel *noise, const SimulatorOptions &options,
                   std::size_t op_offset) {
    if (circuit.num_qubits() != rho.num_qubits()) {
        throw std::invalid_argument("circuit and density matrix qubit counts differ");
    }
    const bool checks = want_checks(options);
    const Mat2 x = gate_matrix_x();
    const Mat2 sx = gate_matrix_sx();
    std::size_t index = op_offset;
    for (const auto &op : circuit.ops()) {
        switch (op.kind) {
            case GateKind::RZ:
                rho.apply_rz(op.qubits[0], op.params[0]);
                break;
            case GateKind::X:
            case GateKind::SX: {
                int q = op.qubits[0];
                rho.apply_1q(op.kind == GateKind::X ? x : sx, q);
                if (noise != nullptr) {
                    if (noise->depolarizing_enabled) {
                        rho.depolarize_1q(q, noise->dep_1q);
                    }
                    if (noise->relaxation_enabled) {
                        relax_qubit(rho, q, noise->dur_1q, *noise);
                    }
                }
                break;
            }
            case GateKind::CX: {
                int c = op.qubits[0];
                int t = op.qubits[1];
                rho.apply_cx(c, t);
                if (noise != nullptr) {
                    if (noise->coherent_enabled) {
                        double angle = noise->coherent_cx_angle;
                        if (noise->coherent_cx_spread > 0.0) {
                            Rng rng(derive_seed(noise->coherent_spread_seed, index));
                            angle += noise->coherent_cx_spread * rng.normal();
                        }
                        if (angle != 0.0) {
                            rho.apply_2q(gate_matrix_crx(angle), c, t);
                        }
                    }
                    if (noise->depolarizing_enabled) {
                        rho.depolarize_2q(c, t, noise->dep_2q);
                    }
                    if (noise->relaxation_enabled) {
                        relax_qubit(rho, c, noise->dur_2q, *noise);
                        relax_qubit(rho, t, noise->dur_2q, *noise);
                    }
                }
                break;
            }
        }
        index++;
        if (checks && !rho.is_physical()) {
            throw std::logic_error("density matrix left the physical set after op " + std::to_string(index));
        }
    }
}

DensityMatrix simulate(const Circuit &circuit, const NoiseModel *noise, const SimulatorOptions &options) {
    check_capacity(circuit.num_qubits(), options);
    if (noise != nullptr) {
        noise->validate();
    }
    DensityMatrix rho(circuit.num_qubits());
    apply_circuit(rho, circuit, noise, options);
    return rho;
}

DensityMatrix simulate(const Circuit &circuit, const NoiseModel &noise, const SimulatorOptions &options) {
    return simulate(circuit, &noise, options);
}

DensityMatrix simulate_layered(std::span<const Circuit> layers, std::span<const double> rates,
                               const SimulatorOptions &options) {
    if (layers.empty()) {
        throw std::invalid_argument("need at least one layer");
    }
    if (layers.size() != rates.size()) {
        throw std::invalid_argument("one depolarizing rate per layer is required");
    }
    check_capacity(layers.front().num_qubits(), options);
    DensityMatrix rho(layers.front().num_qubits());
    for (std::size_t i = 0; i < layers.size(); i++) {
        apply_circuit(rho, layers[i], nullptr, options);
        rho.depolarize_all(rates[i]);
    }
    return rho;
}

double expectation(const DensityMatrix &rho, const PauliObservable &obs) {
    if (obs.num_qubits() != rho.num_qubits()) {
        throw std::invalid_argument(
            "observable acts on " + std::to_string(obs.num_qubits()) + " qubits, state has " +
            std::to_string(rho.num_qubits()));
    }
    std::size_t xmask = 0;
    std::size_t zmask = 0;
    int num_y = 0;
    for (int q = 0; q < obs.num_qubits(); q++) {
        char p = obs.paulis[q];
        std::size_t bit = std::size_t{1} << q;
        if (p == 'X' || p == 'Y') {
            xmask |= bit;
        }
        if (p == 'Z' || p == 'Y') {
            zmask |= bit;
        }
        num_y += p == 'Y';
    }
    // P|c> = i^{#Y} (-1)^{|c & zmask|} |c ^ xmask>, so Tr(rho P) = sum_c phase(c) rho[c, c ^ xmask].
    static constexpr cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const cplx global = i_pow[num_y % 4];
    cplx total = 0.0;
    for (std::size_t c = 0; c < rho.dim(); c++) {
        double sign = (std::popcount(c & zmask) & 1) ? -1.0 : 1.0;
        total += sign * rho(c, c ^ xmask);
    }
    return obs.coeff * (global * total).real();
}

double ExecutionResult::at(const PauliObservable &obs) const {
    auto it = expectations.find(obs.paulis);
    if (it == expectations.end()) {
        throw std::out_of_range("no value recorded for observable " + obs.paulis);
    }
    return it->second;
}

std::vector<double> measured_distribution(const DensityMatrix &rho, const NoiseModel *noise) {
    std::vector<double> probs = rho.diagonal();
    double total = 0.0;
    for (double &p : probs) {
        p = std::max(p, 0.0);
        total += p;
    }
    for (double &p : probs) {
        p /= total;
    }
    if (noise == nullptr || !noise->has_readout_error()) {
        return probs;
    }
    for (int q = 0; q < rho.num_qubits(); q++) {
        double f = noise->readout_flip_for(q);
        if (f == 0.0) {
            continue;
        }
        std::size_t m = std::size_t{1} << q;
        for (std::size_t i = 0; i < probs.size(); i++) {
            if (i & m) {
                continue;
            }
            double p0 = probs[i];
            double p1 = probs[i | m];
            probs[i] = (1.0 - f) * p0 + f * p1;
            probs[i | m] = f * p0 + (1.0 - f) * p1;
        }
    }
    return probs;
}

namespace {

std::size_t support_mask(const PauliObservable &obs) {
    std::size_t mask = 0;
    for (int q = 0; q < obs.num_qubits(); q++) {
        if (obs.paulis[q] != 'I') {
            mask |= std::size_t{1} << q;
        }
    }
    return mask;
}

std::string bitstring(std::size_t index, int n) {
    std::string s(n, '0');
    for (int q = 0; q < n; q++) {
        if (index & (std::size_t{1} << q)) {
            s[q] = '1';
        }
    }
    return s;
}

}  // namespace

double parity_expectation(std::span<const double> distribution, const PauliObservable &obs) {
    std::size_t mask = support_mask(obs);
    double total = 0.0;
    for (std::size_t i = 0; i < distribution.size(); i++) {
        total += (std::popcount(i & mask) & 1) ? -distribution[i] : distribution[i];
    }
    return obs.coeff * total;
}

ExecutionResult sample_counts(const DensityMatrix &rho, std::uint64_t shots, const NoiseModel *noise,
                              std::uint64_t seed, std::span<const PauliObservable> observables) {
    std::vector<PauliObservable> defaults;
    if (observables.empty()) {
        defaults = weight_one_observables(rho.num_qubits(), Basis::Z);
        observables = defaults;
    }
    for (const auto &obs : observables) {
        if (obs.num_qubits() != rho.num_qubits()) {
            throw std::invalid_argument("observable width does not match the state");
        }
    }
    ExecutionResult result;
    result.shots = shots;
    result.seed = seed;
    std::vector<double> probs = measured_distribution(rho, noise);
    if (shots == 0) {
        for (const auto &obs : observables) {
            result.expectations[obs.paulis] = parity_expectation(probs, obs);
        }
        return result;
    }
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); i++) {
        acc += probs[i];
        cdf[i] = acc;
    }
    std::vector<std::uint64_t> hist(probs.size(), 0);
    Rng rng(seed);
    for (std::uint64_t s = 0; s < shots; s++) {
        double u = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
        hist[k]++;
    }
    std::vector<double> freq(hist.size());
    std::map<std::string, std::uint64_t> counts;
    for (std::size_t i = 0; i < hist.size(); i++) {
        freq[i] = static_cast<double>(hist[i]) / static_cast<double>(shots);
        if (hist[i] != 0) {
            counts[bitstring(i, rho.num_qubits())] = hist[i];
        }
    }
    for (const auto &obs : observables) {
        result.expectations[obs.paulis] = parity_expectation(freq, obs);
    }
    result.counts = std::move(counts);
    return result;
}

}  // namespace qemlab
