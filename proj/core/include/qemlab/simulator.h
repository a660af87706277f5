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

#ifndef QEMLAB_SIMULATOR_H
#define QEMLAB_SIMULATOR_H

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qemlab/circuit.h"
#include "qemlab/density_matrix.h"
#include "qemlab/noise_model.h"
#include "qemlab/pauli.h"

namespace qemlab {

struct SimulatorOptions {
    int max_qubits = 10;
    /// Re-check trace, Hermiticity and positivity after every op. Always on in debug builds.
    bool check_invariants = false;
};

Mat2 gate_matrix_x();
Mat2 gate_matrix_sx();
Mat2 gate_matrix_rz(double angle);
/// CX followed by this gate is the coherent CX error: RX(angle) on the target when the control is 1.
Mat4 gate_matrix_crx(double angle);

/// Applies `circuit` to `rho` in place with per-gate noise. `noise == nullptr` means noiseless.
/// `op_offset` shifts the index used to draw per-gate coherent spread.
void apply_circuit(DensityMatrix &rho, const Circuit &circuit, const NoiseModel *noise,
                   const SimulatorOptions &options = {}, std::size_t op_offset = 0);

/// Runs `circuit` from |0...0>. Throws ResourceError above `options.max_qubits`.
DensityMatrix simulate(const Circuit &circuit, const NoiseModel *noise = nullptr, const SimulatorOptions &options = {});
DensityMatrix simulate(const Circuit &circuit, const NoiseModel &noise, const SimulatorOptions &options = {});

/// Noiseless layers, each followed by a global depolarizing channel with rate `rates[i]`.
DensityMatrix simulate_layered(std::span<const Circuit> layers, std::span<const double> rates,
                               const SimulatorOptions &options = {});

/// coeff * Tr(rho P). Exact.
double expectation(const DensityMatrix &rho, const PauliObservable &obs);

/// Sampled (or exact, when shots == 0) measurement outcome of one execution.
struct ExecutionResult {
    /// Keyed by Pauli string.
    std::map<std::string, double> expectations;
    /// Bitstring (character q = qubit q) -> count. Present when a single measurement basis was sampled.
    std::optional<std::map<std::string, std::uint64_t>> counts;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    double at(const PauliObservable &obs) const;
};

/// Computational-basis outcome probabilities of `rho` after per-qubit readout confusion.
std::vector<double> measured_distribution(const DensityMatrix &rho, const NoiseModel *noise);

/// Samples `shots` computational-basis outcomes from diag(rho), applying the readout flips of
/// `noise`. Expectations are estimated for `observables`, read as parities on their support
/// (the circuit is assumed already rotated into their basis); when empty, the weight-one Z
/// observables are estimated. Deterministic in `seed`.
ExecutionResult sample_counts(const DensityMatrix &rho, std::uint64_t shots, const NoiseModel *noise,
                              std::uint64_t seed, std::span<const PauliObservable> observables = {});

/// Parity expectation over the support of `obs` for an outcome distribution indexed by basis state.
double parity_expectation(std::span<const double> distribution, const PauliObservable &obs);

}  // namespace qemlab

#endif
