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

#include "qemlab/executor.h"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qemlab/rng.h"

namespace qemlab {

ExecutionResult Executor::run_instances(std::span<const Circuit> instances,
                                        std::span<const PauliObservable> observables, std::uint64_t seed) {
    if (instances.empty()) {
        throw std::invalid_argument("run_instances needs at least one circuit");
    }
    ExecutionResult avg;
    avg.seed = seed;
    for (std::size_t i = 0; i < instances.size(); i++) {
        auto r = run(instances[i], observables, derive_seed(seed, i));
        avg.shots += r.shots;
        for (const auto &[k, v] : r.expectations) {
            avg.expectations[k] += v / static_cast<double>(instances.size());
        }
    }
    return avg;
}

SimulatorExecutor::SimulatorExecutor(std::optional<NoiseModel> noise, std::uint64_t shots, SimulatorOptions options)
    : noise_(std::move(noise)), shots_(shots), options_(options) {
    if (noise_) {
        noise_->validate();
    }
}

ExecutionResult SimulatorExecutor::run(const Circuit &circuit, std::span<const PauliObservable> observables,
                                       std::uint64_t seed) {
    return run_with_shots(circuit, observables, seed, shots_);
}

ExecutionResult SimulatorExecutor::run_with_shots(const Circuit &circuit, std::span<const PauliObservable> observables,
                                                  std::uint64_t seed, std::uint64_t shots) const {
    const NoiseModel *noise = noise_ ? &*noise_ : nullptr;
    DensityMatrix rho = simulate(circuit, noise, options_);

    std::map<std::string, std::vector<PauliObservable>> groups;
    for (const auto &obs : observables) {
        if (obs.num_qubits() != circuit.num_qubits()) {
            throw std::invalid_argument("observable " + obs.paulis + " does not match circuit width");
        }
        groups[obs.measurement_bases()].push_back(obs);
    }

    ExecutionResult result;
    result.shots = shots;
    result.seed = seed;
    std::size_t g = 0;
    for (const auto &[bases, members] : groups) {
        Circuit rotation = append_measurement_basis(Circuit(circuit.num_qubits()), bases);
        DensityMatrix rotated = rho;
        apply_circuit(rotated, rotation, noise, options_, circuit.ops().size());
        auto part = sample_counts(rotated, shots, noise, derive_seed(seed, g), members);
        for (auto &[k, v] : part.expectations) {
            result.expectations[k] = v;
        }
        if (groups.size() == 1) {
            result.counts = std::move(part.counts);
        }
        g++;
    }
    return result;
}

ExecutionResult SimulatorExecutor::run_instances(std::span<const Circuit> instances,
                                                 std::span<const PauliObservable> observables, std::uint64_t seed) {
    if (instances.empty()) {
        throw std::invalid_argument("run_instances needs at least one circuit");
    }
    const std::uint64_t k = instances.size();
    ExecutionResult avg;
    avg.seed = seed;
    avg.shots = shots_;
    for (std::uint64_t i = 0; i < k; i++) {
        // Exact mode weights instances equally; sampled mode weights by allotted shots.
        std::uint64_t part_shots = shots_ == 0 ? 0 : shots_ / k + (i < shots_ % k ? 1 : 0);
        if (shots_ != 0 && part_shots == 0) {
            continue;
        }
        double weight = shots_ == 0 ? 1.0 / static_cast<double>(k)
                                    : static_cast<double>(part_shots) / static_cast<double>(shots_);
        auto r = run_with_shots(instances[i], observables, derive_seed(seed, i), part_shots);
        for (const auto &[key, v] : r.expectations) {
            avg.expectations[key] += weight * v;
        }
    }
    return avg;
}

SimulatorExecutor make_ideal_executor(SimulatorOptions options) {
    return SimulatorExecutor(std::nullopt, 0, options);
}

ExecutionResult CountingExecutor::run(const Circuit &circuit, std::span<const PauliObservable> observables,
                                      std::uint64_t seed) {
    executions_++;
    instances_++;
    return inner_.run(circuit, observables, seed);
}

ExecutionResult CountingExecutor::run_instances(std::span<const Circuit> instances,
                                                std::span<const PauliObservable> observables, std::uint64_t seed) {
    executions_++;
    instances_ += instances.size();
    return inner_.run_instances(instances, observables, seed);
}

}  // namespace qemlab
