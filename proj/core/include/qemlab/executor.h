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

#ifndef QEMLAB_EXECUTOR_H
#define QEMLAB_EXECUTOR_H

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>

#include "qemlab/circuit.h"
#include "qemlab/noise_model.h"
#include "qemlab/pauli.h"
#include "qemlab/simulator.h"

namespace qemlab {

/// Abstract circuit runner. One call is one logical execution of a circuit.
class Executor {
   public:
    virtual ~Executor() = default;

    /// Runs `circuit` and estimates every observable on its final state. Observables may need
    /// different measurement bases; the executor groups them.
    virtual ExecutionResult run(const Circuit &circuit, std::span<const PauliObservable> observables,
                                std::uint64_t seed) = 0;

    /// One logical execution spread over logically equivalent instances (e.g. Pauli twirls);
    /// returns the instance-averaged estimates. The default runs each instance in full.
    virtual ExecutionResult run_instances(std::span<const Circuit> instances,
                                          std::span<const PauliObservable> observables, std::uint64_t seed);

    /// False when submissions must be serialized by the caller.
    virtual bool concurrent_safe() const {
        return true;
    }
};

/// Density-matrix backend. `shots == 0` returns exact (noisy) expectations.
class SimulatorExecutor final : public Executor {
   public:
    SimulatorExecutor(std::optional<NoiseModel> noise, std::uint64_t shots, SimulatorOptions options = {});

    ExecutionResult run(const Circuit &circuit, std::span<const PauliObservable> observables,
                        std::uint64_t seed) override;
    /// Splits the shot budget evenly across instances, so a twirled execution costs the same
    /// number of shots as a plain one.
    ExecutionResult run_instances(std::span<const Circuit> instances, std::span<const PauliObservable> observables,
                                  std::uint64_t seed) override;

    const std::optional<NoiseModel> &noise() const {
        return noise_;
    }
    std::uint64_t shots() const {
        return shots_;
    }

   private:
    ExecutionResult run_with_shots(const Circuit &circuit, std::span<const PauliObservable> observables,
                                   std::uint64_t seed, std::uint64_t shots) const;

    std::optional<NoiseModel> noise_;
    std::uint64_t shots_;
    SimulatorOptions options_;
};

/// Noiseless, exact expectations (the ideal-simulation target source).
SimulatorExecutor make_ideal_executor(SimulatorOptions options = {});

/// Counts logical executions and circuit instances submitted to an inner executor.
class CountingExecutor final : public Executor {
   public:
    explicit CountingExecutor(Executor &inner) : inner_(inner) {
    }

    ExecutionResult run(const Circuit &circuit, std::span<const PauliObservable> observables,
                        std::uint64_t seed) override;
    ExecutionResult run_instances(std::span<const Circuit> instances, std::span<const PauliObservable> observables,
                                  std::uint64_t seed) override;
    bool concurrent_safe() const override {
        return inner_.concurrent_safe();
    }

    std::uint64_t executions() const {
        return executions_.load();
    }
    std::uint64_t instances() const {
        return instances_.load();
    }
    void reset() {
        executions_ = 0;
        instances_ = 0;
    }

   private:
    Executor &inner_;
    std::atomic<std::uint64_t> executions_{0};
    std::atomic<std::uint64_t> instances_{0};
};

}  // namespace qemlab

#endif
