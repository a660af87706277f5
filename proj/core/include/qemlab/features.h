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

#ifndef QEMLAB_FEATURES_H
#define QEMLAB_FEATURES_H

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qemlab/circuit.h"
#include "qemlab/noise_model.h"
#include "qemlab/pauli.h"
#include "qemlab/simulator.h"

namespace qemlab {

struct FeatureConfig {
    int num_qubits = 4;
    int angle_bins = 8;
    bool include_noise_params = false;
};

/// Segment offsets of the encoded vector, in order:
/// gate counts (X, SX, CX) | RZ angle bins | observable one-hot (I, X, Y, Z per qubit) |
/// noisy target | noisy siblings (one per qubit) | noise scalars (optional).
struct FeatureLayout {
    FeatureConfig config;
    std::size_t gate_counts = 0;
    std::size_t angle_bins = 0;
    std::size_t observable = 0;
    std::size_t noisy_target = 0;
    std::size_t siblings = 0;
    std::size_t noise_params = 0;
    std::size_t width = 0;

    explicit FeatureLayout(const FeatureConfig &config);

    std::vector<std::string> column_names() const;
    /// Stable textual identity, stored with trained models.
    std::string fingerprint() const;
};

constexpr std::size_t kNoiseScalarCount = 6;

/// Sibling slot q holds the noisy value of the weight-one Pauli carrying obs' letter at q
/// (slot is 0 where obs has I). Returns those observables in slot order, skipping I slots.
std::vector<PauliObservable> sibling_observables(const PauliObservable &obs);

/// Target plus its siblings, deduplicated: everything `encode` reads from an execution.
std::vector<PauliObservable> required_observables(std::span<const PauliObservable> targets);

/// Encodes one (circuit, observable) pair. Gate counts are taken from `circuit` as given, so
/// pass the logical circuit without measurement-basis changes. Throws std::invalid_argument when
/// the execution lacks the target or a sibling value, or on a width mismatch.
std::vector<double> encode(const Circuit &circuit, const PauliObservable &obs, const ExecutionResult &noisy,
                           const NoiseModel *noise, const FeatureLayout &layout);

/// Bin index of an RZ angle, after wrapping into [0, 2pi).
int angle_bin(double angle, int bins);

struct DatasetRow {
    std::string circuit_id;
    /// One of train, test, interp, extrap.
    std::string split = "train";
    std::string observable;
    std::vector<double> features;
    double noisy = 0.0;
    double target = 0.0;

    bool operator==(const DatasetRow &) const = default;
};

bool is_valid_split(std::string_view split);

/// CSV with header `circuit_id,split,observable,<feature columns>,noisy,target`. Values are
/// written in shortest round-trip form, so parsing restores them bit for bit.
std::string dataset_to_csv(const FeatureLayout &layout, const std::vector<DatasetRow> &rows);
/// Parses and validates against `layout`; throws FormatError naming the offending line.
std::vector<DatasetRow> csv_to_dataset(std::string_view text, const FeatureLayout &layout);

}  // namespace qemlab

#endif
