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

#ifndef QEMLAB_PAULI_H
#define QEMLAB_PAULI_H

#include <string>
#include <string_view>
#include <vector>

#include "qemlab/circuit.h"

namespace qemlab {

/// n-qubit Pauli string with a real coefficient. Character i acts on qubit i.
struct PauliObservable {
    std::string paulis;
    double coeff = 1.0;

    PauliObservable() = default;
    /// Throws std::invalid_argument on characters outside {I, X, Y, Z}.
    explicit PauliObservable(std::string paulis, double coeff = 1.0);

    int num_qubits() const {
        return static_cast<int>(paulis.size());
    }
    int weight() const;

    /// Per-qubit measurement letters that diagonalize this observable ('I' positions become 'Z').
    std::string measurement_bases() const;

    bool operator==(const PauliObservable &) const = default;
};

std::string observable_to_json(const PauliObservable &obs);
PauliObservable observable_from_json(std::string_view text);

/// The n weight-one observables of a single basis, ordered by qubit.
std::vector<PauliObservable> weight_one_observables(int num_qubits, Basis basis);

/// All 4^n - 1 non-identity Pauli strings in lexicographic order over "IXYZ".
std::vector<PauliObservable> all_pauli_observables(int num_qubits);

}  // namespace qemlab

#endif
