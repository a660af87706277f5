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

#include "qemlab/pauli.h"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qemlab/errors.h"

namespace qemlab {

PauliObservable::PauliObservable(std::string p, double c) : paulis(std::move(p)), coeff(c) {
    if (paulis.empty()) {
        throw std::invalid_argument("empty Pauli string");
    }
    for (char &ch : paulis) {
        if (ch == 'i' || ch == 'x' || ch == 'y' || ch == 'z') {
            ch = static_cast<char>(ch - 'a' + 'A');
        }
        if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z') {
            throw std::invalid_argument("invalid Pauli string '" + paulis + "'");
        }
    }
}

int PauliObservable::weight() const {
    return static_cast<int>(std::count_if(paulis.begin(), paulis.end(), [](char c) { return c != 'I'; }));
}

std::string PauliObservable::measurement_bases() const {
    std::string out = paulis;
    std::replace(out.begin(), out.end(), 'I', 'Z');
    return out;
}

std::string observable_to_json(const PauliObservable &obs) {
    return nlohmann::json{{"pauli", obs.paulis}, {"coeff", obs.coeff}}.dump();
}

PauliObservable observable_from_json(std::string_view text) {
    try {
        auto j = nlohmann::json::parse(text);
        return PauliObservable(j.at("pauli").get<std::string>(), j.value("coeff", 1.0));
    } catch (const nlohmann::json::exception &e) {
        throw FormatError(std::string("invalid observable json: ") + e.what());
    }
}

std::vector<PauliObservable> weight_one_observables(int num_qubits, Basis basis) {
    std::vector<PauliObservable> out;
    out.reserve(num_qubits);
    for (int q = 0; q < num_qubits; q++) {
        std::string s(num_qubits, 'I');
        s[q] = basis_letter(basis);
        out.emplace_back(std::move(s));
    }
    return out;
}

std::vector<PauliObservable> all_pauli_observables(int num_qubits) {
    static constexpr char letters[] = {'I', 'X', 'Y', 'Z'};
    std::size_t total = std::size_t{1} << (2 * num_qubits);
    std::vector<PauliObservable> out;
    out.reserve(total - 1);
    for (std::size_t code = 1; code < total; code++) {
        std::string s(num_qubits, 'I');
        std::size_t c = code;
        for (int q = num_qubits - 1; q >= 0; q--) {
            s[q] = letters[c & 3];
            c >>= 2;
        }
        out.emplace_back(std::move(s));
    }
    return out;
}

}  // namespace qemlab
