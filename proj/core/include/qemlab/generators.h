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

#ifndef QEMLAB_GENERATORS_H
#define QEMLAB_GENERATORS_H

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qemlab/circuit.h"
#include "qemlab/pauli.h"

namespace qemlab {

/// Random native-gate circuit whose two_qubit_depth is exactly `depth_2q`. Gates are drawn
/// uniformly from {X, SX, RZ, CX} on uniformly chosen qubits (RZ angles uniform in [0, 2pi)).
Circuit random_circuit(int n_qubits, int depth_2q, std::uint64_t seed);

/// Trotterized 1D transverse-field Ising chain, H = -J sum Z_j Z_{j+1} + h sum X_j.
struct TfimParams {
    int n_sites = 4;
    int steps = 1;
    /// Angles per step are 2J (ZZ) and 2h (X).
    double J = 0.0;
    double h = 0.0;
    std::vector<int> initial_excitations = {0};
};

Circuit trotter_tfim(const TfimParams &params);

/// Native-gate compilations, exact up to global phase.
void append_rx(Circuit &circuit, int qubit, double theta);
void append_ry(Circuit &circuit, int qubit, double theta);

/// Two-qubit two-local ansatz: RY(t0) RY(t1), RZ(t2) RZ(t3), CX(0, 1), RY(t4) RY(t5), RZ(t6) RZ(t7).
Circuit two_local_ansatz(std::span<const double> thetas);
constexpr int kAnsatzParams = 8;

struct H2Coefficients {
    double bond_length = 0.0;
    double c_xx = 0.0;
    double c_zz = 0.0;
    double c_iz = 0.0;
    double c_zi = 0.0;
    double offset = 0.0;
};

/// Bond-length keyed coefficient table (CSV header `bond_length,c_xx,c_zz,c_iz,c_zi,offset`).
class BondTable {
   public:
    static BondTable from_csv(std::string_view text);
    static BondTable load(const std::string &path);

    /// Throws ConfigError listing the available keys when `bond_length` is absent.
    const H2Coefficients &at(double bond_length) const;
    std::vector<double> bond_lengths() const;

   private:
    std::vector<H2Coefficients> rows_;
};

struct H2Hamiltonian {
    /// XX, ZZ, IZ, ZI with their coefficients.
    std::vector<PauliObservable> terms;
    double offset = 0.0;

    /// offset + sum_k coeff_k <P_k>, given unit-coefficient expectations keyed by Pauli string.
    double energy(const std::map<std::string, double> &unit_expectations) const;
    /// Unit-coefficient copies of the terms, for measurement.
    std::vector<PauliObservable> measured_observables() const;
};

H2Hamiltonian h2_hamiltonian(const BondTable &table, double bond_length);

/// Smallest eigenvalue of the 4x4 Hamiltonian matrix (exact diagonalization).
double h2_ground_energy(const H2Hamiltonian &hamiltonian);

}  // namespace qemlab

#endif
