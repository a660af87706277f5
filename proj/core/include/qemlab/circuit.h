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

#ifndef QEMLAB_CIRCUIT_H
#define QEMLAB_CIRCUIT_H

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qemlab {

/// Native gate set of the simulated device. RZ is virtual (noise free); X, SX and CX carry noise.
enum class GateKind : std::uint8_t { X, SX, RZ, CX };

std::string_view gate_name(GateKind kind);
GateKind parse_gate_name(std::string_view name);

struct GateOp {
    GateKind kind;
    std::vector<int> qubits;
    std::vector<double> params;

    bool operator==(const GateOp &other) const = default;
};

/// Ordered list of native gate operations on `num_qubits` qubits, all starting in |0>.
///
/// Every op appended through the public interface is validated: qubit indices must be distinct
/// and in range, CX takes exactly two qubits, single-qubit gates one, and only RZ takes an angle.
class Circuit {
   public:
    explicit Circuit(int num_qubits);

    int num_qubits() const {
        return num_qubits_;
    }
    const std::vector<GateOp> &ops() const {
        return ops_;
    }
    std::map<std::string, std::string> &metadata() {
        return metadata_;
    }
    const std::map<std::string, std::string> &metadata() const {
        return metadata_;
    }

    Circuit &append(GateOp op);
    Circuit &x(int q);
    Circuit &sx(int q);
    Circuit &rz(int q, double angle);
    Circuit &cx(int control, int target);

    /// Appends every op of `other` (which must have the same qubit count). Metadata is untouched.
    Circuit &extend(const Circuit &other);

    std::size_t count(GateKind kind) const;

    bool operator==(const Circuit &other) const = default;

   private:
    int num_qubits_;
    std::vector<GateOp> ops_;
    std::map<std::string, std::string> metadata_;
};

void validate_op(const GateOp &op, int num_qubits);

/// Number of layers of non-overlapping CX gates, assigned greedily left to right.
/// Single-qubit gates do not contribute.
int two_qubit_depth(const Circuit &circuit);

/// Replaces every CX by `factor` consecutive copies on the same pair. `factor` must be odd and positive.
Circuit fold_two_qubit_gates(const Circuit &circuit, int factor);

/// Dresses every CX with a uniformly random two-qubit Pauli before it and the Pauli that undoes it
/// after it, so the dressed gate equals CX up to global phase. Adjacent twirl Paulis on a qubit are
/// merged before being emitted as native gates (X -> x, Z -> rz(pi), Y -> rz(pi) x).
Circuit pauli_twirl(const Circuit &circuit, std::uint64_t seed);

/// Two-qubit Pauli on (control, target) as symplectic bits. Bit layout: xc, zc, xt, zt.
struct TwoQubitPauli {
    bool xc = false;
    bool zc = false;
    bool xt = false;
    bool zt = false;

    bool operator==(const TwoQubitPauli &) const = default;
};

/// The Pauli Q with Q * CX * P = CX (up to phase), i.e. P conjugated through CX.
TwoQubitPauli twirl_correction(TwoQubitPauli pre);

enum class Basis : std::uint8_t { X, Y, Z };

Basis parse_basis(char letter);
char basis_letter(Basis basis);

/// Appends basis-change gates so that a computational-basis measurement of qubit q realizes a
/// measurement of `basis` on every qubit. X: rz(pi/2) sx. Y: sx. Z: nothing.
Circuit append_measurement_basis(const Circuit &circuit, Basis basis);

/// Per-qubit version. `bases[q]` is one of 'X', 'Y', 'Z' or 'I' (treated as Z).
Circuit append_measurement_basis(const Circuit &circuit, std::string_view bases);

/// True iff every RZ angle is an integer multiple of pi/2 within `tol`.
bool is_clifford(const Circuit &circuit, double tol = 1e-9);

std::string circuit_to_json(const Circuit &circuit);
Circuit circuit_from_json(std::string_view text);

}  // namespace qemlab

#endif
