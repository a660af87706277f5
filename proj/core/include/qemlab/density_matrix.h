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

#ifndef QEMLAB_DENSITY_MATRIX_H
#define QEMLAB_DENSITY_MATRIX_H

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qemlab {

using cplx = std::complex<double>;
/// Row-major 2x2 matrix.
using Mat2 = std::array<cplx, 4>;
/// Row-major 4x4 matrix on (q0, q1) with q0 as the low bit of the local index.
using Mat4 = std::array<cplx, 16>;

/// Dense 2^n x 2^n density matrix stored row-major. Qubit q is bit q of a basis index.
///
/// All channel methods act in place on the indices of the qubits involved and never build
/// full-size operators.
class DensityMatrix {
   public:
    /// |0...0><0...0| on n qubits.
    explicit DensityMatrix(int num_qubits);

    static DensityMatrix maximally_mixed(int num_qubits);
    /// |psi><psi| for a normalized statevector of length 2^n.
    static DensityMatrix from_statevector(std::span<const cplx> psi);

    int num_qubits() const {
        return num_qubits_;
    }
    std::size_t dim() const {
        return dim_;
    }
    cplx operator()(std::size_t row, std::size_t col) const {
        return data_[row * dim_ + col];
    }
    std::span<const cplx> data() const {
        return data_;
    }

    void apply_1q(const Mat2 &u, int q);
    void apply_2q(const Mat4 &u, int q0, int q1);
    void apply_cx(int control, int target);
    void apply_rz(int q, double angle);

    /// rho -> (1 - p) rho + p (I/2 (x) Tr_q rho).
    void depolarize_1q(int q, double p);
    /// rho -> (1 - p) rho + p (I/4 (x) Tr_{a,b} rho).
    void depolarize_2q(int a, int b, double p);
    /// rho -> (1 - p) rho + p I / 2^n.
    void depolarize_all(double p);
    /// Amplitude damping with probability `gamma` followed by extra dephasing; the off-diagonal
    /// elements of qubit q end up scaled by `coherence`. Requires coherence <= sqrt(1 - gamma).
    void relax(int q, double gamma, double coherence);

    double trace() const;
    /// Real parts of the diagonal (computational-basis probabilities).
    std::vector<double> diagonal() const;

    /// Hermitian and unit trace within `tol`, and smallest eigenvalue >= -psd_tol.
    bool is_physical(double tol = 1e-10, double psd_tol = 1e-8) const;

   private:
    int num_qubits_;
    std::size_t dim_;
    std::vector<cplx> data_;
};

}  // namespace qemlab

#endif
