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

#include "qemlab/density_matrix.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace qemlab {

namespace {

/// Spreads `k` around a zero bit at position `bit`.
inline std::size_t insert_zero(std::size_t k, int bit) {
    std::size_t low = k & ((std::size_t{1} << bit) - 1);
    return ((k >> bit) << (bit + 1)) | low;
}

/// Spreads `k` around zero bits at positions lo < hi.
inline std::size_t insert_zeros(std::size_t k, int lo, int hi) {
    return insert_zero(insert_zero(k, lo), hi);
}

void check_qubit(int q, int n) {
    if (q < 0 || q >= n) {
        throw std::invalid_argument("qubit index out of range");
    }
}

}  // namespace

DensityMatrix::DensityMatrix(int num_qubits)
    : num_qubits_(num_qubits), dim_(std::size_t{1} << num_qubits), data_(dim_ * dim_, cplx{0.0, 0.0}) {
    if (num_qubits <= 0 || num_qubits > 14) {
        throw std::invalid_argument("density matrix qubit count must be in [1, 14]");
    }
    data_[0] = 1.0;
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
    DensityMatrix rho(num_qubits);
    rho.data_[0] = 0.0;
    double v = 1.0 / static_cast<double>(rho.dim_);
    for (std::size_t i = 0; i < rho.dim_; i++) {
        rho.data_[i * rho.dim_ + i] = v;
    }
    return rho;
}

DensityMatrix DensityMatrix::from_statevector(std::span<const cplx> psi) {
    int n = 0;
    while ((std::size_t{1} << n) < psi.size()) {
        n++;
    }
    if ((std::size_t{1} << n) != psi.size() || n == 0) {
        throw std::invalid_argument("statevector length must be a power of two >= 2");
    }
    double norm = 0.0;
    for (const auto &a : psi) {
        norm += std::norm(a);
    }
    if (std::abs(norm - 1.0) > 1e-10) {
        throw std::invalid_argument("statevector is not normalized");
    }
    DensityMatrix rho(n);
    for (std::size_t r = 0; r < rho.dim_; r++) {
        for (std::size_t c = 0; c < rho.dim_; c++) {
            rho.data_[r * rho.dim_ + c] = psi[r] * std::conj(psi[c]);
        }
    }
    return rho;
}

void DensityMatrix::apply_1q(const Mat2 &u, int q) {
    check_qubit(q, num_qubits_);
    const std::size_t m = std::size_t{1} << q;
    const std::size_t half = dim_ / 2;
    for (std::size_t k = 0; k < half; k++) {
        std::size_t r0 = insert_zero(k, q);
        cplx *row0 = &data_[r0 * dim_];
        cplx *row1 = &data_[(r0 | m) * dim_];
        for (std::size_t c = 0; c < dim_; c++) {
            cplx a = row0[c];
            cplx b = row1[c];
            row0[c] = u[0] * a + u[1] * b;
            row1[c] = u[2] * a + u[3] * b;
        }
    }
    const cplx v0 = std::conj(u[0]);
    const cplx v1 = std::conj(u[1]);
    const cplx v2 = std::conj(u[2]);
    const cplx v3 = std::conj(u[3]);
    for (std::size_t r = 0; r < dim_; r++) {
        cplx *row = &data_[r * dim_];
        for (std::size_t k = 0; k < half; k++) {
            std::size_t c0 = insert_zero(k, q);
            cplx a = row[c0];
            cplx b = row[c0 | m];
            row[c0] = a * v0 + b * v1;
            row[c0 | m] = a * v2 + b * v3;
        }
    }
}

void DensityMatrix::apply_2q(const Mat4 &u, int q0, int q1) {
    check_qubit(q0, num_qubits_);
    check_qubit(q1, num_qubits_);
    if (q0 == q1) {
        throw std::invalid_argument("two-qubit gate needs distinct qubits");
    }
    const std::size_t m0 = std::size_t{1} << q0;
    const std::size_t m1 = std::size_t{1} << q1;
    const int lo = std::min(q0, q1);
    const int hi = std::max(q0, q1);
    const std::size_t quarter = dim_ / 4;
    std::array<std::size_t, 4> idx{};
    for (std::size_t k = 0; k < quarter; k++) {
        std::size_t base = insert_zeros(k, lo, hi);
        idx = {base, base | m0, base | m1, base | m0 | m1};
        for (std::size_t c = 0; c < dim_; c++) {
            cplx v[4];
            for (int i = 0; i < 4; i++) {
                v[i] = data_[idx[i] * dim_ + c];
            }
            for (int i = 0; i < 4; i++) {
                data_[idx[i] * dim_ + c] = u[i * 4] * v[0] + u[i * 4 + 1] * v[1] + u[i * 4 + 2] * v[2] + u[i * 4 + 3] * v[3];
            }
        }
    }
    Mat4 w;
    for (int i = 0; i < 16; i++) {
        w[i] = std::conj(u[i]);
    }
    for (std::size_t r = 0; r < dim_; r++) {
        cplx *row = &data_[r * dim_];
        for (std::size_t k = 0; k < quarter; k++) {
            std::size_t base = insert_zeros(k, lo, hi);
            idx = {base, base | m0, base | m1, base | m0 | m1};
            cplx v[4] = {row[idx[0]], row[idx[1]], row[idx[2]], row[idx[3]]};
            for (int i = 0; i < 4; i++) {
                row[idx[i]] = v[0] * w[i * 4] + v[1] * w[i * 4 + 1] + v[2] * w[i * 4 + 2] + v[3] * w[i * 4 + 3];
            }
        }
    }
}

void DensityMatrix::apply_cx(int control, int target) {
    check_qubit(control, num_qubits_);
    check_qubit(target, num_qubits_);
    if (control == target) {
        throw std::invalid_argument("cx needs distinct qubits");
    }
    const std::size_t cm = std::size_t{1} << control;
    const std::size_t tm = std::size_t{1} << target;
    const int lo = std::min(control, target);
    const int hi = std::max(control, target);
    const std::size_t quarter = dim_ / 4;
    for (std::size_t k = 0; k < quarter; k++) {
        std::size_t r = insert_zeros(k, lo, hi) | cm;
        std::swap_ranges(&data_[r * dim_], &data_[r * dim_] + dim_, &data_[(r | tm) * dim_]);
    }
    for (std::size_t r = 0; r < dim_; r++) {
        cplx *row = &data_[r * dim_];
        for (std::size_t k = 0; k < quarter; k++) {
            std::size_t c = insert_zeros(k, lo, hi) | cm;
            std::swap(row[c], row[c | tm]);
        }
    }
}

void DensityMatrix::apply_rz(int q, double angle) {
    check_qubit(q, num_qubits_);
    const std::size_t m = std::size_t{1} << q;
    // Only elements with differing bit q pick up a relative phase.
    const cplx down = std::polar(1.0, -angle);
    const cplx up = std::polar(1.0, angle);
    for (std::size_t r = 0; r < dim_; r++) {
        cplx *row = &data_[r * dim_];
        const cplx phase = (r & m) ? up : down;
        const std::size_t want = (r & m) ^ m;
        for (std::size_t c = 0; c < dim_; c++) {
            if ((c & m) == want) {
                row[c] *= phase;
            }
        }
    }
}

void DensityMatrix::depolarize_1q(int q, double p) {
    check_qubit(q, num_qubits_);
    if (p == 0.0) {
        return;
    }
    const std::size_t m = std::size_t{1} << q;
    const std::size_t half = dim_ / 2;
    const double keep = 1.0 - p;
    for (std::size_t i = 0; i < half; i++) {
        std::size_t r0 = insert_zero(i, q);
        cplx *row0 = &data_[r0 * dim_];
        cplx *row1 = &data_[(r0 | m) * dim_];
        for (std::size_t j = 0; j < half; j++) {
            std::size_t c0 = insert_zero(j, q);
            std::size_t c1 = c0 | m;
            cplx mix = 0.5 * p * (row0[c0] + row1[c1]);
            row0[c0] = keep * row0[c0] + mix;
            row1[c1] = keep * row1[c1] + mix;
            row0[c1] *= keep;
            row1[c0] *= keep;
        }
    }
}

void DensityMatrix::depolarize_2q(int a, int b, double p) {
    check_qubit(a, num_qubits_);
    check_qubit(b, num_qubits_);
    if (a == b) {
        throw std::invalid_argument("two-qubit channel needs distinct qubits");
    }
    if (p == 0.0) {
        return;
    }
    const std::size_t ma = std::size_t{1} << a;
    const std::size_t mb = std::size_t{1} << b;
    const int lo = std::min(a, b);
    const int hi = std::max(a, b);
    const std::size_t quarter = dim_ / 4;
    const double keep = 1.0 - p;
    const std::size_t local[4] = {0, ma, mb, ma | mb};
    for (std::size_t i = 0; i < quarter; i++) {
        std::size_t rb = insert_zeros(i, lo, hi);
        for (std::size_t j = 0; j < quarter; j++) {
            std::size_t cb = insert_zeros(j, lo, hi);
            cplx tr = 0.0;
            for (int k = 0; k < 4; k++) {
                tr += data_[(rb | local[k]) * dim_ + (cb | local[k])];
            }
            cplx mix = 0.25 * p * tr;
            for (int x = 0; x < 4; x++) {
                for (int y = 0; y < 4; y++) {
                    cplx &e = data_[(rb | local[x]) * dim_ + (cb | local[y])];
                    e = keep * e + (x == y ? mix : cplx{0.0, 0.0});
                }
            }
        }
    }
}

void DensityMatrix::depolarize_all(double p) {
    if (p == 0.0) {
        return;
    }
    const double keep = 1.0 - p;
    const cplx mix = p * trace() / static_cast<double>(dim_);
    for (std::size_t r = 0; r < dim_; r++) {
        for (std::size_t c = 0; c < dim_; c++) {
            cplx &e = data_[r * dim_ + c];
            e = keep * e + (r == c ? mix : cplx{0.0, 0.0});
        }
    }
}

void DensityMatrix::relax(int q, double gamma, double coherence) {
    check_qubit(q, num_qubits_);
    if (!(gamma >= 0.0 && gamma <= 1.0) || !(coherence >= 0.0) ||
        coherence > std::sqrt(1.0 - gamma) + 1e-12) {
        throw std::invalid_argument("relaxation needs gamma in [0, 1] and 0 <= coherence <= sqrt(1 - gamma)");
    }
    if (gamma == 0.0 && coherence == 1.0) {
        return;
    }
    const std::size_t m = std::size_t{1} << q;
    const std::size_t half = dim_ / 2;
    const double decay = 1.0 - gamma;
    for (std::size_t i = 0; i < half; i++) {
        std::size_t r0 = insert_zero(i, q);
        cplx *row0 = &data_[r0 * dim_];
        cplx *row1 = &data_[(r0 | m) * dim_];
        for (std::size_t j = 0; j < half; j++) {
            std::size_t c0 = insert_zero(j, q);
            std::size_t c1 = c0 | m;
            row0[c0] += gamma * row1[c1];
            row1[c1] *= decay;
            row0[c1] *= coherence;
            row1[c0] *= coherence;
        }
    }
}

double DensityMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; i++) {
        t += data_[i * dim_ + i].real();
    }
    return t;
}

std::vector<double> DensityMatrix::diagonal() const {
    std::vector<double> d(dim_);
    for (std::size_t i = 0; i < dim_; i++) {
        d[i] = data_[i * dim_ + i].real();
    }
    return d;
}

bool DensityMatrix::is_physical(double tol, double psd_tol) const {
    if (std::abs(trace() - 1.0) > tol) {
        return false;
    }
    for (std::size_t r = 0; r < dim_; r++) {
        for (std::size_t c = r; c < dim_; c++) {
            if (std::abs(data_[r * dim_ + c] - std::conj(data_[c * dim_ + r])) > tol) {
                return false;
            }
        }
    }
    Eigen::MatrixXcd m(dim_, dim_);
    for (std::size_t r = 0; r < dim_; r++) {
        for (std::size_t c = 0; c < dim_; c++) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data_[r * dim_ + c];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -psd_tol;
}

}  // namespace qemlab
