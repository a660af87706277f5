#!/usr/bin/env python3
# Copyright 2026 The qemlab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Generates data/h2_bond_table.csv: the 2-qubit H2 Hamiltonian per bond length.

STO-3G restricted Hartree-Fock orbitals from pyscf, parity mapping with the two-qubit
reduction (one alpha and one beta electron). The offset column holds the identity
coefficient plus nuclear repulsion, so <H> is a total energy in Hartree.

Qubit 0 is n(0, alpha); qubit 1 is 1 - n(0, beta).
"""

import argparse
import itertools

import numpy as np
from pyscf import ao2mo, gto, scf

PAULI = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1.0, -1.0]).astype(complex),
}


def spin_orbital_integrals(bond):
    mol = gto.M(atom=f"H 0 0 0; H 0 0 {bond}", basis="sto-3g", unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    c = mf.mo_coeff
    h1 = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), 2)  # chemist notation (pq|rs)
    # Spin orbitals ordered (0a, 1a, 0b, 1b).
    n = 4
    spatial = [0, 1, 0, 1]
    spin = [0, 0, 1, 1]
    h = np.zeros((n, n))
    g = np.zeros((n, n, n, n))
    for p, q in itertools.product(range(n), repeat=2):
        if spin[p] == spin[q]:
            h[p, q] = h1[spatial[p], spatial[q]]
    for p, q, r, s in itertools.product(range(n), repeat=4):
        if spin[p] == spin[q] and spin[r] == spin[s]:
            g[p, q, r, s] = eri[spatial[p], spatial[q], spatial[r], spatial[s]]
    return h, g, mol.energy_nuc()


def fock_matrix(h, g):
    """Full second-quantized Hamiltonian on 2^4 occupation states (bit k = orbital k)."""
    n = h.shape[0]
    dim = 1 << n

    def annihilate(k, state):
        if not (state >> k) & 1:
            return None, 0
        sign = (-1) ** bin(state & ((1 << k) - 1)).count("1")
        return state ^ (1 << k), sign

    def create(k, state):
        if (state >> k) & 1:
            return None, 0
        sign = (-1) ** bin(state & ((1 << k) - 1)).count("1")
        return state | (1 << k), sign

    def apply(ops, state):
        sign = 1
        for kind, k in reversed(ops):
            state, s = (create if kind == "c" else annihilate)(k, state)
            if state is None:
                return None, 0
            sign *= s
        return state, sign

    H = np.zeros((dim, dim))
    for ket in range(dim):
        for p, q in itertools.product(range(n), repeat=2):
            if h[p, q] != 0:
                bra, s = apply([("c", p), ("a", q)], ket)
                if bra is not None:
                    H[bra, ket] += h[p, q] * s
        for p, q, r, s_ in itertools.product(range(n), repeat=4):
            if g[p, q, r, s_] != 0:
                # 1/2 sum (pq|rs) a+_p a+_r a_s a_q
                bra, s = apply([("c", p), ("c", r), ("a", s_), ("a", q)], ket)
                if bra is not None:
                    H[bra, ket] += 0.5 * g[p, q, r, s_] * s
    return H


def reduced_coefficients(bond):
    h, g, e_nuc = spin_orbital_integrals(bond)
    H = fock_matrix(h, g)
    # Sector with one alpha (bits 0,1) and one beta (bits 2,3) electron.
    states = []
    for a in (0, 1):
        for b in (0, 1):
            states.append((1 << a) | (1 << (2 + b)))
    Hq = np.zeros((4, 4))
    index = {}
    for st in states:
        q0 = st & 1
        q1 = 1 - ((st >> 2) & 1)
        index[st] = q0 + 2 * q1
    for si in states:
        for sj in states:
            Hq[index[si], index[sj]] = H[si, sj]
    coeffs = {}
    for p0, p1 in itertools.product("IXYZ", repeat=2):
        # Pauli string character q acts on qubit q; basis index = bit0 + 2 * bit1.
        P = np.kron(PAULI[p1], PAULI[p0])
        coeffs[p0 + p1] = np.trace(P @ Hq).real / 4.0
    ground = np.linalg.eigvalsh(Hq)[0] + e_nuc
    return coeffs, e_nuc, ground


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/h2_bond_table.csv")
    parser.add_argument("--start", type=float, default=0.25)
    parser.add_argument("--stop", type=float, default=2.5)
    parser.add_argument("--step", type=float, default=0.05)
    args = parser.parse_args()
    bonds = np.round(np.arange(args.start, args.stop + 1e-9, args.step), 4).tolist()
    if 0.735 not in bonds:
        bonds.append(0.735)
    bonds.sort()
    with open(args.out, "w") as f:
        f.write("bond_length,c_xx,c_zz,c_iz,c_zi,offset\n")
        for bond in bonds:
            c, e_nuc, ground = reduced_coefficients(bond)
            leftover = {k: v for k, v in c.items() if k not in ("II", "XX", "ZZ", "IZ", "ZI") and abs(v) > 1e-10}
            if leftover:
                raise SystemExit(f"unexpected Pauli terms at {bond}: {leftover}")
            f.write(
                f"{bond:.4f},{c['XX']:.12f},{c['ZZ']:.12f},{c['IZ']:.12f},{c['ZI']:.12f},"
                f"{c['II'] + e_nuc:.12f}\n"
            )
            print(f"{bond:.4f} E0={ground:.8f} {c}")


if __name__ == "__main__":
    main()
