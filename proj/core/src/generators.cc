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

#include "qemlab/generators.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qemlab/errors.h"
#include "qemlab/rng.h"

namespace qemlab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

Circuit random_circuit(int n_qubits, int depth_2q, std::uint64_t seed) {
    if (n_qubits < 2) {
        throw std::invalid_argument("random circuits need at least 2 qubits");
    }
    if (depth_2q < 1) {
        throw std::invalid_argument("two-qubit depth must be positive");
    }
    Rng rng(seed);
    Circuit c(n_qubits);
    std::vector<int> level(n_qubits, 0);
    int depth = 0;
    while (depth < depth_2q) {
        int q = static_cast<int>(rng.below(n_qubits));
        switch (rng.below(4)) {
            case 0:
                c.x(q);
                break;
            case 1:
                c.sx(q);
                break;
            case 2:
                c.rz(q, rng.uniform(0.0, 2 * kPi));
                break;
            default: {
                int t = static_cast<int>(rng.below(n_qubits - 1));
                if (t >= q) {
                    t++;
                }
                c.cx(q, t);
                int l = std::max(level[q], level[t]) + 1;
                level[q] = level[t] = l;
                depth = std::max(depth, l);
                break;
            }
        }
    }
    c.metadata()["generator"] = "random";
    c.metadata()["depth_2q"] = std::to_string(depth_2q);
    c.metadata()["seed"] = std::to_string(seed);
    return c;
}

void append_rx(Circuit &circuit, int qubit, double theta) {
    // H RZ(theta) H with H = RZ(pi/2) SX RZ(pi/2).
    circuit.rz(qubit, kPi / 2).sx(qubit).rz(qubit, theta + kPi).sx(qubit).rz(qubit, kPi / 2);
}

void append_ry(Circuit &circuit, int qubit, double theta) {
    circuit.sx(qubit).rz(qubit, theta + kPi).sx(qubit).rz(qubit, kPi);
}

Circuit trotter_tfim(const TfimParams &p) {
    if (p.n_sites < 2) {
        throw std::invalid_argument("the Ising chain needs at least 2 sites");
    }
    if (p.steps < 0) {
        throw std::invalid_argument("Trotter step count must be non-negative");
    }
    Circuit c(p.n_sites);
    for (int q : p.initial_excitations) {
        c.x(q);
    }
    const double theta_j = 2 * p.J;
    const double theta_h = 2 * p.h;
    for (int s = 0; s < p.steps; s++) {
        for (int parity : {0, 1}) {
            for (int j = parity; j + 1 < p.n_sites; j += 2) {
                c.cx(j, j + 1).rz(j + 1, theta_j).cx(j, j + 1);
            }
        }
        for (int q = 0; q < p.n_sites; q++) {
            append_rx(c, q, theta_h);
        }
    }
    c.metadata()["generator"] = "trotter_tfim";
    c.metadata()["steps"] = std::to_string(p.steps);
    c.metadata()["J"] = format_double(p.J);
    c.metadata()["h"] = format_double(p.h);
    return c;
}

Circuit two_local_ansatz(std::span<const double> t) {
    if (t.size() != kAnsatzParams) {
        throw std::invalid_argument("the two-local ansatz takes exactly 8 angles");
    }
    Circuit c(2);
    append_ry(c, 0, t[0]);
    append_ry(c, 1, t[1]);
    c.rz(0, t[2]).rz(1, t[3]);
    c.cx(0, 1);
    append_ry(c, 0, t[4]);
    append_ry(c, 1, t[5]);
    c.rz(0, t[6]).rz(1, t[7]);
    c.metadata()["generator"] = "two_local";
    return c;
}

BondTable BondTable::from_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError("bond table is empty");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "bond_length,c_xx,c_zz,c_iz,c_zi,offset") {
        throw FormatError("bond table line 1: unexpected header '" + line + "'");
    }
    BondTable table;
    int line_no = 1;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<double> v;
        std::istringstream fields(line);
        std::string cell;
        try {
            while (std::getline(fields, cell, ',')) {
                std::size_t used = 0;
                v.push_back(std::stod(cell, &used));
                if (used != cell.size()) {
                    throw std::invalid_argument(cell);
                }
            }
        } catch (const std::exception &) {
            throw FormatError("bond table line " + std::to_string(line_no) + ": bad number '" + cell + "'");
        }
        if (v.size() != 6) {
            throw FormatError("bond table line " + std::to_string(line_no) + ": expected 6 columns");
        }
        table.rows_.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
    }
    return table;
}

BondTable BondTable::load(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("cannot open bond table '" + path + "'");
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return from_csv(ss.str());
}

const H2Coefficients &BondTable::at(double bond_length) const {
    for (const auto &r : rows_) {
        if (std::abs(r.bond_length - bond_length) <= 1e-9) {
            return r;
        }
    }
    std::ostringstream msg;
    msg << "bond length " << bond_length << " not in table; available:";
    for (const auto &r : rows_) {
        msg << ' ' << r.bond_length;
    }
    throw ConfigError(msg.str());
}

std::vector<double> BondTable::bond_lengths() const {
    std::vector<double> out;
    for (const auto &r : rows_) {
        out.push_back(r.bond_length);
    }
    return out;
}

double H2Hamiltonian::energy(const std::map<std::string, double> &unit_expectations) const {
    double e = offset;
    for (const auto &t : terms) {
        auto it = unit_expectations.find(t.paulis);
        if (it == unit_expectations.end()) {
            throw std::invalid_argument("missing expectation for Hamiltonian term " + t.paulis);
        }
        e += t.coeff * it->second;
    }
    return e;
}

std::vector<PauliObservable> H2Hamiltonian::measured_observables() const {
    std::vector<PauliObservable> out;
    for (const auto &t : terms) {
        out.emplace_back(t.paulis);
    }
    return out;
}

H2Hamiltonian h2_hamiltonian(const BondTable &table, double bond_length) {
    const auto &c = table.at(bond_length);
    H2Hamiltonian h;
    h.terms = {PauliObservable("XX", c.c_xx), PauliObservable("ZZ", c.c_zz), PauliObservable("IZ", c.c_iz),
               PauliObservable("ZI", c.c_zi)};
    h.offset = c.offset;
    return h;
}

double h2_ground_energy(const H2Hamiltonian &hamiltonian) {
    using M2 = Eigen::Matrix2cd;
    auto pauli = [](char p) {
        M2 m;
        switch (p) {
            case 'X':
                m << 0, 1, 1, 0;
                break;
            case 'Y':
                m << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
                break;
            case 'Z':
                m << 1, 0, 0, -1;
                break;
            default:
                m = M2::Identity();
        }
        return m;
    };
    Eigen::Matrix4cd h = hamiltonian.offset * Eigen::Matrix4cd::Identity();
    for (const auto &t : hamiltonian.terms) {
        if (t.num_qubits() != 2) {
            throw std::invalid_argument("H2 terms act on two qubits");
        }
        // Basis index = bit(q0) + 2 bit(q1), so q1 is the left Kronecker factor.
        M2 a = pauli(t.paulis[1]);
        M2 b = pauli(t.paulis[0]);
        Eigen::Matrix4cd k;
        for (int r = 0; r < 4; r++) {
            for (int col = 0; col < 4; col++) {
                k(r, col) = a(r >> 1, col >> 1) * b(r & 1, col & 1);
            }
        }
        h += t.coeff * k;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

}  // namespace qemlab
