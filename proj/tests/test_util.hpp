// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "bpdesim/bpde.hpp"
#include "bpdesim/oracle.hpp"
#include "bpdesim/pauli.hpp"
#include "bpdesim/rng.hpp"
#include "bpdesim/state.hpp"

// Absolute-tolerance comparison (doctest's Approx is relative-only).
#define CHECK_NEAR(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))
#define REQUIRE_NEAR(a, b, tol) REQUIRE(std::abs((a) - (b)) <= (tol))

namespace bpdesim::testutil {

inline Eigen::VectorXd eigvals(const Eigen::MatrixXcd& H) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

inline double max_amp_diff(const StateVector& a, const StateVector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.amps.size(); ++i)
        m = std::max(m, std::abs(a.amps[i] - b.amps[i]));
    return m;
}

/// Random Hamiltonian over explicit Pauli strings (not necessarily from a
/// fermionic source); weights in [-w_max, w_max].
inline QubitHamiltonian random_qubit_hamiltonian(int n_qubits, int n_terms, std::uint64_t seed,
                                                 double w_max = 0.5) {
    RngStream rng = RngStream::child(seed, {0xabcdULL});
    QubitHamiltonian h;
    h.n_qubits = n_qubits;
    for (int t = 0; t < n_terms; ++t) {
        PauliString p;
        for (int q = 0; q < n_qubits; ++q) {
            switch (rng.next_u64() & 3) {
                case 0: p.set(q, PauliOp::X); break;
                case 1: p.set(q, PauliOp::Y); break;
                case 2: p.set(q, PauliOp::Z); break;
                default: break;  // identity on this qubit
            }
        }
        h.terms.push_back({rng.uniform(-w_max, w_max), p});
    }
    return h;
}

/// Random normalized state with seeded amplitudes.
inline StateVector random_state(int n_qubits, std::uint64_t seed) {
    RngStream rng = RngStream::child(seed, {0x57a7eULL});
    StateVector s;
    s.n_qubits = n_qubits;
    s.amps.resize(1ULL << n_qubits);
    double norm = 0.0;
    for (auto& a : s.amps) {
        a = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto& a : s.amps) a /= norm;
    return s;
}

}  // namespace bpdesim::testutil
