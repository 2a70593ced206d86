// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include "bpdesim/integrals.hpp"
#include "bpdesim/pauli.hpp"
#include "bpdesim/state.hpp"

namespace bpdesim::oracle {

/// Dense matrix of the second-quantized operator in the occupation basis,
/// built directly from ladder-operator action on bitstrings with fermionic
/// parity signs. Independent of the Pauli-string mapping path; the two must
/// agree elementwise, which is the central cross-check of this library.
Eigen::MatrixXcd fermionic_dense(const SpinOrbitalIntegrals& ints);

/// Dense matrix of a Pauli-string Hamiltonian.
Eigen::MatrixXcd qubit_dense(const QubitHamiltonian& h);

/// Full eigendecomposition plus the overlaps of two reference determinants
/// with every eigenvector.
struct EigenSystem {
    Eigen::VectorXd energies;       // ascending
    Eigen::MatrixXcd states;        // orthonormal eigenvectors, one per column
    Eigen::VectorXcd overlaps0;     // <psi_j | d0>
    Eigen::VectorXcd overlaps1;     // <psi_k | d1>
};

EigenSystem diagonalize(const Eigen::MatrixXcd& H, const Determinant& d0,
                        const Determinant& d1);

struct ExactGap {
    double value = 0.0;   // E_{k*} - E_{j*}
    int j_star = -1;      // eigenstate dominating d0
    int k_star = -1;      // eigenstate dominating d1
    bool degenerate = false;  // j_star == k_star
};

/// Energy difference between the eigenstates with maximum overlap against
/// each reference. Requires a dominant overlap (|c|^2 > 0.5) on both sides.
ExactGap exact_gap(const EigenSystem& sys);

/// 1/2 [1 + sum_jk |c_j|^2 |d_k|^2 cos((dE_jk - delta_eps) t)] with
/// dE_jk = E_k - E_j; the interference probability predicted for ideal
/// (un-Trotterized) evolution.
double eq4_prob0(const EigenSystem& sys, double delta_eps, double t);

/// exp(-iHt) |s> through the eigendecomposition (no product-formula error).
StateVector exact_evolve(const StateVector& s, const Eigen::MatrixXcd& H, double t);

}  // namespace bpdesim::oracle
