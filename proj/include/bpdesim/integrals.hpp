// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace bpdesim {

using cplx = std::complex<double>;

/// Second-quantized Hamiltonian data over spin orbitals:
///
///   H = E_core + sum_pq h1[p][q] a+_p a_q
///            + 1/2 sum_pqrs h2[p][q][r][s] a+_p a+_q a_s a_r
///
/// Note the two-electron index convention: h2[p][q][r][s] multiplies
/// a+_p a+_q a_s a_r, i.e. r pairs with p and s pairs with q. Hermiticity
/// of the operator requires h1[p][q] = conj(h1[q][p]) and
/// h2[p][q][r][s] = conj(h2[r][s][p][q]).
struct SpinOrbitalIntegrals {
    int n_orb = 0;
    double core_energy = 0.0;
    std::vector<cplx> h1;  // n_orb^2, row-major [p*n+q]
    std::vector<cplx> h2;  // n_orb^4, [((p*n+q)*n+r)*n+s]
    std::string label;

    SpinOrbitalIntegrals() = default;
    explicit SpinOrbitalIntegrals(int n);

    cplx& one_body(int p, int q) { return h1[static_cast<std::size_t>(p) * n_orb + q]; }
    cplx one_body(int p, int q) const { return h1[static_cast<std::size_t>(p) * n_orb + q]; }
    cplx& two_body(int p, int q, int r, int s) {
        return h2[((static_cast<std::size_t>(p) * n_orb + q) * n_orb + r) * n_orb + s];
    }
    cplx two_body(int p, int q, int r, int s) const {
        return h2[((static_cast<std::size_t>(p) * n_orb + q) * n_orb + r) * n_orb + s];
    }

    /// Throws if any invariant fails: n_orb >= 1, finite entries,
    /// Hermitian h1 and h2 (1e-10 tolerance).
    void validate() const;
};

/// Parse the BPDE-INTS text format.
///
/// Lines: `norb <int>`, `ecore <float>`, `h1 p q re im`,
/// `h2 p q r s re im`; '#' starts a comment; indices 0-based. Unlisted
/// entries are zero; a listed entry also fills its Hermitian partner, and
/// listing both partners with inconsistent values is an error.
SpinOrbitalIntegrals parse_integral_file(std::istream& in);
SpinOrbitalIntegrals parse_integral_text(const std::string& text);
SpinOrbitalIntegrals load_integral_file(const std::string& path);

/// Write BPDE-INTS with 17 significant digits so that parse(write(x)) == x
/// bit-exactly. Zero entries are omitted; of each Hermitian pair only the
/// lexicographically first member is written.
void write_integral_file(std::ostream& out, const SpinOrbitalIntegrals& ints);
std::string write_integral_text(const SpinOrbitalIntegrals& ints);
void save_integral_file(const std::string& path, const SpinOrbitalIntegrals& ints);

/// Fold a set of permanently occupied orbitals into the core energy and the
/// one-body tensor, returning integrals over the remaining orbitals
/// (indices compacted in ascending order). On the subspace of determinants
/// with every frozen orbital occupied, the reduced operator has the same
/// spectrum as the restriction of the full operator.
SpinOrbitalIntegrals freeze_orbitals(const SpinOrbitalIntegrals& ints,
                                     const std::set<int>& frozen);

/// Deterministic random Hermitian test instance.
///
/// Diagonal one-body entries are well separated (distinct determinant
/// energies); off-diagonal h1 and all h2 magnitudes are scaled by
/// 1/diag_dominance, so large values give instances whose eigenstates are
/// dominated by single determinants. diag_dominance == 0 is the diagonal
/// limit: off-diagonal h1 and all h2 exactly zero.
SpinOrbitalIntegrals synth_random_hamiltonian(int n_orb, std::uint64_t seed,
                                              double diag_dominance);

}  // namespace bpdesim
