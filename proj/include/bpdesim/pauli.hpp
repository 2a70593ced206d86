// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "bpdesim/integrals.hpp"

namespace bpdesim {

enum class PauliOp : std::uint8_t { X, Y, Z };

/// Tensor product of single-qubit Pauli operators, identity elsewhere.
/// Stored as X/Z bit masks: qubit q carries X iff x bit set, Z iff z bit
/// set, Y iff both. Limited to 64 qubits.
class PauliString {
  public:
    PauliString() = default;

    static PauliString single(int qubit, PauliOp op) {
        PauliString p;
        p.set(qubit, op);
        return p;
    }

    static PauliString from_masks(std::uint64_t x, std::uint64_t z) {
        PauliString p;
        p.x_ = x;
        p.z_ = z;
        return p;
    }

    void set(int qubit, PauliOp op) {
        const std::uint64_t bit = 1ULL << qubit;
        x_ &= ~bit;
        z_ &= ~bit;
        if (op == PauliOp::X || op == PauliOp::Y) x_ |= bit;
        if (op == PauliOp::Z || op == PauliOp::Y) z_ |= bit;
    }

    bool has(int qubit) const { return ((x_ | z_) >> qubit) & 1ULL; }
    PauliOp at(int qubit) const {
        const bool x = (x_ >> qubit) & 1ULL;
        const bool z = (z_ >> qubit) & 1ULL;
        return x ? (z ? PauliOp::Y : PauliOp::X) : PauliOp::Z;
    }

    std::uint64_t x_mask() const { return x_; }
    std::uint64_t z_mask() const { return z_; }
    std::uint64_t y_mask() const { return x_ & z_; }
    std::uint64_t support_mask() const { return x_ | z_; }
    int support_size() const { return std::popcount(support_mask()); }
    bool is_identity() const { return support_mask() == 0; }
    /// True when the string is diagonal in the computational basis (Z/I only).
    bool is_diagonal() const { return x_ == 0; }
    int max_qubit() const {
        return support_mask() == 0 ? -1 : 63 - std::countl_zero(support_mask());
    }

    /// "I" for the identity, otherwise e.g. "X0 Z2 Y5".
    std::string to_string() const;

    friend bool operator==(const PauliString& a, const PauliString& b) {
        return a.x_ == b.x_ && a.z_ == b.z_;
    }
    /// Canonical order: support size, then (qubit, op) lexicographically.
    friend bool operator<(const PauliString& a, const PauliString& b);

  private:
    friend struct PauliStringHash;

    std::uint64_t x_ = 0;
    std::uint64_t z_ = 0;
};

struct PauliStringHash {
    std::size_t operator()(const PauliString& p) const {
        std::uint64_t h = p.x_ * 0x9e3779b97f4a7c15ULL;
        h ^= p.z_ + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

/// Real-weighted sum of Pauli strings on a fixed qubit count, terms stored
/// in canonical order with duplicates merged.
struct QubitHamiltonian {
    struct Term {
        double weight = 0.0;
        PauliString string;
    };

    int n_qubits = 0;
    std::vector<Term> terms;
};

/// Occupation-number basis state: bit q set means spin orbital q occupied.
struct Determinant {
    std::uint64_t bits = 0;
    int n = 0;

    Determinant() = default;
    Determinant(std::uint64_t mask, int length) : bits(mask), n(length) {}

    /// Character i of `s` is the occupation of orbital i ("10" = orbital 0
    /// occupied only, basis index 1).
    static Determinant from_string(const std::string& s);
    std::string to_string() const;

    bool occupied(int q) const { return (bits >> q) & 1ULL; }
    int particle_count() const { return std::popcount(bits); }
    /// Basis index in a state vector over n qubits.
    std::uint64_t index() const { return bits; }

    friend bool operator==(const Determinant& a, const Determinant& b) {
        return a.bits == b.bits && a.n == b.n;
    }
};

/// Map second-quantized integrals to a Pauli-string Hamiltonian, one qubit
/// per spin orbital (occupied = |1>, parity string on lower qubit indices).
/// Raw imaginary residues above 1e-10 abort (corrupted or transposed
/// input); terms with |weight| < prune_cutoff are dropped.
QubitHamiltonian jordan_wigner(const SpinOrbitalIntegrals& ints, double prune_cutoff = 1e-12);

/// <d|H|d>: diagonal strings contribute weight * (-1)^(occupied Z count),
/// strings with any X/Y contribute nothing.
double determinant_expectation(const QubitHamiltonian& h, const Determinant& d);

}  // namespace bpdesim
