// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#include "bpdesim/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "bpdesim/errors.hpp"

namespace bpdesim {

std::string PauliString::to_string() const {
    if (is_identity()) return "I";
    std::string out;
    for (int q = 0; q <= max_qubit(); ++q) {
        if (!has(q)) continue;
        if (!out.empty()) out += ' ';
        switch (at(q)) {
            case PauliOp::X: out += 'X'; break;
            case PauliOp::Y: out += 'Y'; break;
            case PauliOp::Z: out += 'Z'; break;
        }
        out += std::to_string(q);
    }
    return out;
}

bool operator<(const PauliString& a, const PauliString& b) {
    const int sa = a.support_size(), sb = b.support_size();
    if (sa != sb) return sa < sb;
    std::uint64_t ma = a.support_mask(), mb = b.support_mask();
    while (ma != 0 && mb != 0) {
        const int qa = std::countr_zero(ma), qb = std::countr_zero(mb);
        if (qa != qb) return qa < qb;
        const auto oa = a.at(qa), ob = b.at(qb);
        if (oa != ob) return oa < ob;  // X < Y < Z
        ma &= ma - 1;
        mb &= mb - 1;
    }
    return false;
}

Determinant Determinant::from_string(const std::string& s) {
    if (s.size() > 64) throw LengthMismatchError("occupation string longer than 64");
    Determinant d;
    d.n = static_cast<int>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1')
            d.bits |= 1ULL << i;
        else if (s[i] != '0')
            throw LengthMismatchError("occupation string must contain only '0'/'1'");
    }
    return d;
}

std::string Determinant::to_string() const {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int q = 0; q < n; ++q)
        if (occupied(q)) s[q] = '1';
    return s;
}

namespace {

// Term in the X^x Z^z product representation (Y = i * X * Z folded in at
// the very end). Products of such strings need only a +/- sign:
// (X^a Z^b)(X^c Z^d) = (-1)^{|b & c|} X^(a^c) Z^(b^d).
struct XZTerm {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    cplx coeff{0.0, 0.0};
};

void multiply_into(std::vector<XZTerm>& acc, const XZTerm* rhs, int rhs_count) {
    std::vector<XZTerm> out;
    out.reserve(acc.size() * static_cast<std::size_t>(rhs_count));
    for (const XZTerm& a : acc) {
        for (int k = 0; k < rhs_count; ++k) {
            const XZTerm& b = rhs[k];
            XZTerm r;
            r.x = a.x ^ b.x;
            r.z = a.z ^ b.z;
            const bool flip = std::popcount(a.z & b.x) & 1;
            r.coeff = a.coeff * b.coeff * (flip ? -1.0 : 1.0);
            out.push_back(r);
        }
    }
    acc = std::move(out);
}

// a+_p = 1/2 (X_p - iY_p) Z_{<p} and a_p = 1/2 (X_p + iY_p) Z_{<p},
// expressed with -iY = XZ and +iY = -XZ.
void ladder(XZTerm out[2], int p, bool creation) {
    const std::uint64_t below = (1ULL << p) - 1;
    out[0] = {1ULL << p, below, cplx(0.5, 0.0)};
    out[1] = {1ULL << p, below | (1ULL << p), cplx(creation ? 0.5 : -0.5, 0.0)};
}

}  // namespace

QubitHamiltonian jordan_wigner(const SpinOrbitalIntegrals& ints, double prune_cutoff) {
    if (prune_cutoff < 0.0) throw Error("prune_cutoff must be >= 0");
    const int n = ints.n_orb;
    if (n < 1) throw IndexOutOfRangeError("n_orb must be >= 1");
    if (n > 60) throw TooLargeError("more than 60 spin orbitals unsupported");
    if (ints.h1.size() != static_cast<std::size_t>(n) * n ||
        ints.h2.size() != static_cast<std::size_t>(n) * n * n * n)
        throw DimensionMismatchError("tensor sizes inconsistent with n_orb");
    // Hermiticity is not re-checked here: a corrupted tensor surfaces as an
    // imaginary Pauli weight below.

    struct MaskKey {
        std::uint64_t x, z;
        bool operator==(const MaskKey& o) const { return x == o.x && z == o.z; }
    };
    struct MaskKeyHash {
        std::size_t operator()(const MaskKey& k) const {
            std::uint64_t h = k.x * 0x9e3779b97f4a7c15ULL;
            h ^= k.z + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return static_cast<std::size_t>(h);
        }
    };
    std::unordered_map<MaskKey, cplx, MaskKeyHash> accum;
    auto add = [&](const XZTerm& t) { accum[{t.x, t.z}] += t.coeff; };

    accum[{0, 0}] = cplx(ints.core_energy, 0.0);

    XZTerm f0[2], f1[2], f2[2], f3[2];
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            const cplx w = ints.one_body(p, q);
            if (w == cplx(0.0, 0.0)) continue;
            ladder(f0, p, true);
            ladder(f1, q, false);
            std::vector<XZTerm> prod(f0, f0 + 2);
            multiply_into(prod, f1, 2);
            for (XZTerm& t : prod) {
                t.coeff *= w;
                add(t);
            }
        }
    }
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            if (q == p) continue;  // a+_p a+_p = 0
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) {
                    if (s == r) continue;
                    const cplx w = 0.5 * ints.two_body(p, q, r, s);
                    if (w == cplx(0.0, 0.0)) continue;
                    ladder(f0, p, true);
                    ladder(f1, q, true);
                    ladder(f2, s, false);
                    ladder(f3, r, false);
                    std::vector<XZTerm> prod(f0, f0 + 2);
                    multiply_into(prod, f1, 2);
                    multiply_into(prod, f2, 2);
                    multiply_into(prod, f3, 2);
                    for (XZTerm& t : prod) {
                        t.coeff *= w;
                        add(t);
                    }
                }
        }

    QubitHamiltonian h;
    h.n_qubits = n;
    h.terms.reserve(accum.size());
    for (const auto& [key, raw] : accum) {
        // Fold Y = i X Z back in: the literal-Pauli coefficient picks up
        // (-i)^(#Y).
        const int ny = std::popcount(key.x & key.z);
        cplx coeff = raw;
        switch (ny & 3) {
            case 0: break;
            case 1: coeff *= cplx(0.0, -1.0); break;
            case 2: coeff *= -1.0; break;
            case 3: coeff *= cplx(0.0, 1.0); break;
        }
        if (std::abs(coeff.imag()) > 1e-10) {
            throw NonHermitianResultError("imaginary Pauli weight " +
                                          std::to_string(coeff.imag()) +
                                          " (integrals violate Hermiticity or index order)");
        }
        if (std::abs(coeff.real()) < prune_cutoff) continue;
        QubitHamiltonian::Term t;
        t.weight = coeff.real();
        t.string = PauliString::from_masks(key.x, key.z);
        h.terms.push_back(t);
    }
    std::sort(h.terms.begin(), h.terms.end(),
              [](const QubitHamiltonian::Term& a, const QubitHamiltonian::Term& b) {
                  return a.string < b.string;
              });
    return h;
}

double determinant_expectation(const QubitHamiltonian& h, const Determinant& d) {
    if (d.n != h.n_qubits)
        throw LengthMismatchError("determinant length " + std::to_string(d.n) +
                                  " != n_qubits " + std::to_string(h.n_qubits));
    double e = 0.0;
    for (const auto& t : h.terms) {
        if (!t.string.is_diagonal()) continue;
        const int par = std::popcount(d.bits & t.string.z_mask()) & 1;
        e += par ? -t.weight : t.weight;
    }
    return e;
}

}  // namespace bpdesim
