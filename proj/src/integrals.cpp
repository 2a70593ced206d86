// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#include "bpdesim/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "bpdesim/errors.hpp"
#include "bpdesim/rng.hpp"

namespace bpdesim {

namespace {

constexpr double kHermTol = 1e-10;

[[noreturn]] void bad_line(int lineno, const std::string& what) {
    throw MalformedLineError("line " + std::to_string(lineno) + ": " + what);
}

void check_index(int idx, int n_orb, int lineno) {
    if (idx < 0 || idx >= n_orb) {
        throw IndexOutOfRangeError("line " + std::to_string(lineno) + ": orbital index " +
                                   std::to_string(idx) + " outside [0, " + std::to_string(n_orb) +
                                   ")");
    }
}

std::string fmt_cplx(cplx v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.16e %.16e", v.real(), v.imag());
    return buf;
}

}  // namespace

SpinOrbitalIntegrals::SpinOrbitalIntegrals(int n)
    : n_orb(n),
      h1(static_cast<std::size_t>(n) * n, cplx(0.0, 0.0)),
      h2(static_cast<std::size_t>(n) * n * n * n, cplx(0.0, 0.0)) {}

void SpinOrbitalIntegrals::validate() const {
    if (n_orb < 1) throw IndexOutOfRangeError("n_orb must be >= 1");
    if (h1.size() != static_cast<std::size_t>(n_orb) * n_orb ||
        h2.size() != static_cast<std::size_t>(n_orb) * n_orb * n_orb * n_orb) {
        throw DimensionMismatchError("tensor sizes inconsistent with n_orb");
    }
    if (!std::isfinite(core_energy)) throw HermiticityViolationError("core energy not finite");
    for (const cplx& v : h1) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw HermiticityViolationError("non-finite h1 entry");
    }
    for (const cplx& v : h2) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw HermiticityViolationError("non-finite h2 entry");
    }
    for (int p = 0; p < n_orb; ++p) {
        for (int q = 0; q < n_orb; ++q) {
            if (std::abs(one_body(p, q) - std::conj(one_body(q, p))) > kHermTol) {
                throw HermiticityViolationError("h1[" + std::to_string(p) + "][" +
                                                std::to_string(q) + "] breaks h1 = h1^dagger");
            }
        }
    }
    for (int p = 0; p < n_orb; ++p)
        for (int q = 0; q < n_orb; ++q)
            for (int r = 0; r < n_orb; ++r)
                for (int s = 0; s < n_orb; ++s) {
                    if (std::abs(two_body(p, q, r, s) - std::conj(two_body(r, s, p, q))) >
                        kHermTol) {
                        throw HermiticityViolationError(
                            "h2[" + std::to_string(p) + "][" + std::to_string(q) + "][" +
                            std::to_string(r) + "][" + std::to_string(s) +
                            "] breaks h2[pqrs] = conj(h2[rspq])");
                    }
                }
}

SpinOrbitalIntegrals parse_integral_file(std::istream& in) {
    int n_orb = -1;
    bool have_ecore = false;
    double ecore = 0.0;
    std::string label;

    // Deferred body entries: conjugate filling and conflict detection need
    // the complete list, and body lines may legally precede nothing (header
    // must come first so indices can be checked).
    SpinOrbitalIntegrals ints;
    std::vector<bool> set1, set2;

    auto ensure_header = [&](int lineno) {
        if (n_orb < 0) {
            throw MissingHeaderError("line " + std::to_string(lineno) +
                                     ": body entry before norb header");
        }
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;  // blank or comment-only line

        auto want_end = [&]() {
            std::string extra;
            if (ls >> extra) bad_line(lineno, "trailing token '" + extra + "'");
        };

        if (tag == "norb") {
            if (n_orb >= 0) bad_line(lineno, "duplicate norb header");
            int n;
            if (!(ls >> n)) bad_line(lineno, "norb needs an integer");
            want_end();
            if (n < 1) throw IndexOutOfRangeError("line " + std::to_string(lineno) +
                                                  ": norb must be >= 1");
            n_orb = n;
            ints = SpinOrbitalIntegrals(n_orb);
            set1.assign(ints.h1.size(), false);
            set2.assign(ints.h2.size(), false);
        } else if (tag == "ecore") {
            double e;
            if (!(ls >> e)) bad_line(lineno, "ecore needs a float");
            want_end();
            ecore = e;
            have_ecore = true;
        } else if (tag == "label") {
            std::string rest;
            std::getline(ls, rest);
            if (auto pos = rest.find_first_not_of(" \t"); pos != std::string::npos)
                label = rest.substr(pos);
        } else if (tag == "h1") {
            ensure_header(lineno);
            int p, q;
            double re, im;
            if (!(ls >> p >> q >> re >> im)) bad_line(lineno, "h1 needs 'p q re im'");
            want_end();
            check_index(p, n_orb, lineno);
            check_index(q, n_orb, lineno);
            if (!std::isfinite(re) || !std::isfinite(im)) bad_line(lineno, "non-finite h1 value");
            std::size_t idx = static_cast<std::size_t>(p) * n_orb + q;
            cplx v(re, im);
            if (set1[idx] && std::abs(ints.h1[idx] - v) > kHermTol) {
                throw HermiticityViolationError("line " + std::to_string(lineno) +
                                                ": conflicting value for h1[" + std::to_string(p) +
                                                "][" + std::to_string(q) + "]");
            }
            ints.h1[idx] = v;
            set1[idx] = true;
        } else if (tag == "h2") {
            ensure_header(lineno);
            int p, q, r, s;
            double re, im;
            if (!(ls >> p >> q >> r >> s >> re >> im)) bad_line(lineno, "h2 needs 'p q r s re im'");
            want_end();
            check_index(p, n_orb, lineno);
            check_index(q, n_orb, lineno);
            check_index(r, n_orb, lineno);
            check_index(s, n_orb, lineno);
            if (!std::isfinite(re) || !std::isfinite(im)) bad_line(lineno, "non-finite h2 value");
            std::size_t idx = ((static_cast<std::size_t>(p) * n_orb + q) * n_orb + r) * n_orb + s;
            cplx v(re, im);
            if (set2[idx] && std::abs(ints.h2[idx] - v) > kHermTol) {
                throw HermiticityViolationError("line " + std::to_string(lineno) +
                                                ": conflicting value for h2 entry");
            }
            ints.h2[idx] = v;
            set2[idx] = true;
        } else {
            bad_line(lineno, "unknown tag '" + tag + "'");
        }
    }

    if (n_orb < 0) throw MissingHeaderError("missing norb header");
    (void)have_ecore;  // ecore defaults to zero when absent
    ints.core_energy = ecore;
    ints.label = label;

    // Fill Hermitian partners of explicitly listed entries; an explicit
    // conflicting partner is an authorship error, not a fixable typo.
    const int n = n_orb;
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            std::size_t a = static_cast<std::size_t>(p) * n + q;
            std::size_t b = static_cast<std::size_t>(q) * n + p;
            if (set1[a] && set1[b]) {
                if (std::abs(ints.h1[a] - std::conj(ints.h1[b])) > kHermTol) {
                    throw HermiticityViolationError("h1[" + std::to_string(p) + "][" +
                                                    std::to_string(q) +
                                                    "] conflicts with its conjugate partner");
                }
            } else if (set1[a]) {
                ints.h1[b] = std::conj(ints.h1[a]);
            }
        }
    }
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) {
                    std::size_t a = ((static_cast<std::size_t>(p) * n + q) * n + r) * n + s;
                    std::size_t b = ((static_cast<std::size_t>(r) * n + s) * n + p) * n + q;
                    if (set2[a] && set2[b]) {
                        if (std::abs(ints.h2[a] - std::conj(ints.h2[b])) > kHermTol) {
                            throw HermiticityViolationError(
                                "h2[" + std::to_string(p) + "][" + std::to_string(q) + "][" +
                                std::to_string(r) + "][" + std::to_string(s) +
                                "] conflicts with its conjugate partner");
                        }
                    } else if (set2[a]) {
                        ints.h2[b] = std::conj(ints.h2[a]);
                    }
                }

    ints.validate();
    return ints;
}

SpinOrbitalIntegrals parse_integral_text(const std::string& text) {
    std::istringstream in(text);
    return parse_integral_file(in);
}

SpinOrbitalIntegrals load_integral_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open integral file: " + path);
    return parse_integral_file(in);
}

void write_integral_file(std::ostream& out, const SpinOrbitalIntegrals& ints) {
    const int n = ints.n_orb;
    out << "# BPDE-INTS v1\n";
    out << "# h2[p][q][r][s] multiplies a+_p a+_q a_s a_r (1/2 prefactor implied)\n";
    out << "norb " << n << "\n";
    {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.16e", ints.core_energy);
        out << "ecore " << buf << "\n";
    }
    if (!ints.label.empty()) out << "label " << ints.label << "\n";
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            // Emit only the first member of each conjugate pair.
            if (p > q) continue;
            cplx v = ints.one_body(p, q);
            if (v == cplx(0.0, 0.0)) continue;
            out << "h1 " << p << " " << q << " " << fmt_cplx(v) << "\n";
        }
    }
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) {
                    std::size_t a = ((static_cast<std::size_t>(p) * n + q) * n + r) * n + s;
                    std::size_t b = ((static_cast<std::size_t>(r) * n + s) * n + p) * n + q;
                    if (a > b) continue;
                    cplx v = ints.h2[a];
                    if (v == cplx(0.0, 0.0)) continue;
                    out << "h2 " << p << " " << q << " " << r << " " << s << " " << fmt_cplx(v)
                        << "\n";
                }
}

std::string write_integral_text(const SpinOrbitalIntegrals& ints) {
    std::ostringstream out;
    write_integral_file(out, ints);
    return out.str();
}

void save_integral_file(const std::string& path, const SpinOrbitalIntegrals& ints) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write integral file: " + path);
    write_integral_file(out, ints);
}

SpinOrbitalIntegrals freeze_orbitals(const SpinOrbitalIntegrals& ints,
                                     const std::set<int>& frozen) {
    const int n = ints.n_orb;
    for (int f : frozen) {
        if (f < 0 || f >= n)
            throw IndexOutOfRangeError("frozen orbital " + std::to_string(f) + " outside [0, " +
                                       std::to_string(n) + ")");
    }
    if (frozen.empty()) return ints;
    const int n_act = n - static_cast<int>(frozen.size());
    if (n_act == 0) throw EmptyActiveSpaceError("all orbitals frozen");

    std::vector<int> active;
    active.reserve(n_act);
    for (int p = 0; p < n; ++p)
        if (!frozen.count(p)) active.push_back(p);

    // Frozen-parity count below each orbital. Compacting active indices
    // drops the constant occupied-orbital parity that each ladder operator
    // picks up from the frozen set, so every compacted one-body (two-body)
    // coefficient carries the corresponding sign correction.
    std::vector<int> frozen_below(n, 0);
    {
        int c = 0;
        for (int p = 0; p < n; ++p) {
            frozen_below[p] = c;
            if (frozen.count(p)) ++c;
        }
    }
    auto sign1 = [&](int a, int b) {
        return ((frozen_below[a] + frozen_below[b]) % 2 == 0) ? 1.0 : -1.0;
    };
    auto sign2 = [&](int p, int q, int r, int s) {
        return ((frozen_below[p] + frozen_below[q] + frozen_below[r] + frozen_below[s]) % 2 == 0)
                   ? 1.0
                   : -1.0;
    };

    SpinOrbitalIntegrals out(n_act);

    // Core shift: one-body occupation of the frozen set plus the frozen-
    // frozen two-body contraction (direct minus exchange; i == j cancels).
    cplx core_shift(0.0, 0.0);
    for (int i : frozen) core_shift += ints.one_body(i, i);
    for (int i : frozen)
        for (int j : frozen)
            core_shift += 0.5 * (ints.two_body(i, j, i, j) - ints.two_body(i, j, j, i));
    out.core_energy = ints.core_energy + core_shift.real();

    // Effective one-body term: active h1 plus the mean field of the frozen
    // orbitals contracted out of h2 in all four index positions.
    for (int a = 0; a < n_act; ++a) {
        for (int b = 0; b < n_act; ++b) {
            const int pa = active[a], pb = active[b];
            cplx v = ints.one_body(pa, pb);
            for (int i : frozen) {
                v += 0.5 * (ints.two_body(i, pa, i, pb) + ints.two_body(pa, i, pb, i) -
                            ints.two_body(pa, i, i, pb) - ints.two_body(i, pa, pb, i));
            }
            out.one_body(a, b) = sign1(pa, pb) * v;
        }
    }

    for (int a = 0; a < n_act; ++a)
        for (int b = 0; b < n_act; ++b)
            for (int c = 0; c < n_act; ++c)
                for (int d = 0; d < n_act; ++d) {
                    const int pa = active[a], pb = active[b], pc = active[c], pd = active[d];
                    out.two_body(a, b, c, d) =
                        sign2(pa, pb, pc, pd) * ints.two_body(pa, pb, pc, pd);
                }

    std::string map = "frozen={";
    {
        bool first = true;
        for (int f : frozen) {
            if (!first) map += ",";
            map += std::to_string(f);
            first = false;
        }
        map += "}; map ";
        for (int a = 0; a < n_act; ++a) {
            if (a) map += ",";
            map += std::to_string(active[a]) + "->" + std::to_string(a);
        }
    }
    out.label = ints.label.empty() ? map : ints.label + "; " + map;
    out.validate();
    return out;
}

SpinOrbitalIntegrals synth_random_hamiltonian(int n_orb, std::uint64_t seed,
                                              double diag_dominance) {
    if (n_orb < 1) throw IndexOutOfRangeError("n_orb must be >= 1");
    SpinOrbitalIntegrals ints(n_orb);
    RngStream rng = RngStream::child(seed, {static_cast<std::uint64_t>(n_orb)});

    const double off_scale = diag_dominance == 0.0 ? 0.0 : 1.0 / diag_dominance;

    // Well-separated diagonal ladder, deepest first, so single-substitution
    // determinant gaps stay O(1) Hartree.
    for (int p = 0; p < n_orb; ++p) {
        double diag = -(1.0 + 1.0 * (n_orb - 1 - p)) + 0.25 * rng.uniform(-1.0, 1.0);
        ints.one_body(p, p) = cplx(diag, 0.0);
    }
    for (int p = 0; p < n_orb; ++p) {
        for (int q = p + 1; q < n_orb; ++q) {
            cplx v(off_scale * 0.5 * rng.uniform(-1.0, 1.0),
                   off_scale * 0.5 * rng.uniform(-1.0, 1.0));
            ints.one_body(p, q) = v;
            ints.one_body(q, p) = std::conj(v);
        }
    }

    if (off_scale != 0.0) {
        // Draw a raw tensor, then Hermitize: h2 <- (g + g^adj)/2 with
        // g^adj[pqrs] = conj(g[rspq]).
        const int n = n_orb;
        std::vector<cplx> g(ints.h2.size());
        for (cplx& v : g)
            v = cplx(off_scale * 0.25 * rng.uniform(-1.0, 1.0),
                     off_scale * 0.25 * rng.uniform(-1.0, 1.0));
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                for (int r = 0; r < n; ++r)
                    for (int s = 0; s < n; ++s) {
                        std::size_t a = ((static_cast<std::size_t>(p) * n + q) * n + r) * n + s;
                        std::size_t b = ((static_cast<std::size_t>(r) * n + s) * n + p) * n + q;
                        ints.h2[a] = 0.5 * (g[a] + std::conj(g[b]));
                    }
    }

    ints.core_energy = rng.uniform(-0.5, 0.5);
    ints.label = "synthetic n_orb=" + std::to_string(n_orb) + " seed=" + std::to_string(seed) +
                 " dominance=" + std::to_string(diag_dominance);
    ints.validate();
    return ints;
}

}  // namespace bpdesim
