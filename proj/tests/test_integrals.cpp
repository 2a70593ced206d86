// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "bpdesim/errors.hpp"
#include "bpdesim/integrals.hpp"
#include "bpdesim/oracle.hpp"
#include "test_util.hpp"

using namespace bpdesim;
using testutil::eigvals;

TEST_CASE("minimal file parses with zero defaults and conjugate fill") {
    const auto ints = parse_integral_text("norb 2\necore 0.0\nh1 0 0 -1.25 0.0\n");
    CHECK(ints.n_orb == 2);
    CHECK(ints.core_energy == 0.0);
    CHECK(ints.one_body(0, 0) == cplx(-1.25, 0.0));
    CHECK(ints.one_body(0, 1) == cplx(0.0, 0.0));
    CHECK(ints.one_body(1, 1) == cplx(0.0, 0.0));
    for (const cplx& v : ints.h2) CHECK(v == cplx(0.0, 0.0));
}

TEST_CASE("conjugate partner listed through the parser") {
    const auto ints = parse_integral_text("norb 2\nh1 0 1 0.5 0.1\n");
    CHECK(ints.one_body(1, 0) == cplx(0.5, -0.1));
}

TEST_CASE("explicit conflicting conjugate pair is rejected") {
    CHECK_THROWS_AS(parse_integral_text("norb 2\nh1 0 1 0.5 0.1\nh1 1 0 0.5 0.1\n"),
                    HermiticityViolationError);
    CHECK_THROWS_AS(
        parse_integral_text("norb 2\nh2 0 1 0 1 0.5 0.2\nh2 0 1 0 1 0.5 -0.2\n"),
        HermiticityViolationError);
    // imaginary self-conjugate diagonal
    CHECK_THROWS_AS(parse_integral_text("norb 1\nh1 0 0 1.0 0.5\n"),
                    HermiticityViolationError);
}

TEST_CASE("header and format errors") {
    CHECK_THROWS_AS(parse_integral_text("h1 0 0 1 0\n"), MissingHeaderError);
    CHECK_THROWS_AS(parse_integral_text("ecore 1.0\n"), MissingHeaderError);
    CHECK_THROWS_AS(parse_integral_text("norb 2\nh1 0 0 abc 0\n"), MalformedLineError);
    CHECK_THROWS_AS(parse_integral_text("norb 2\nh1 0 0 1\n"), MalformedLineError);
    CHECK_THROWS_AS(parse_integral_text("norb 2\nh1 0 0 1 0 9\n"), MalformedLineError);
    CHECK_THROWS_AS(parse_integral_text("norb 2\nbogus 1\n"), MalformedLineError);
    CHECK_THROWS_AS(parse_integral_text("norb 2\nh1 0 5 1 0\n"), IndexOutOfRangeError);
    CHECK_THROWS_AS(parse_integral_text("norb 0\n"), IndexOutOfRangeError);
}

TEST_CASE("line numbers are reported") {
    try {
        parse_integral_text("norb 2\n# fine\nh1 0 0 oops 0\n");
        FAIL("expected MalformedLineError");
    } catch (const MalformedLineError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("write/parse round trip is bit exact for 1000 random instances") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const int n = 1 + static_cast<int>(seed % 4);
        const double dom = (seed % 3 == 0) ? 0.0 : 0.7 + double(seed % 5);
        const auto ints = synth_random_hamiltonian(n, seed, dom);
        const auto back = parse_integral_text(write_integral_text(ints));
        REQUIRE(back.n_orb == ints.n_orb);
        CHECK(back.core_energy == ints.core_energy);
        for (std::size_t i = 0; i < ints.h1.size(); ++i) CHECK(back.h1[i] == ints.h1[i]);
        for (std::size_t i = 0; i < ints.h2.size(); ++i) CHECK(back.h2[i] == ints.h2[i]);
    }
}

TEST_CASE("synthetic generator is deterministic and respects the diagonal limit") {
    const auto a = synth_random_hamiltonian(4, 7, 10.0);
    const auto b = synth_random_hamiltonian(4, 7, 10.0);
    CHECK(a.core_energy == b.core_energy);
    for (std::size_t i = 0; i < a.h1.size(); ++i) CHECK(a.h1[i] == b.h1[i]);
    for (std::size_t i = 0; i < a.h2.size(); ++i) CHECK(a.h2[i] == b.h2[i]);

    const auto diag = synth_random_hamiltonian(4, 7, 0.0);
    for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q)
            if (p != q) CHECK(diag.one_body(p, q) == cplx(0.0, 0.0));
    for (const cplx& v : diag.h2) CHECK(v == cplx(0.0, 0.0));
}

TEST_CASE("dominant instances have > 0.9 ground-state determinant weight") {
    const auto ints = synth_random_hamiltonian(3, 1, 10.0);
    const Eigen::MatrixXcd H = oracle::fermionic_dense(ints);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H);
    const Eigen::VectorXcd ground = solver.eigenvectors().col(0);
    double best = 0.0;
    for (Eigen::Index i = 0; i < ground.size(); ++i)
        best = std::max(best, std::norm(ground(i)));
    CHECK(best > 0.9);
}

TEST_CASE("freeze with empty set is the identity") {
    const auto ints = synth_random_hamiltonian(3, 5, 1.0);
    const auto out = freeze_orbitals(ints, {});
    CHECK(out.n_orb == ints.n_orb);
    CHECK(out.core_energy == ints.core_energy);
    for (std::size_t i = 0; i < ints.h1.size(); ++i) CHECK(out.h1[i] == ints.h1[i]);
    for (std::size_t i = 0; i < ints.h2.size(); ++i) CHECK(out.h2[i] == ints.h2[i]);
}

TEST_CASE("freeze folds only the diagonal one-body entry when h2 is zero") {
    SpinOrbitalIntegrals ints(3);
    ints.core_energy = 0.25;
    ints.one_body(0, 0) = cplx(-2.0, 0.0);
    ints.one_body(1, 1) = cplx(-1.0, 0.0);
    ints.one_body(2, 2) = cplx(-0.5, 0.0);
    const auto out = freeze_orbitals(ints, {1});
    CHECK(out.n_orb == 2);
    CHECK(out.core_energy == doctest::Approx(0.25 - 1.0).epsilon(1e-14));
    CHECK(out.one_body(0, 0) == cplx(-2.0, 0.0));
    CHECK(out.one_body(1, 1) == cplx(-0.5, 0.0));
}

TEST_CASE("freeze errors") {
    const auto ints = synth_random_hamiltonian(3, 5, 1.0);
    CHECK_THROWS_AS(freeze_orbitals(ints, {3}), IndexOutOfRangeError);
    CHECK_THROWS_AS(freeze_orbitals(ints, {0, 1, 2}), EmptyActiveSpaceError);
}

namespace {

// Restriction of the dense operator to determinants containing `frozen`.
Eigen::MatrixXcd restrict_dense(const Eigen::MatrixXcd& H, int n_orb,
                                const std::set<int>& frozen) {
    std::uint64_t fmask = 0;
    for (int f : frozen) fmask |= 1ULL << f;
    std::vector<std::uint64_t> keep;
    for (std::uint64_t d = 0; d < (1ULL << n_orb); ++d)
        if ((d & fmask) == fmask) keep.push_back(d);
    Eigen::MatrixXcd R(keep.size(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j) R(i, j) = H(keep[i], keep[j]);
    return R;
}

void check_freeze_spectrum(const SpinOrbitalIntegrals& ints, const std::set<int>& frozen,
                           double tol) {
    const auto reduced = freeze_orbitals(ints, frozen);
    const Eigen::VectorXd ev_reduced = eigvals(oracle::fermionic_dense(reduced));
    const Eigen::VectorXd ev_restricted =
        eigvals(restrict_dense(oracle::fermionic_dense(ints), ints.n_orb, frozen));
    REQUIRE(ev_reduced.size() == ev_restricted.size());
    for (Eigen::Index i = 0; i < ev_reduced.size(); ++i)
        CHECK_NEAR(ev_reduced(i), ev_restricted(i), tol);
}

}  // namespace

TEST_CASE("freezing the lowest orbital preserves the restricted spectrum (seed 7)") {
    check_freeze_spectrum(synth_random_hamiltonian(4, 7, 1.0), {0}, 1e-9);
}

TEST_CASE("freezing interleaved orbitals preserves the restricted spectrum") {
    check_freeze_spectrum(synth_random_hamiltonian(4, 7, 1.0), {1}, 1e-9);
    check_freeze_spectrum(synth_random_hamiltonian(4, 11, 0.8), {1, 3}, 1e-9);
    check_freeze_spectrum(synth_random_hamiltonian(5, 3, 1.5), {0, 2}, 1e-9);
    check_freeze_spectrum(synth_random_hamiltonian(5, 9, 1.0), {2, 4}, 1e-9);
}

TEST_CASE("freeze-vs-restriction property across random instances") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const int n = 2 + static_cast<int>(seed % 4);
        const auto ints = synth_random_hamiltonian(n, seed, 1.0 + double(seed % 3));
        std::set<int> frozen;
        RngStream rng = RngStream::child(seed, {42});
        for (int p = 0; p < n; ++p)
            if (rng.next_double() < 0.4 && static_cast<int>(frozen.size()) < n - 1)
                frozen.insert(p);
        if (frozen.empty()) frozen.insert(static_cast<int>(seed) % n);
        check_freeze_spectrum(ints, frozen, 1e-9);
    }
}

TEST_CASE("generated instances give Hermitian dense operators") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto ints = synth_random_hamiltonian(3, seed, 0.5 + double(seed));
        const Eigen::MatrixXcd H = oracle::fermionic_dense(ints);
        CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    }
}
