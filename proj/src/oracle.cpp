// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#include "bpdesim/oracle.hpp"

#include <bit>
#include <cmath>
#include <optional>

#include "bpdesim/errors.hpp"

namespace bpdesim::oracle {

namespace {

// a_q / a+_q on an occupation bitstring; sign is the parity of occupied
// orbitals below q. Returns nothing when the operator annihilates the state.
std::optional<std::uint64_t> ladder_apply(std::uint64_t bits, int q, bool creation,
                                          double& sign) {
    const std::uint64_t bit = 1ULL << q;
    if (creation == static_cast<bool>(bits & bit)) return std::nullopt;
    if (std::popcount(bits & (bit - 1)) & 1) sign = -sign;
    return bits ^ bit;
}

}  // namespace

Eigen::MatrixXcd fermionic_dense(const SpinOrbitalIntegrals& ints) {
    ints.validate();
    const int n = ints.n_orb;
    if (n > 14) throw TooLargeError("dense construction capped at 14 orbitals");
    const std::uint64_t dim = 1ULL << n;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);

    for (std::uint64_t col = 0; col < dim; ++col) {
        H(col, col) += ints.core_energy;
        for (int p = 0; p < n; ++p) {
            for (int q = 0; q < n; ++q) {
                const cplx w = ints.one_body(p, q);
                if (w == cplx(0.0, 0.0)) continue;
                double sign = 1.0;
                auto s1 = ladder_apply(col, q, false, sign);
                if (!s1) continue;
                auto s2 = ladder_apply(*s1, p, true, sign);
                if (!s2) continue;
                H(*s2, col) += sign * w;
            }
        }
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                if (q == p) continue;
                for (int r = 0; r < n; ++r)
                    for (int s = 0; s < n; ++s) {
                        if (s == r) continue;
                        const cplx w = 0.5 * ints.two_body(p, q, r, s);
                        if (w == cplx(0.0, 0.0)) continue;
                        // a+_p a+_q a_s a_r: rightmost acts first.
                        double sign = 1.0;
                        auto s1 = ladder_apply(col, r, false, sign);
                        if (!s1) continue;
                        auto s2 = ladder_apply(*s1, s, false, sign);
                        if (!s2) continue;
                        auto s3 = ladder_apply(*s2, q, true, sign);
                        if (!s3) continue;
                        auto s4 = ladder_apply(*s3, p, true, sign);
                        if (!s4) continue;
                        H(*s4, col) += sign * w;
                    }
            }
    }

    const double herm = (H - H.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10) throw HermiticityViolationError("dense operator not Hermitian");
    return H;
}

Eigen::MatrixXcd qubit_dense(const QubitHamiltonian& h) {
    if (h.n_qubits > 14) throw TooLargeError("dense construction capped at 14 qubits");
    const std::uint64_t dim = 1ULL << h.n_qubits;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
    static const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (const auto& term : h.terms) {
        const std::uint64_t xm = term.string.x_mask();
        const std::uint64_t zm = term.string.z_mask();
        const cplx ipow = kIPow[std::popcount(term.string.y_mask()) & 3];
        for (std::uint64_t col = 0; col < dim; ++col) {
            const double sz = (std::popcount(col & zm) & 1) ? -1.0 : 1.0;
            H(col ^ xm, col) += term.weight * ipow * sz;
        }
    }
    return H;
}

EigenSystem diagonalize(const Eigen::MatrixXcd& H, const Determinant& d0,
                        const Determinant& d1) {
    const Eigen::Index dim = H.rows();
    if (H.cols() != dim) throw DimensionMismatchError("matrix not square");
    if (dim > (1 << 14)) throw TooLargeError("dense diagonalization capped at 2^14");
    if (d0.index() >= static_cast<std::uint64_t>(dim) ||
        d1.index() >= static_cast<std::uint64_t>(dim))
        throw DimensionMismatchError("reference determinant outside matrix dimension");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H);
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailureError("eigendecomposition failed");

    EigenSystem sys;
    sys.energies = solver.eigenvalues();
    sys.states = solver.eigenvectors();

    const double residual =
        (H * sys.states - sys.states * sys.energies.asDiagonal()).cwiseAbs().maxCoeff();
    if (residual > 1e-9) throw ConvergenceFailureError("eigenpair residual above 1e-9");

    sys.overlaps0 = sys.states.row(static_cast<Eigen::Index>(d0.index())).adjoint();
    sys.overlaps1 = sys.states.row(static_cast<Eigen::Index>(d1.index())).adjoint();
    if (std::abs(sys.overlaps0.squaredNorm() - 1.0) > 1e-10 ||
        std::abs(sys.overlaps1.squaredNorm() - 1.0) > 1e-10)
        throw ConvergenceFailureError("overlap vectors not normalized");
    return sys;
}

ExactGap exact_gap(const EigenSystem& sys) {
    ExactGap g;
    double best0 = -1.0, best1 = -1.0;
    for (Eigen::Index j = 0; j < sys.energies.size(); ++j) {
        const double w0 = std::norm(sys.overlaps0(j));
        const double w1 = std::norm(sys.overlaps1(j));
        if (w0 > best0) {
            best0 = w0;
            g.j_star = static_cast<int>(j);
        }
        if (w1 > best1) {
            best1 = w1;
            g.k_star = static_cast<int>(j);
        }
    }
    if (best0 <= 0.5 || best1 <= 0.5)
        throw AmbiguousAssignmentError(
            "no eigenstate carries majority overlap with a reference determinant (" +
            std::to_string(best0) + ", " + std::to_string(best1) + ")");
    g.degenerate = (g.j_star == g.k_star);
    g.value = sys.energies(g.k_star) - sys.energies(g.j_star);
    return g;
}

double eq4_prob0(const EigenSystem& sys, double delta_eps, double t) {
    const Eigen::Index m = sys.energies.size();
    double acc = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        const double wj = std::norm(sys.overlaps0(j));
        if (wj == 0.0) continue;
        for (Eigen::Index k = 0; k < m; ++k) {
            const double wk = std::norm(sys.overlaps1(k));
            if (wk == 0.0) continue;
            acc += wj * wk * std::cos((sys.energies(k) - sys.energies(j) - delta_eps) * t);
        }
    }
    double p = 0.5 * (1.0 + acc);
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    return p;
}

StateVector exact_evolve(const StateVector& s, const Eigen::MatrixXcd& H, double t) {
    if (H.rows() != static_cast<Eigen::Index>(s.dim()))
        throw DimensionMismatchError("state dimension does not match matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H);
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailureError("eigendecomposition failed");
    Eigen::Map<const Eigen::VectorXcd> psi(s.amps.data(), static_cast<Eigen::Index>(s.dim()));
    Eigen::VectorXcd coeffs = solver.eigenvectors().adjoint() * psi;
    for (Eigen::Index j = 0; j < coeffs.size(); ++j)
        coeffs(j) *= std::polar(1.0, -solver.eigenvalues()(j) * t);
    Eigen::VectorXcd out = solver.eigenvectors() * coeffs;
    StateVector r;
    r.n_qubits = s.n_qubits;
    r.amps.assign(out.data(), out.data() + out.size());
    return r;
}

}  // namespace bpdesim::oracle
