// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "bpdesim/integrals.hpp"
#include "bpdesim/pauli.hpp"
#include "bpdesim/rng.hpp"
#include "bpdesim/state.hpp"
#include "bpdesim/trotter.hpp"

namespace bpdesim {

struct Gaussian {
    double mean = 0.0;
    double std = 1.0;
};

/// One likelihood sample: interference probability at a gap hypothesis.
struct ScanPoint {
    double delta_eps = 0.0;
    double prob0 = 0.0;
    int shots = 0;  // 0 in exact-probability mode
};

/// Least-squares Gaussian over the fixed 0.5 baseline:
/// f(x) = 0.5 + A exp(-(x - mean)^2 / (2 std^2)).
struct LikelihoodFit {
    double amplitude = 0.0;
    double mean = 0.0;
    double std = 0.0;
    double baseline = 0.5;
    double rms_residual = 0.0;
    bool converged = false;
};

enum class ProbMode { SAMPLED, EXACT_PROB };

struct BpdeConfig {
    int n_scan = 21;
    int shots = 5000;
    double time_coeff = 1.8;    // t = time_coeff / sigma
    double sigma_floor = 0.1;   // Hartree
    double sigma_mult = 10.0;   // sigma_ini = max(floor, mult * |mu_ini|)
    double thresh_coeff = 1e-3; // E_thre = thresh_coeff * M / t
    ScheduleRule trotter_rule = ScheduleRule::INVERTED;
    double h00 = 0.0;           // slice-rule energy scale; run_bpde sets it
                                // from the deepest one-body diagonal h1[0][0]
    int max_iterations = 100;
    ProbMode mode = ProbMode::SAMPLED;
    std::uint64_t seed = 0;
    Backend backend = Backend::FUSED;
    double prune_cutoff = 1e-12;
    int workers = 1;

    void validate() const;
};

struct IterationRecord {
    Gaussian prior;
    double t = 0.0;
    int m_slices = 0;
    double e_thre = 0.0;
    std::vector<ScanPoint> scan;
    LikelihoodFit fit;
    Gaussian posterior;
};

struct BpdeResult {
    double gap = 0.0;          // final posterior mean
    double sigma_final = 0.0;  // final posterior std
    double e_thre = 0.0;       // threshold of the final iteration
    double mu_ini = 0.0;       // reference expectation difference
    bool converged = false;
    long long total_shots = 0;
    std::vector<IterationRecord> iterations;
    BpdeConfig config;
};

/// Interference circuit: Hadamard on the ancilla, ancilla-controlled
/// bit flips turning d0 into d1, product-formula evolution of the system
/// register, the inverse controlled flips, the gap-hypothesis phase on the
/// ancilla, and a closing Hadamard. Ancilla is qubit h.n_qubits; the caller
/// prepares the system register in basis_state(d0).
Circuit build_bpde_circuit(const QubitHamiltonian& h, const Determinant& d0,
                           const Determinant& d1, double delta_eps, const TrotterPlan& plan,
                           Backend backend = Backend::FUSED);

/// Likelihood scan of cfg.n_scan evenly spaced gap hypotheses over
/// [mean - std, mean + std] at t = time_coeff/std. Shot streams are keyed
/// by (cfg.seed, iteration, point index) so results do not depend on
/// evaluation order.
std::vector<ScanPoint> scan_likelihood(const QubitHamiltonian& h, const Determinant& d0,
                                       const Determinant& d1, const Gaussian& prior,
                                       const BpdeConfig& cfg, std::uint64_t iteration = 0,
                                       const Engine& eng = Engine::serial());

/// Damped least-squares fit of the scan; on breakdown (flat scan, peak
/// outside the window, divergence) returns converged=false with the
/// probability-weighted centroid as mean and the grid half-width as std.
LikelihoodFit fit_gaussian(const std::vector<ScanPoint>& points);

/// Gaussian-product posterior:
/// mean = (mu_p s_L^2 + m_L s_p^2) / (s_p^2 + s_L^2),
/// std = s_p s_L / sqrt(s_p^2 + s_L^2).
Gaussian bayes_update(const Gaussian& prior, const LikelihoodFit& fit);

/// Full estimation loop from integrals and two reference determinants.
BpdeResult run_bpde(const SpinOrbitalIntegrals& ints, const Determinant& d0,
                    const Determinant& d1, const BpdeConfig& cfg);

}  // namespace bpdesim
