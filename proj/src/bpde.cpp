// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#include "bpdesim/bpde.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "bpdesim/errors.hpp"

namespace bpdesim {

namespace {

std::vector<int> excitation_qubits(const Determinant& d0, const Determinant& d1) {
    std::vector<int> qs;
    std::uint64_t diff = d0.bits ^ d1.bits;
    while (diff) {
        qs.push_back(std::countr_zero(diff));
        diff &= diff - 1;
    }
    return qs;
}

void check_references(const QubitHamiltonian& h, const Determinant& d0,
                      const Determinant& d1) {
    if (d0.n != h.n_qubits || d1.n != h.n_qubits)
        throw LengthMismatchError("reference determinant length != n_qubits");
    if (d0 == d1)
        throw IdenticalReferencesError("reference determinants are identical");
}

struct ScanSetup {
    double t = 0.0;
    TrotterPlan plan;
    int ancilla = 0;
};

ScanSetup make_scan_setup(const QubitHamiltonian& h, const Gaussian& prior,
                          const BpdeConfig& cfg) {
    ScanSetup su;
    su.t = cfg.time_coeff / prior.std;
    su.plan = make_trotter_plan(h, su.t, slice_count(su.t, cfg.h00, cfg.trotter_rule));
    su.ancilla = h.n_qubits;
    return su;
}

// State right before the gap-hypothesis phase: shared by every scan point
// of one iteration, so it is computed once and the per-point tail
// (ancilla phase + Hadamard) runs on copies. Gate-for-gate identical to
// executing build_bpde_circuit per point.
StateVector evolve_prefix(const QubitHamiltonian& h, const Determinant& d0,
                          const Determinant& d1, const ScanSetup& su, Backend backend,
                          const Engine& eng) {
    StateVector s = basis_state(h.n_qubits + 1, Determinant(d0.bits, h.n_qubits + 1));
    eng.apply(s, Gate::had(su.ancilla));
    const std::vector<int> excit = excitation_qubits(d0, d1);
    for (int q : excit) eng.apply(s, Gate::ctrl_x(su.ancilla, q));
    apply_evolution(s, h, su.plan, backend, eng);
    for (auto it = excit.rbegin(); it != excit.rend(); ++it)
        eng.apply(s, Gate::ctrl_x(su.ancilla, *it));
    return s;
}

double point_prob0(const StateVector& prefix, int ancilla, double delta_eps, double t,
                   const Engine& eng) {
    StateVector s = prefix;
    eng.apply(s, Gate::phase(ancilla, delta_eps * t));
    eng.apply(s, Gate::had(ancilla));
    return eng.ancilla_prob0(s, ancilla);
}

}  // namespace

void BpdeConfig::validate() const {
    if (n_scan < 5 || n_scan % 2 == 0) throw Error("n_scan must be odd and >= 5");
    if (shots < 1) throw Error("shots must be >= 1");
    if (!(time_coeff > 0.0) || !(sigma_floor > 0.0) || !(sigma_mult > 0.0) ||
        !(thresh_coeff > 0.0))
        throw Error("config coefficients must be > 0");
    if (max_iterations < 1) throw Error("max_iterations must be >= 1");
    if (prune_cutoff < 0.0) throw Error("prune_cutoff must be >= 0");
}

Circuit build_bpde_circuit(const QubitHamiltonian& h, const Determinant& d0,
                           const Determinant& d1, double delta_eps, const TrotterPlan& plan,
                           Backend backend) {
    check_references(h, d0, d1);
    const int ancilla = h.n_qubits;
    Circuit c;
    c.n_qubits = h.n_qubits + 1;
    c.append(Gate::had(ancilla));
    const std::vector<int> excit = excitation_qubits(d0, d1);
    for (int q : excit) c.append(Gate::ctrl_x(ancilla, q));
    const Circuit step = build_second_order_step(h, plan.tau, plan.term_order, backend);
    for (int m = 0; m < plan.m_slices; ++m) c.append(step);
    for (auto it = excit.rbegin(); it != excit.rend(); ++it)
        c.append(Gate::ctrl_x(ancilla, *it));
    c.append(Gate::phase(ancilla, delta_eps * plan.t));
    c.append(Gate::had(ancilla));
    return c;
}

std::vector<ScanPoint> scan_likelihood(const QubitHamiltonian& h, const Determinant& d0,
                                       const Determinant& d1, const Gaussian& prior,
                                       const BpdeConfig& cfg, std::uint64_t iteration,
                                       const Engine& eng) {
    cfg.validate();
    check_references(h, d0, d1);
    if (!(prior.std > 0.0) || !std::isfinite(prior.mean) || !std::isfinite(prior.std))
        throw InvalidFitError("prior must have finite mean and positive std");

    const ScanSetup su = make_scan_setup(h, prior, cfg);
    const StateVector prefix = evolve_prefix(h, d0, d1, su, cfg.backend, eng);

    std::vector<ScanPoint> points(cfg.n_scan);
    for (int i = 0; i < cfg.n_scan; ++i) {
        const double x =
            prior.mean - prior.std + 2.0 * prior.std * i / double(cfg.n_scan - 1);
        const double p = point_prob0(prefix, su.ancilla, x, su.t, eng);
        ScanPoint& pt = points[i];
        pt.delta_eps = x;
        if (cfg.mode == ProbMode::EXACT_PROB) {
            pt.prob0 = p;
            pt.shots = 0;
        } else {
            RngStream rng =
                RngStream::child(cfg.seed, {iteration, static_cast<std::uint64_t>(i)});
            pt.prob0 = double(sample_shots(p, cfg.shots, rng)) / double(cfg.shots);
            pt.shots = cfg.shots;
        }
    }
    return points;
}

LikelihoodFit fit_gaussian(const std::vector<ScanPoint>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 5) throw TooFewPointsError("need at least 5 scan points");

    const double x_min = points.front().delta_eps;
    const double x_max = points.back().delta_eps;
    const double spacing = (x_max - x_min) / double(n - 1);
    const double sigma_grid = 0.5 * (x_max - x_min);

    auto fallback = [&](double amplitude) {
        LikelihoodFit fb;
        fb.converged = false;
        fb.amplitude = amplitude;
        fb.std = sigma_grid;
        double wsum = 0.0, xsum = 0.0, rss = 0.0;
        for (const ScanPoint& p : points) {
            const double w = p.prob0 - 0.5;
            if (w > 0.0) {
                wsum += w;
                xsum += w * p.delta_eps;
            }
            rss += w * w;
        }
        fb.mean = wsum > 0.0 ? xsum / wsum : 0.5 * (x_min + x_max);
        fb.rms_residual = std::sqrt(rss / n);
        return fb;
    };

    // Start values: located at the best point, width from the count of
    // points in the upper half of the peak.
    int i_max = 0;
    for (int i = 1; i < n; ++i)
        if (points[i].prob0 > points[i_max].prob0) i_max = i;
    const double a0 = points[i_max].prob0 - 0.5;
    if (a0 <= 0.05) return fallback(a0);
    int above = 0;
    for (const ScanPoint& p : points)
        if (p.prob0 > 0.5 + 0.5 * a0) ++above;
    double A = a0;
    double m = points[i_max].delta_eps;
    double s = std::max(0.5 * spacing * above, 0.5 * spacing);

    auto residuals = [&](double A_, double m_, double s_, Eigen::VectorXd& r,
                         Eigen::MatrixXd* J) {
        r.resize(n);
        if (J) J->resize(n, 3);
        for (int i = 0; i < n; ++i) {
            const double dx = points[i].delta_eps - m_;
            const double e = std::exp(-dx * dx / (2.0 * s_ * s_));
            r(i) = 0.5 + A_ * e - points[i].prob0;
            if (J) {
                (*J)(i, 0) = e;
                (*J)(i, 1) = A_ * e * dx / (s_ * s_);
                (*J)(i, 2) = A_ * e * dx * dx / (s_ * s_ * s_);
            }
        }
    };

    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    residuals(A, m, s, r, &J);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    bool ok = false;
    for (int it = 0; it < 200; ++it) {
        Eigen::Matrix3d JtJ = (J.transpose() * J).eval();
        Eigen::Vector3d g = J.transpose() * r;
        Eigen::Matrix3d damped = JtJ;
        for (int k = 0; k < 3; ++k) damped(k, k) += lambda * std::max(JtJ(k, k), 1e-300);
        Eigen::Vector3d delta = damped.ldlt().solve(-g);
        if (!delta.allFinite()) return fallback(A);

        const double A_new = A + delta(0);
        const double m_new = m + delta(1);
        const double s_new = s + delta(2);
        if (!(s_new > 0.0) || !std::isfinite(A_new) || !std::isfinite(m_new)) {
            lambda *= 10.0;
            if (lambda > 1e12) return fallback(A);
            continue;
        }
        Eigen::VectorXd r_new;
        residuals(A_new, m_new, s_new, r_new, nullptr);
        const double cost_new = r_new.squaredNorm();
        if (cost_new <= cost) {
            const double step = std::abs(delta(0)) / std::max(1.0, std::abs(A_new)) +
                                std::abs(delta(1)) / std::max(1.0, std::abs(m_new)) +
                                std::abs(delta(2)) / std::max(1.0, std::abs(s_new));
            A = A_new;
            m = m_new;
            s = s_new;
            residuals(A, m, s, r, &J);
            cost = r.squaredNorm();
            lambda = std::max(lambda / 3.0, 1e-12);
            if (step < 1e-10) {
                ok = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }

    if (!ok || A <= 0.05 || !(s > 0.0) || m < x_min - sigma_grid || m > x_max + sigma_grid)
        return fallback(A);

    LikelihoodFit fit;
    fit.converged = true;
    fit.amplitude = A;
    fit.mean = m;
    fit.std = std::abs(s);
    fit.rms_residual = std::sqrt(cost / n);
    return fit;
}

Gaussian bayes_update(const Gaussian& prior, const LikelihoodFit& fit) {
    if (!std::isfinite(fit.mean) || !std::isfinite(fit.std) || !(fit.std > 0.0))
        throw InvalidFitError("likelihood fit has non-finite or non-positive parameters");
    if (!std::isfinite(prior.mean) || !(prior.std > 0.0))
        throw InvalidFitError("prior has non-finite or non-positive parameters");
    const double vp = prior.std * prior.std;
    const double vl = fit.std * fit.std;
    Gaussian post;
    post.mean = (prior.mean * vl + fit.mean * vp) / (vp + vl);
    post.std = prior.std * fit.std / std::sqrt(vp + vl);
    return post;
}

BpdeResult run_bpde(const SpinOrbitalIntegrals& ints, const Determinant& d0,
                    const Determinant& d1, const BpdeConfig& cfg) {
    cfg.validate();
    if (d0.n != ints.n_orb || d1.n != ints.n_orb)
        throw LengthMismatchError("reference determinant length != n_orb");
    if (d0 == d1) throw IdenticalReferencesError("reference determinants are identical");
    if (d0.particle_count() != d1.particle_count())
        throw ParticleNumberMismatchError("references have different particle numbers");

    BpdeResult res;
    res.config = cfg;
    res.config.h00 = ints.one_body(0, 0).real();

    const QubitHamiltonian h = jordan_wigner(ints, cfg.prune_cutoff);
    const Engine eng(cfg.workers);

    res.mu_ini = determinant_expectation(h, d1) - determinant_expectation(h, d0);
    Gaussian prior{res.mu_ini,
                   std::max(cfg.sigma_floor, cfg.sigma_mult * std::abs(res.mu_ini))};

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        IterationRecord rec;
        rec.prior = prior;
        const ScanSetup su = make_scan_setup(h, prior, res.config);
        rec.t = su.t;
        rec.m_slices = su.plan.m_slices;
        rec.e_thre = cfg.thresh_coeff * su.plan.m_slices / su.t;

        rec.scan = scan_likelihood(h, d0, d1, prior, res.config,
                                   static_cast<std::uint64_t>(iter), eng);
        if (res.config.mode == ProbMode::SAMPLED)
            res.total_shots += static_cast<long long>(cfg.n_scan) * cfg.shots;

        rec.fit = fit_gaussian(rec.scan);
        rec.posterior = bayes_update(prior, rec.fit);
        res.iterations.push_back(rec);

        res.gap = rec.posterior.mean;
        res.sigma_final = rec.posterior.std;
        res.e_thre = rec.e_thre;
        prior = rec.posterior;
        if (rec.posterior.std < rec.e_thre) {
            res.converged = true;
            break;
        }
    }
    return res;
}

}  // namespace bpdesim
