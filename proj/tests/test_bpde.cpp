// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bpdesim/bpde.hpp"
#include "bpdesim/errors.hpp"
#include "bpdesim/oracle.hpp"
#include "test_util.hpp"

using namespace bpdesim;

namespace {

double run_circuit_prob0(const QubitHamiltonian& h, const Determinant& d0,
                         const Determinant& d1, double delta_eps, const TrotterPlan& plan,
                         Backend backend = Backend::FUSED) {
    const Circuit c = build_bpde_circuit(h, d0, d1, delta_eps, plan, backend);
    StateVector s = basis_state(h.n_qubits + 1, Determinant(d0.bits, h.n_qubits + 1));
    apply_circuit(s, c);
    return ancilla_prob0(s, h.n_qubits);
}

BpdeConfig exact_config(std::uint64_t seed = 0) {
    BpdeConfig cfg;
    cfg.mode = ProbMode::EXACT_PROB;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("single Z term reproduces the closed-form interference curve") {
    QubitHamiltonian h;
    h.n_qubits = 1;
    const double w = 0.37;
    h.terms.push_back({w, PauliString::single(0, PauliOp::Z)});
    const Determinant d0 = Determinant::from_string("0");
    const Determinant d1 = Determinant::from_string("1");
    const double dE = -2.0 * w;  // E(|1>) - E(|0>) = -w - (+w)

    for (double t : {0.4, 1.0, 2.7}) {
        const auto plan = make_trotter_plan(h, t, 3);
        for (double delta_eps : {-1.0, -0.2, 0.0, 0.33, 0.9}) {
            const double expect = 0.5 * (1.0 + std::cos((dE - delta_eps) * t));
            CHECK_NEAR(run_circuit_prob0(h, d0, d1, delta_eps, plan), expect, 1e-12);
        }
    }
}

TEST_CASE("probability peaks at exactly the gap hypothesis") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto ints = synth_random_hamiltonian(4, seed, 0.0);  // diagonal
        const auto h = jordan_wigner(ints);
        const Determinant d0 = Determinant::from_string("1100");
        const Determinant d1 = Determinant::from_string("1010");
        const double dE =
            determinant_expectation(h, d1) - determinant_expectation(h, d0);
        for (double t : {0.18, 1.3}) {
            const auto plan = make_trotter_plan(h, t, 2);
            CHECK_NEAR(run_circuit_prob0(h, d0, d1, dE, plan), 1.0, 1e-12);
        }
    }
}

TEST_CASE("both backends and the eq-(4) evaluator agree on a dominant instance") {
    const auto ints = synth_random_hamiltonian(3, 11, 10.0);
    const auto h = jordan_wigner(ints);
    const Determinant d0 = Determinant::from_string("110");
    const Determinant d1 = Determinant::from_string("101");
    const auto sys =
        oracle::diagonalize(oracle::fermionic_dense(ints), d0, d1);
    const double h00 = ints.one_body(0, 0).real();

    for (double t : {0.5, 1.0, 2.0}) {
        const auto plan = make_trotter_plan(h, t, slice_count(t, h00, ScheduleRule::INVERTED));
        for (double delta_eps : {-1.5, -0.9, 0.0, 1.2}) {
            const double circuit = run_circuit_prob0(h, d0, d1, delta_eps, plan);
            const double formula = oracle::eq4_prob0(sys, delta_eps, t);
            CHECK_NEAR(circuit, formula, 0.02);
            const double gate = run_circuit_prob0(h, d0, d1, delta_eps, plan, Backend::GATE);
            CHECK_NEAR(circuit, gate, 1e-10);
        }
    }
}

TEST_CASE("degenerate or mismatched references are rejected") {
    const auto ints = synth_random_hamiltonian(3, 2, 1.0);
    const auto h = jordan_wigner(ints);
    const auto plan = make_trotter_plan(h, 1.0, 1);
    const Determinant d = Determinant::from_string("110");
    CHECK_THROWS_AS(build_bpde_circuit(h, d, d, 0.0, plan), IdenticalReferencesError);
    CHECK_THROWS_AS(build_bpde_circuit(h, Determinant::from_string("10"), d, 0.0, plan),
                    LengthMismatchError);
}

TEST_CASE("scan grid is uniform from mean-std to mean+std") {
    const auto ints = synth_random_hamiltonian(2, 3, 0.0);
    const auto h = jordan_wigner(ints);
    BpdeConfig cfg = exact_config();
    const auto points = scan_likelihood(h, Determinant::from_string("10"),
                                        Determinant::from_string("01"), {0.0, 0.1}, cfg);
    REQUIRE(int(points.size()) == cfg.n_scan);
    for (int i = 0; i < cfg.n_scan; ++i)
        CHECK_NEAR(points[i].delta_eps, -0.1 + 0.01 * i, 1e-15);
}

TEST_CASE("exact-mode scan lies on the closed-form curve") {
    const auto ints = synth_random_hamiltonian(4, 9, 0.0);
    const auto h = jordan_wigner(ints);
    const Determinant d0 = Determinant::from_string("1100");
    const Determinant d1 = Determinant::from_string("0110");
    const double dE = determinant_expectation(h, d1) - determinant_expectation(h, d0);
    const Gaussian prior{dE, 0.5};
    BpdeConfig cfg = exact_config();
    cfg.h00 = ints.one_body(0, 0).real();
    const double t = cfg.time_coeff / prior.std;
    const auto points = scan_likelihood(h, d0, d1, prior, cfg);
    for (const auto& p : points) {
        CHECK_NEAR(p.prob0, 0.5 * (1.0 + std::cos((dE - p.delta_eps) * t)), 1e-12);
        CHECK(p.shots == 0);
    }
}

TEST_CASE("sampled scan stays within five binomial sigmas of the exact curve") {
    const auto ints = synth_random_hamiltonian(3, 4, 0.0);
    const auto h = jordan_wigner(ints);
    const Determinant d0 = Determinant::from_string("110");
    const Determinant d1 = Determinant::from_string("011");
    const Gaussian prior{determinant_expectation(h, d1) - determinant_expectation(h, d0),
                         0.3};
    BpdeConfig exact = exact_config();
    const auto curve = scan_likelihood(h, d0, d1, prior, exact);

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        BpdeConfig cfg;
        cfg.mode = ProbMode::SAMPLED;
        cfg.seed = seed;
        const auto pts = scan_likelihood(h, d0, d1, prior, cfg);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double p = curve[i].prob0;
            const double sigma = std::sqrt(p * (1.0 - p) / cfg.shots);
            CHECK(std::abs(pts[i].prob0 - p) <= 5.0 * sigma + 1e-12);
            CHECK(pts[i].shots == cfg.shots);
        }
    }
}

TEST_CASE("scan equals running the assembled circuit point by point") {
    const auto ints = synth_random_hamiltonian(3, 6, 5.0);
    const auto h = jordan_wigner(ints);
    const Determinant d0 = Determinant::from_string("110");
    const Determinant d1 = Determinant::from_string("101");
    const Gaussian prior{0.7, 0.4};
    BpdeConfig cfg = exact_config(3);
    cfg.h00 = ints.one_body(0, 0).real();

    const auto points = scan_likelihood(h, d0, d1, prior, cfg);
    const double t = cfg.time_coeff / prior.std;
    const auto plan =
        make_trotter_plan(h, t, slice_count(t, cfg.h00, cfg.trotter_rule));
    for (const auto& p : points) {
        const double direct = run_circuit_prob0(h, d0, d1, p.delta_eps, plan);
        CHECK(p.prob0 == direct);  // bitwise: same gates in the same order
    }
}

TEST_CASE("noiseless Gaussian points are recovered to 1e-6") {
    std::vector<ScanPoint> pts;
    for (int i = 0; i < 21; ++i) {
        const double x = -0.1 + 0.01 * i;
        const double f = 0.5 + 0.5 * std::exp(-(x - 0.03) * (x - 0.03) / (2 * 0.01 * 0.01));
        pts.push_back({x, f, 0});
    }
    const auto fit = fit_gaussian(pts);
    CHECK(fit.converged);
    CHECK_NEAR(fit.mean, 0.03, 1e-6);
    CHECK_NEAR(fit.std, 0.01, 1e-6);
    CHECK_NEAR(fit.amplitude, 0.5, 1e-5);
    CHECK(fit.rms_residual < 1e-8);
}

TEST_CASE("flat scans fall back to the centroid") {
    std::vector<ScanPoint> pts;
    for (int i = 0; i < 21; ++i) pts.push_back({-0.1 + 0.01 * i, 0.5, 0});
    const auto fit = fit_gaussian(pts);
    CHECK(!fit.converged);
    CHECK_NEAR(fit.mean, 0.0, 1e-12);           // grid centre
    CHECK_NEAR(fit.std, 0.1, 1e-12);            // grid half-width
    CHECK_THROWS_AS(fit_gaussian(std::vector<ScanPoint>(3)), TooFewPointsError);
}

TEST_CASE("cosine scans locate the gap within one grid spacing") {
    const auto ints = synth_random_hamiltonian(4, 13, 0.0);
    const auto h = jordan_wigner(ints);
    const Determinant d0 = Determinant::from_string("1100");
    const Determinant d1 = Determinant::from_string("1001");
    const double dE = determinant_expectation(h, d1) - determinant_expectation(h, d0);
    BpdeConfig cfg = exact_config();
    cfg.h00 = ints.one_body(0, 0).real();
    const Gaussian prior{dE + 0.05, 0.4};  // off-centre window containing dE
    const auto points = scan_likelihood(h, d0, d1, prior, cfg);
    const auto fit = fit_gaussian(points);
    const double spacing = 2.0 * prior.std / (cfg.n_scan - 1);
    CHECK(fit.converged);
    CHECK_NEAR(fit.mean, dE, spacing);
}

TEST_CASE("posterior product closed form") {
    const Gaussian post = bayes_update({0.0, 1.0}, {0.3, 1.0, 1.0, 0.5, 0.0, true});
    CHECK_NEAR(post.mean, 0.5, 1e-15);
    CHECK_NEAR(post.std, 1.0 / std::sqrt(2.0), 1e-15);

    const Gaussian wide = bayes_update({0.3, 0.05}, {0.3, 0.5, 1e6, 0.5, 0.0, true});
    CHECK_NEAR(wide.mean, 0.3, 1e-9);
    CHECK_NEAR(wide.std / 0.05, 1.0, 1e-9);

    CHECK_THROWS_AS(bayes_update({0.0, 1.0}, {0.3, 0.5, 0.0, 0.5, 0.0, true}),
                    InvalidFitError);
    CHECK_THROWS_AS(
        bayes_update({0.0, 1.0},
                     {0.3, std::nan(""), 1.0, 0.5, 0.0, true}),
        InvalidFitError);
}

TEST_CASE("posterior matches direct quadrature of the update rule") {
    const Gaussian prior{0.02, 0.05};
    const double mL = 0.035, sL = 0.01;
    const Gaussian post = bayes_update(prior, {0.4, mL, sL, 0.5, 0.0, true});

    // trapezoid over +/- 8 sigma, 1e5 points
    const double lo = std::min(prior.mean, mL) - 8.0 * std::max(prior.std, sL);
    const double hi = std::max(prior.mean, mL) + 8.0 * std::max(prior.std, sL);
    const int n = 100000;
    const double dx = (hi - lo) / (n - 1);
    double z = 0.0, m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + i * dx;
        const double w =
            std::exp(-(x - prior.mean) * (x - prior.mean) / (2 * prior.std * prior.std) -
                     (x - mL) * (x - mL) / (2 * sL * sL));
        const double trap = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        z += trap * w;
        m1 += trap * w * x;
        m2 += trap * w * x * x;
    }
    const double mean_q = m1 / z;
    const double std_q = std::sqrt(m2 / z - mean_q * mean_q);
    CHECK_NEAR(post.mean, mean_q, 1e-8);
    CHECK_NEAR(post.std, std_q, 1e-8);
}

TEST_CASE("diagonal instances converge to the analytic gap") {
    const auto ints = synth_random_hamiltonian(4, 7, 0.0);
    const auto h = jordan_wigner(ints);
    const Determinant d0 = Determinant::from_string("1100");
    const Determinant d1 = Determinant::from_string("1010");
    const double analytic =
        determinant_expectation(h, d1) - determinant_expectation(h, d0);

    BpdeConfig cfg = exact_config(5);
    const BpdeResult res = run_bpde(ints, d0, d1, cfg);
    CHECK(res.converged);
    CHECK(res.sigma_final <= res.e_thre);
    CHECK_NEAR(res.gap, analytic, res.e_thre);
    CHECK(res.mu_ini == doctest::Approx(analytic).epsilon(1e-12));
    CHECK(!res.iterations.empty());

    // strictly decreasing posterior widths
    for (std::size_t i = 0; i < res.iterations.size(); ++i) {
        CHECK(res.iterations[i].posterior.std < res.iterations[i].prior.std);
        CHECK_NEAR(res.iterations[i].t, 1.8 / res.iterations[i].prior.std, 1e-9);
        CHECK(int(res.iterations[i].scan.size()) == cfg.n_scan);
    }
}

TEST_CASE("sampled mode stays within three thresholds on a diagonal instance") {
    const auto ints = synth_random_hamiltonian(4, 3, 0.0);
    const auto h = jordan_wigner(ints);
    const Determinant d0 = Determinant::from_string("1100");
    const Determinant d1 = Determinant::from_string("0101");
    const double analytic =
        determinant_expectation(h, d1) - determinant_expectation(h, d0);
    BpdeConfig cfg;
    cfg.mode = ProbMode::SAMPLED;
    cfg.seed = 11;
    const BpdeResult res = run_bpde(ints, d0, d1, cfg);
    CHECK(res.converged);
    CHECK_NEAR(res.gap, analytic, 3.0 * res.e_thre);
    CHECK(res.total_shots ==
          static_cast<long long>(res.iterations.size()) * cfg.n_scan * cfg.shots);
}

TEST_CASE("dominant-determinant instance lands near the exact gap") {
    const auto ints = synth_random_hamiltonian(4, 7, 10.0);
    const Determinant d0 = Determinant::from_string("1100");
    const Determinant d1 = Determinant::from_string("1010");
    const auto sys = oracle::diagonalize(oracle::fermionic_dense(ints), d0, d1);
    const double exact = oracle::exact_gap(sys).value;

    const BpdeResult res = run_bpde(ints, d0, d1, exact_config(1));
    CHECK(res.converged);
    CHECK_NEAR(res.gap, exact, 2.0 * res.e_thre);
}

TEST_CASE("reference validation in the estimation loop") {
    const auto ints = synth_random_hamiltonian(3, 2, 1.0);
    const Determinant d = Determinant::from_string("110");
    CHECK_THROWS_AS(run_bpde(ints, d, d, exact_config()), IdenticalReferencesError);
    CHECK_THROWS_AS(run_bpde(ints, d, Determinant::from_string("100"), exact_config()),
                    ParticleNumberMismatchError);
    CHECK_THROWS_AS(run_bpde(ints, d, Determinant::from_string("1010"), exact_config()),
                    LengthMismatchError);
    BpdeConfig bad;
    bad.n_scan = 6;
    CHECK_THROWS_AS(run_bpde(ints, d, Determinant::from_string("101"), bad), Error);
}

TEST_CASE("runs are deterministic in the seed") {
    const auto ints = synth_random_hamiltonian(4, 5, 0.0);
    const Determinant d0 = Determinant::from_string("1100");
    const Determinant d1 = Determinant::from_string("1010");
    BpdeConfig cfg;
    cfg.mode = ProbMode::SAMPLED;
    cfg.seed = 99;
    const BpdeResult a = run_bpde(ints, d0, d1, cfg);
    const BpdeResult b = run_bpde(ints, d0, d1, cfg);
    CHECK(a.gap == b.gap);
    CHECK(a.sigma_final == b.sigma_final);
    REQUIRE(a.iterations.size() == b.iterations.size());
    for (std::size_t i = 0; i < a.iterations.size(); ++i)
        for (int j = 0; j < int(a.iterations[i].scan.size()); ++j)
            CHECK(a.iterations[i].scan[j].prob0 == b.iterations[i].scan[j].prob0);

    BpdeConfig other = cfg;
    other.seed = 100;
    const BpdeResult c = run_bpde(ints, d0, d1, other);
    CHECK(c.gap != a.gap);  // different shot noise
}
