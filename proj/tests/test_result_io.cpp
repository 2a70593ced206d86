// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "bpdesim/errors.hpp"
#include "bpdesim/result_io.hpp"
#include "test_util.hpp"

using namespace bpdesim;

TEST_CASE("unit conversion constant and round trip") {
    CHECK_NEAR(hartree_to_cm1(0.5), 109737.3156816, 1e-6);
    for (double e : {1e-6, 0.037, 1.0, 54.3}) {
        const double back = cm1_to_hartree(hartree_to_cm1(e));
        CHECK(std::abs(back - e) / e < 1e-12);
    }
}

TEST_CASE("enum names round trip") {
    CHECK(backend_from_name(backend_name(Backend::GATE)) == Backend::GATE);
    CHECK(backend_from_name(backend_name(Backend::FUSED)) == Backend::FUSED);
    CHECK(mode_from_name(mode_name(ProbMode::SAMPLED)) == ProbMode::SAMPLED);
    CHECK(mode_from_name(mode_name(ProbMode::EXACT_PROB)) == ProbMode::EXACT_PROB);
    CHECK(rule_from_name(rule_name(ScheduleRule::LITERAL)) == ScheduleRule::LITERAL);
    CHECK(rule_from_name(rule_name(ScheduleRule::INVERTED)) == ScheduleRule::INVERTED);
    CHECK_THROWS_AS(backend_from_name("gpu"), Error);
    CHECK_THROWS_AS(mode_from_name("noisy"), Error);
    CHECK_THROWS_AS(rule_from_name("?"), Error);
}

TEST_CASE("result documents survive a serialization round trip") {
    const auto ints = synth_random_hamiltonian(3, 21, 0.0);
    BpdeConfig cfg;
    cfg.mode = ProbMode::SAMPLED;
    cfg.seed = 77;
    cfg.backend = Backend::GATE;
    cfg.trotter_rule = ScheduleRule::LITERAL;
    const BpdeResult res = run_bpde(ints, Determinant::from_string("110"),
                                    Determinant::from_string("011"), cfg);

    const std::string text = result_to_json(res);
    const BpdeResult back = result_from_json(text);

    CHECK(back.gap == res.gap);
    CHECK(back.sigma_final == res.sigma_final);
    CHECK(back.e_thre == res.e_thre);
    CHECK(back.mu_ini == res.mu_ini);
    CHECK(back.converged == res.converged);
    CHECK(back.total_shots == res.total_shots);
    CHECK(back.config.seed == res.config.seed);
    CHECK(back.config.backend == res.config.backend);
    CHECK(back.config.trotter_rule == res.config.trotter_rule);
    CHECK(back.config.mode == res.config.mode);
    CHECK(back.config.h00 == res.config.h00);
    REQUIRE(back.iterations.size() == res.iterations.size());
    for (std::size_t i = 0; i < res.iterations.size(); ++i) {
        const auto& a = res.iterations[i];
        const auto& b = back.iterations[i];
        CHECK(a.prior.mean == b.prior.mean);
        CHECK(a.posterior.std == b.posterior.std);
        CHECK(a.t == b.t);
        CHECK(a.m_slices == b.m_slices);
        CHECK(a.fit.mean == b.fit.mean);
        CHECK(a.fit.converged == b.fit.converged);
        REQUIRE(a.scan.size() == b.scan.size());
        for (std::size_t k = 0; k < a.scan.size(); ++k) {
            CHECK(a.scan[k].delta_eps == b.scan[k].delta_eps);
            CHECK(a.scan[k].prob0 == b.scan[k].prob0);
            CHECK(a.scan[k].shots == b.scan[k].shots);
        }
    }

    // the cm^-1 field is consistent with the Hartree field
    CHECK(text.find("gap_cm1") != std::string::npos);
}

TEST_CASE("broken documents are rejected with a clear error") {
    CHECK_THROWS_AS(result_from_json("not json at all {"), Error);
    CHECK_THROWS_AS(result_from_json("{\"gap_hartree\": 1.0}"), Error);
}

TEST_CASE("atomic file writes") {
    const std::string path = "test_result_io_scratch.json";
    atomic_write_file(path, "first");
    atomic_write_file(path, "second");
    std::ifstream in(path);
    std::string content;
    std::getline(in, content);
    CHECK(content == "second");
    in.close();
    std::remove(path.c_str());

    CHECK_THROWS_AS(atomic_write_file("no_such_dir_xyz/file.json", "x"), Error);
}
