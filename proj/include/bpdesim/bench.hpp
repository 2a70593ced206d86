// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bpdesim/trotter.hpp"

namespace bpdesim {

/// Fixed synthetic likelihood-scan workload: one estimation iteration on a
/// seeded random instance (scan_points full circuit evaluations at a fixed
/// slice count). The term list is truncated to max_terms by stratified
/// selection over the canonical order so every size sees a comparable
/// support-length mix; amplitude-array size is then the only scaling knob.
struct BenchConfig {
    std::vector<int> sizes{8, 10, 12, 14};      // active-space qubit counts
    std::vector<Backend> backends{Backend::GATE, Backend::FUSED};
    std::vector<int> worker_counts{1, 4};
    int repetitions = 3;
    int scan_points = 21;
    int m_slices = 2;
    int max_terms = 400;
    std::uint64_t seed = 12345;
    std::uint64_t memory_budget_bytes = 4ULL << 30;
};

struct BenchRow {
    int n_qubits = 0;  // active-space size; the circuit adds one ancilla
    Backend backend = Backend::GATE;
    int workers = 1;
    int repetitions = 0;
    double mean_s = 0.0;
    double median_s = 0.0;
    /// Single-worker GATE median at the same size divided by this row's
    /// median; the baseline row itself reads exactly 1.0.
    double speedup = 1.0;
};

struct BenchReport {
    BenchConfig config;
    std::vector<BenchRow> rows;
};

BenchReport run_bench(const BenchConfig& cfg);

std::string bench_table(const BenchReport& report);
std::string bench_to_json(const BenchReport& report);

}  // namespace bpdesim
