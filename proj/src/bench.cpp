// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#include "bpdesim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "bpdesim/bpde.hpp"
#include "bpdesim/errors.hpp"
#include "bpdesim/result_io.hpp"

namespace bpdesim {

namespace {

struct Workload {
    QubitHamiltonian h;
    Determinant d0, d1;
    TrotterPlan plan;
    double t = 18.0;  // prior std 0.1 under the sampling protocol
};

Workload make_workload(int size, const BenchConfig& cfg) {
    const std::uint64_t bytes = (16ULL << size) * 2;  // system + ancilla register
    if (bytes > cfg.memory_budget_bytes)
        throw OutOfMemoryError("workload of " + std::to_string(size) +
                               " qubits exceeds the memory budget");

    Workload w;
    const SpinOrbitalIntegrals ints = synth_random_hamiltonian(size, cfg.seed, 1.0);
    QubitHamiltonian full = jordan_wigner(ints, 1e-12);

    const int keep = std::min<int>(cfg.max_terms, static_cast<int>(full.terms.size()));
    w.h.n_qubits = full.n_qubits;
    w.h.terms.reserve(keep);
    // Stratified pick in canonical order: index i -> floor(i * N / keep).
    const std::size_t total = full.terms.size();
    for (int i = 0; i < keep; ++i)
        w.h.terms.push_back(full.terms[i * total / keep]);

    const int filled = size / 2;
    std::uint64_t occ = (1ULL << filled) - 1;
    w.d0 = Determinant(occ, size);
    w.d1 = Determinant((occ & ~(1ULL << (filled - 1))) | (1ULL << filled), size);
    w.plan = make_trotter_plan(w.h, w.t, cfg.m_slices);
    return w;
}

// One full scan: every point executes the complete interference circuit.
double run_workload(const Workload& w, const BenchConfig& cfg, Backend backend,
                    const Engine& eng) {
    double checksum = 0.0;
    for (int i = 0; i < cfg.scan_points; ++i) {
        const double delta_eps = -0.1 + 0.2 * i / double(cfg.scan_points - 1);
        const Circuit circuit = build_bpde_circuit(w.h, w.d0, w.d1, delta_eps, w.plan, backend);
        StateVector s =
            basis_state(w.h.n_qubits + 1, Determinant(w.d0.bits, w.h.n_qubits + 1));
        eng.apply(s, circuit);
        checksum += eng.ancilla_prob0(s, w.h.n_qubits);
    }
    return checksum;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

BenchReport run_bench(const BenchConfig& cfg) {
    if (cfg.sizes.empty() || cfg.backends.empty() || cfg.worker_counts.empty())
        throw Error("benchmark needs at least one size, backend and worker count");
    if (cfg.repetitions < 3) throw Error("benchmark needs >= 3 repetitions");

    BenchReport report;
    report.config = cfg;

    for (int size : cfg.sizes) {
        const Workload w = make_workload(size, cfg);

        // Measured combinations; the (GATE, 1 worker) baseline is always
        // included because speedups are defined against it.
        std::vector<std::pair<Backend, int>> combos;
        combos.emplace_back(Backend::GATE, 1);
        for (Backend b : cfg.backends)
            for (int wk : cfg.worker_counts)
                if (!(b == Backend::GATE && wk == 1)) combos.emplace_back(b, wk);

        std::map<std::pair<int, int>, double> medians;  // (backend, workers) -> s
        for (auto [backend, workers] : combos) {
            const Engine eng(workers);
            volatile double sink = run_workload(w, cfg, backend, eng);  // warm-up
            std::vector<double> times;
            times.reserve(cfg.repetitions);
            for (int rep = 0; rep < cfg.repetitions; ++rep) {
                const auto t0 = std::chrono::steady_clock::now();
                sink = run_workload(w, cfg, backend, eng);
                const auto t1 = std::chrono::steady_clock::now();
                times.push_back(std::chrono::duration<double>(t1 - t0).count());
            }
            (void)sink;
            BenchRow row;
            row.n_qubits = size;
            row.backend = backend;
            row.workers = workers;
            row.repetitions = cfg.repetitions;
            row.median_s = median(times);
            double sum = 0.0;
            for (double v : times) sum += v;
            row.mean_s = sum / times.size();
            report.rows.push_back(row);
            medians[{backend == Backend::GATE ? 0 : 1, workers}] = row.median_s;
        }
        const double baseline = medians.at({0, 1});
        for (BenchRow& row : report.rows) {
            if (row.n_qubits != size) continue;
            row.speedup = (row.backend == Backend::GATE && row.workers == 1)
                              ? 1.0
                              : baseline / row.median_s;
        }
    }
    return report;
}

std::string bench_table(const BenchReport& report) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof(line), "%8s  %-7s %8s %6s %12s %12s %9s\n", "qubits", "backend",
                  "workers", "reps", "mean(s)", "median(s)", "speedup");
    out += line;
    for (const BenchRow& r : report.rows) {
        std::snprintf(line, sizeof(line), "%8d  %-7s %8d %6d %12.4f %12.4f %9.2f\n", r.n_qubits,
                      backend_name(r.backend).c_str(), r.workers, r.repetitions, r.mean_s,
                      r.median_s, r.speedup);
        out += line;
    }
    return out;
}

std::string bench_to_json(const BenchReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const BenchRow& r : report.rows) {
        rows.push_back({{"n_qubits", r.n_qubits},
                        {"backend", backend_name(r.backend)},
                        {"workers", r.workers},
                        {"repetitions", r.repetitions},
                        {"mean_s", r.mean_s},
                        {"median_s", r.median_s},
                        {"speedup", r.speedup}});
    }
    nlohmann::json doc{{"rows", rows},
                       {"config",
                        {{"scan_points", report.config.scan_points},
                         {"m_slices", report.config.m_slices},
                         {"max_terms", report.config.max_terms},
                         {"repetitions", report.config.repetitions},
                         {"seed", report.config.seed}}}};
    return doc.dump(2);
}

}  // namespace bpdesim
