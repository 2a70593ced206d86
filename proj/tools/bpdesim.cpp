// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

// Command line front end: single estimation runs, repeated campaigns,
// exact-diagonalization cross checks, synthetic instance generation and
// backend/worker benchmarks.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bpdesim/bench.hpp"
#include "bpdesim/bpde.hpp"
#include "bpdesim/errors.hpp"
#include "bpdesim/integrals.hpp"
#include "bpdesim/oracle.hpp"
#include "bpdesim/result_io.hpp"

namespace {

using namespace bpdesim;
using nlohmann::json;

// Stable exit codes (documented in README):
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;     // invalid flags / inconsistent inputs
constexpr int kExitIo = 2;        // missing or unwritable files
constexpr int kExitParse = 3;     // malformed input data
constexpr int kExitNotConverged = 4;

struct CommonArgs {
    std::string ints_path;
    std::string d0, d1;
    std::string freeze;
    std::string out_path;
    BpdeConfig cfg;
    std::string mode = "sampled";
    std::string backend = "fused";
    std::string rule = "inverted";
};

std::set<int> parse_freeze(const std::string& s) {
    std::set<int> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw Error("bad frozen orbital '" + tok + "'");
        out.insert(v);
    }
    return out;
}

SpinOrbitalIntegrals load_and_freeze(const std::string& path, const std::string& freeze) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open integral file: " + path);
    SpinOrbitalIntegrals ints = parse_integral_file(in);
    const std::set<int> frozen = parse_freeze(freeze);
    if (!frozen.empty()) ints = freeze_orbitals(ints, frozen);
    return ints;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content << "\n";
    } else {
        atomic_write_file(out_path, content);
    }
}

BpdeConfig finalize_config(const CommonArgs& a) {
    BpdeConfig cfg = a.cfg;
    cfg.mode = mode_from_name(a.mode);
    cfg.backend = backend_from_name(a.backend);
    cfg.trotter_rule = rule_from_name(a.rule);
    cfg.validate();
    return cfg;
}

struct OracleSummary {
    double gap = 0.0;
    double ref_gap = 0.0;
    bool degenerate = false;
    double overlap0 = 0.0, overlap1 = 0.0;
};

OracleSummary oracle_summary(const SpinOrbitalIntegrals& ints, const Determinant& d0,
                             const Determinant& d1) {
    const Eigen::MatrixXcd H = oracle::fermionic_dense(ints);
    const oracle::EigenSystem sys = oracle::diagonalize(H, d0, d1);
    const oracle::ExactGap g = oracle::exact_gap(sys);
    OracleSummary s;
    s.gap = g.value;
    s.degenerate = g.degenerate;
    s.overlap0 = std::norm(sys.overlaps0(g.j_star));
    s.overlap1 = std::norm(sys.overlaps1(g.k_star));
    s.ref_gap = (H(d1.index(), d1.index()) - H(d0.index(), d0.index())).real();
    return s;
}

int cmd_run(const CommonArgs& args) {
    const SpinOrbitalIntegrals ints = load_and_freeze(args.ints_path, args.freeze);
    const Determinant d0 = Determinant::from_string(args.d0);
    const Determinant d1 = Determinant::from_string(args.d1);
    const BpdeConfig cfg = finalize_config(args);

    const BpdeResult res = run_bpde(ints, d0, d1, cfg);
    emit(args.out_path, result_to_json(res));
    std::fprintf(stderr, "gap = %.10f Hartree (%.5f cm^-1), sigma = %.3e, %s in %zu iterations\n",
                 res.gap, hartree_to_cm1(res.gap), res.sigma_final,
                 res.converged ? "converged" : "NOT converged", res.iterations.size());
    return res.converged ? kExitOk : kExitNotConverged;
}

struct CampaignEntry {
    std::string ints_path;
    std::string d0, d1;
    std::string freeze;
    int repeats = 5;
    BpdeConfig cfg;
};

json run_campaign_entry(const CampaignEntry& entry, bool& all_converged) {
    const SpinOrbitalIntegrals ints = load_and_freeze(entry.ints_path, entry.freeze);
    const Determinant d0 = Determinant::from_string(entry.d0);
    const Determinant d1 = Determinant::from_string(entry.d1);

    std::vector<double> gaps;
    json runs = json::array();
    double mu_ini = 0.0;
    for (int r = 0; r < entry.repeats; ++r) {
        BpdeConfig cfg = entry.cfg;
        cfg.seed = RngStream::child(entry.cfg.seed, {static_cast<std::uint64_t>(r)}).next_u64();
        const BpdeResult res = run_bpde(ints, d0, d1, cfg);
        mu_ini = res.mu_ini;
        gaps.push_back(res.gap);
        all_converged = all_converged && res.converged;
        runs.push_back(json{{"seed", cfg.seed},
                            {"gap_hartree", res.gap},
                            {"sigma_final", res.sigma_final},
                            {"e_thre", res.e_thre},
                            {"iterations", res.iterations.size()},
                            {"converged", res.converged}});
    }
    double mean = 0.0;
    for (double g : gaps) mean += g;
    mean /= gaps.size();
    double var = 0.0;
    for (double g : gaps) var += (g - mean) * (g - mean);
    const double stddev = gaps.size() > 1 ? std::sqrt(var / (gaps.size() - 1)) : 0.0;

    json row{{"ints", entry.ints_path},
             {"d0", entry.d0},
             {"d1", entry.d1},
             {"repeats", entry.repeats},
             {"mu_ini_hartree", mu_ini},
             {"gap_mean_hartree", mean},
             {"gap_std_hartree", stddev},
             {"gap_mean_cm1", hartree_to_cm1(mean)},
             {"gap_std_cm1", hartree_to_cm1(stddev)},
             {"runs", runs}};
    if (ints.n_orb <= 14) {
        try {
            const OracleSummary s = oracle_summary(ints, d0, d1);
            row["casci_gap_hartree"] = s.gap;
            row["casci_gap_cm1"] = hartree_to_cm1(s.gap);
            row["bpde_over_casci"] = s.gap != 0.0 ? mean / s.gap : 0.0;
        } catch (const AmbiguousAssignmentError& e) {
            row["casci_gap_hartree"] = nullptr;
            row["casci_note"] = e.what();
        }
    }
    return row;
}

int cmd_campaign(const std::string& specs_path, const CommonArgs& args, int default_repeats) {
    std::vector<CampaignEntry> entries;
    if (!specs_path.empty()) {
        std::ifstream in(specs_path);
        if (!in) throw Error("cannot open campaign file: " + specs_path);
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::exception& e) {
            throw MalformedLineError(std::string("campaign file is not valid JSON: ") +
                                     e.what());
        }
        if (!doc.is_array()) throw MalformedLineError("campaign file must be a JSON array");
        for (const json& je : doc) {
            CampaignEntry e;
            e.cfg = args.cfg;
            e.cfg.mode = mode_from_name(je.value("mode", args.mode));
            e.cfg.backend = backend_from_name(je.value("backend", args.backend));
            e.cfg.trotter_rule = rule_from_name(je.value("trotter_rule", args.rule));
            e.ints_path = je.at("ints").get<std::string>();
            e.d0 = je.at("d0").get<std::string>();
            e.d1 = je.at("d1").get<std::string>();
            e.freeze = je.value("freeze", std::string{});
            e.repeats = je.value("repeats", default_repeats);
            e.cfg.seed = je.value("seed", args.cfg.seed);
            e.cfg.shots = je.value("shots", args.cfg.shots);
            e.cfg.n_scan = je.value("scan", args.cfg.n_scan);
            e.cfg.workers = je.value("workers", args.cfg.workers);
            entries.push_back(e);
        }
    } else {
        CampaignEntry e;
        e.ints_path = args.ints_path;
        e.d0 = args.d0;
        e.d1 = args.d1;
        e.freeze = args.freeze;
        e.cfg = args.cfg;
        e.repeats = default_repeats;
        if (e.ints_path.empty()) throw EmptyCampaignError("campaign has no entries");
        entries.push_back(e);
    }
    if (entries.empty()) throw EmptyCampaignError("campaign has no entries");

    bool all_converged = true;
    bool any_failed = false;
    json rows = json::array();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        try {
            rows.push_back(run_campaign_entry(entries[i], all_converged));
        } catch (const std::exception& e) {
            any_failed = true;
            rows.push_back(json{{"ints", entries[i].ints_path}, {"error", e.what()}});
            std::fprintf(stderr, "campaign entry %zu failed: %s\n", i, e.what());
        }
    }

    json doc{{"entries", rows}};
    emit(args.out_path, doc.dump(2));

    std::fprintf(stderr, "%-28s %14s %14s %14s %14s\n", "system", "dE_Ref", "dE_BPDE",
                 "std", "dE_CASCI");
    for (const json& row : rows) {
        if (row.contains("error")) continue;
        const double casci = row.contains("casci_gap_hartree") &&
                                     !row["casci_gap_hartree"].is_null()
                                 ? row["casci_gap_hartree"].get<double>()
                                 : std::nan("");
        std::fprintf(stderr, "%-28s %14.8f %14.8f %14.8f %14.8f\n",
                     row["ints"].get<std::string>().c_str(),
                     row["mu_ini_hartree"].get<double>(),
                     row["gap_mean_hartree"].get<double>(),
                     row["gap_std_hartree"].get<double>(), casci);
    }
    if (any_failed || !all_converged) return kExitNotConverged;
    return kExitOk;
}

int cmd_oracle(const CommonArgs& args, const std::string& bpde_result_path) {
    const SpinOrbitalIntegrals ints = load_and_freeze(args.ints_path, args.freeze);
    if (ints.n_orb > 14) throw TooLargeError("exact diagonalization capped at 14 orbitals");
    const Determinant d0 = Determinant::from_string(args.d0);
    const Determinant d1 = Determinant::from_string(args.d1);
    if (d0.n != ints.n_orb || d1.n != ints.n_orb)
        throw DimensionMismatchError("occupation strings do not match the orbital count");

    const OracleSummary s = oracle_summary(ints, d0, d1);
    json doc{{"casci_gap_hartree", s.gap},
             {"casci_gap_cm1", hartree_to_cm1(s.gap)},
             {"ref_gap_hartree", s.ref_gap},
             {"dominant_overlap0_sq", s.overlap0},
             {"dominant_overlap1_sq", s.overlap1},
             {"degenerate_assignment", s.degenerate}};
    if (!bpde_result_path.empty()) {
        std::ifstream in(bpde_result_path);
        if (!in) throw Error("cannot open result file: " + bpde_result_path);
        std::stringstream buf;
        buf << in.rdbuf();
        const BpdeResult res = result_from_json(buf.str());
        const double ratio = s.gap != 0.0 ? res.gap / s.gap : std::nan("");
        doc["bpde_gap_hartree"] = res.gap;
        doc["bpde_over_casci"] = ratio;
        doc["ratio_band"] = json{{"low", 0.92}, {"high", 1.05}};
        doc["ratio_in_band"] = (ratio >= 0.92 && ratio <= 1.05);
    }
    emit(args.out_path, doc.dump(2));
    return kExitOk;
}

int cmd_synth(int n_orb, std::uint64_t seed, double dominance, const std::string& out) {
    const SpinOrbitalIntegrals ints = synth_random_hamiltonian(n_orb, seed, dominance);
    if (out.empty()) {
        std::cout << write_integral_text(ints);
    } else {
        atomic_write_file(out, write_integral_text(ints));
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-gap estimation on a classical state-vector engine"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string specs_path, bpde_result_path;

    auto add_common = [&](CLI::App* sub, bool need_refs) {
        sub->add_option("--ints", args.ints_path, "integral file (BPDE-INTS format)")
            ->required(need_refs);
        sub->add_option("--d0", args.d0, "reference occupation string, e.g. 1100");
        sub->add_option("--d1", args.d1, "excited occupation string");
        sub->add_option("--freeze", args.freeze, "comma-separated orbitals to freeze");
        sub->add_option("--out", args.out_path, "output path (default: stdout)");
    };
    auto add_cfg = [&](CLI::App* sub) {
        sub->add_option("--shots", args.cfg.shots, "shots per scan point");
        sub->add_option("--scan", args.cfg.n_scan, "scan points per iteration (odd)");
        sub->add_option("--mode", args.mode, "sampled|exact");
        sub->add_option("--seed", args.cfg.seed, "RNG seed");
        sub->add_option("--backend", args.backend, "gate|fused");
        sub->add_option("--workers", args.cfg.workers, "worker threads");
        sub->add_option("--trotter-rule", args.rule, "literal|inverted");
        sub->add_option("--max-iterations", args.cfg.max_iterations, "iteration cap");
    };

    CLI::App* run = app.add_subcommand("run", "single gap estimation");
    add_common(run, true);
    add_cfg(run);

    CLI::App* campaign = app.add_subcommand("campaign", "repeated runs, mean +/- std");
    add_common(campaign, false);
    add_cfg(campaign);
    int repeats = 5;
    campaign->add_option("--specs", specs_path, "JSON array of run specs");
    campaign->add_option("--repeats", repeats, "repeats per system (default 5)");

    CLI::App* orc = app.add_subcommand("oracle", "exact diagonalization reference");
    add_common(orc, true);
    orc->add_option("--bpde-result", bpde_result_path, "result file to compare against");

    CLI::App* bench = app.add_subcommand("bench", "backend/worker scaling benchmark");
    BenchConfig bench_cfg;
    std::vector<std::string> bench_backends{"gate", "fused"};
    bench->add_option("--sizes", bench_cfg.sizes, "active-space qubit counts");
    bench->add_option("--backends", bench_backends, "subset of {gate,fused}");
    bench->add_option("--workers", bench_cfg.worker_counts, "worker counts");
    bench->add_option("--reps", bench_cfg.repetitions, "timing repetitions (>= 3)");
    bench->add_option("--scan", bench_cfg.scan_points, "scan points per workload");
    bench->add_option("--slices", bench_cfg.m_slices, "slices per workload");
    bench->add_option("--terms", bench_cfg.max_terms, "term-list truncation");
    bench->add_option("--seed", bench_cfg.seed, "workload seed");
    std::string bench_out;
    bench->add_option("--out", bench_out, "JSON report path");

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic instance");
    int synth_norb = 4;
    std::uint64_t synth_seed = 7;
    double synth_dominance = 10.0;
    std::string synth_out;
    synth->add_option("--norb", synth_norb, "spin orbitals")->required();
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--dominance", synth_dominance,
                      "diagonal dominance (0 = exactly diagonal)");
    synth->add_option("--out", synth_out, "output path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(args);
        if (campaign->parsed()) {
            args.cfg = finalize_config(args);
            return cmd_campaign(specs_path, args, repeats);
        }
        if (orc->parsed()) return cmd_oracle(args, bpde_result_path);
        if (bench->parsed()) {
            bench_cfg.backends.clear();
            for (const std::string& b : bench_backends)
                bench_cfg.backends.push_back(backend_from_name(b));
            const BenchReport report = run_bench(bench_cfg);
            std::cout << bench_table(report);
            if (!bench_out.empty()) atomic_write_file(bench_out, bench_to_json(report));
            return kExitOk;
        }
        if (synth->parsed()) return cmd_synth(synth_norb, synth_seed, synth_dominance, synth_out);
    } catch (const MalformedLineError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitParse;
    } catch (const MissingHeaderError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitParse;
    } catch (const HermiticityViolationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitParse;
    } catch (const Error& e) {
        // "cannot open/write" errors carry the path; they are I/O failures.
        const std::string what = e.what();
        std::fprintf(stderr, "error: %s\n", what.c_str());
        return what.rfind("cannot ", 0) == 0 ? kExitIo : kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
