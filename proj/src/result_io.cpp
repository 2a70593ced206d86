// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#include "bpdesim/result_io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "bpdesim/errors.hpp"

namespace bpdesim {

using nlohmann::json;

std::string backend_name(Backend b) { return b == Backend::GATE ? "gate" : "fused"; }

Backend backend_from_name(const std::string& s) {
    if (s == "gate") return Backend::GATE;
    if (s == "fused") return Backend::FUSED;
    throw Error("unknown backend '" + s + "' (expected gate|fused)");
}

std::string mode_name(ProbMode m) { return m == ProbMode::SAMPLED ? "sampled" : "exact"; }

ProbMode mode_from_name(const std::string& s) {
    if (s == "sampled") return ProbMode::SAMPLED;
    if (s == "exact") return ProbMode::EXACT_PROB;
    throw Error("unknown mode '" + s + "' (expected sampled|exact)");
}

std::string rule_name(ScheduleRule r) {
    return r == ScheduleRule::INVERTED ? "inverted" : "literal";
}

ScheduleRule rule_from_name(const std::string& s) {
    if (s == "inverted") return ScheduleRule::INVERTED;
    if (s == "literal") return ScheduleRule::LITERAL;
    throw Error("unknown trotter rule '" + s + "' (expected literal|inverted)");
}

namespace {

json gaussian_to_json(const Gaussian& g) { return json{{"mean", g.mean}, {"std", g.std}}; }

Gaussian gaussian_from_json(const json& j) {
    return Gaussian{j.at("mean").get<double>(), j.at("std").get<double>()};
}

json config_to_json(const BpdeConfig& c) {
    return json{{"n_scan", c.n_scan},
                {"shots", c.shots},
                {"time_coeff", c.time_coeff},
                {"sigma_floor", c.sigma_floor},
                {"sigma_mult", c.sigma_mult},
                {"thresh_coeff", c.thresh_coeff},
                {"trotter_rule", rule_name(c.trotter_rule)},
                {"h00", c.h00},
                {"max_iterations", c.max_iterations},
                {"mode", mode_name(c.mode)},
                {"seed", c.seed},
                {"backend", backend_name(c.backend)},
                {"prune_cutoff", c.prune_cutoff},
                {"workers", c.workers}};
}

BpdeConfig config_from_json(const json& j) {
    BpdeConfig c;
    c.n_scan = j.at("n_scan").get<int>();
    c.shots = j.at("shots").get<int>();
    c.time_coeff = j.at("time_coeff").get<double>();
    c.sigma_floor = j.at("sigma_floor").get<double>();
    c.sigma_mult = j.at("sigma_mult").get<double>();
    c.thresh_coeff = j.at("thresh_coeff").get<double>();
    c.trotter_rule = rule_from_name(j.at("trotter_rule").get<std::string>());
    c.h00 = j.at("h00").get<double>();
    c.max_iterations = j.at("max_iterations").get<int>();
    c.mode = mode_from_name(j.at("mode").get<std::string>());
    c.seed = j.at("seed").get<std::uint64_t>();
    c.backend = backend_from_name(j.at("backend").get<std::string>());
    c.prune_cutoff = j.at("prune_cutoff").get<double>();
    c.workers = j.at("workers").get<int>();
    return c;
}

json fit_to_json(const LikelihoodFit& f) {
    return json{{"amplitude", f.amplitude},     {"mean", f.mean},
                {"std", f.std},                 {"baseline", f.baseline},
                {"rms_residual", f.rms_residual}, {"converged", f.converged}};
}

LikelihoodFit fit_from_json(const json& j) {
    LikelihoodFit f;
    f.amplitude = j.at("amplitude").get<double>();
    f.mean = j.at("mean").get<double>();
    f.std = j.at("std").get<double>();
    f.baseline = j.at("baseline").get<double>();
    f.rms_residual = j.at("rms_residual").get<double>();
    f.converged = j.at("converged").get<bool>();
    return f;
}

}  // namespace

std::string result_to_json(const BpdeResult& r) {
    json iters = json::array();
    for (const IterationRecord& it : r.iterations) {
        json scan = json::array();
        for (const ScanPoint& p : it.scan)
            scan.push_back(
                json{{"delta_eps", p.delta_eps}, {"prob0", p.prob0}, {"shots", p.shots}});
        iters.push_back(json{{"prior", gaussian_to_json(it.prior)},
                             {"t", it.t},
                             {"m_slices", it.m_slices},
                             {"e_thre", it.e_thre},
                             {"scan", std::move(scan)},
                             {"fit", fit_to_json(it.fit)},
                             {"posterior", gaussian_to_json(it.posterior)}});
    }
    json doc{{"config", config_to_json(r.config)},
             {"mu_ini_hartree", r.mu_ini},
             {"gap_hartree", r.gap},
             {"gap_cm1", hartree_to_cm1(r.gap)},
             {"sigma_final", r.sigma_final},
             {"e_thre", r.e_thre},
             {"iterations", std::move(iters)},
             {"total_shots", r.total_shots},
             {"converged", r.converged}};
    return doc.dump(2);
}

BpdeResult result_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("result document is not valid JSON: ") + e.what());
    }
    try {
        BpdeResult r;
        r.config = config_from_json(doc.at("config"));
        r.mu_ini = doc.at("mu_ini_hartree").get<double>();
        r.gap = doc.at("gap_hartree").get<double>();
        r.sigma_final = doc.at("sigma_final").get<double>();
        r.e_thre = doc.at("e_thre").get<double>();
        r.total_shots = doc.at("total_shots").get<long long>();
        r.converged = doc.at("converged").get<bool>();
        for (const json& ji : doc.at("iterations")) {
            IterationRecord it;
            it.prior = gaussian_from_json(ji.at("prior"));
            it.t = ji.at("t").get<double>();
            it.m_slices = ji.at("m_slices").get<int>();
            it.e_thre = ji.at("e_thre").get<double>();
            for (const json& jp : ji.at("scan")) {
                ScanPoint p;
                p.delta_eps = jp.at("delta_eps").get<double>();
                p.prob0 = jp.at("prob0").get<double>();
                p.shots = jp.at("shots").get<int>();
                it.scan.push_back(p);
            }
            it.fit = fit_from_json(ji.at("fit"));
            it.posterior = gaussian_from_json(ji.at("posterior"));
            r.iterations.push_back(std::move(it));
        }
        return r;
    } catch (const json::exception& e) {
        throw Error(std::string("result document missing fields: ") + e.what());
    }
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open for writing: " + tmp);
        out << content;
        if (!out.flush()) throw Error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("cannot rename " + tmp + " to " + path);
    }
}

}  // namespace bpdesim
