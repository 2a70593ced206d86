// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#include "bpdesim/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bpdesim/errors.hpp"

namespace bpdesim {

namespace {

constexpr double kTauFloor = 0.2;
constexpr double kHalfPi = 1.5707963267948966192313216916398;

void emit_global_phase(Circuit& c, double phase) {
    // e^{i phase} on every amplitude: PHASE hits the |1> branch, the X
    // conjugation hits the |0> branch of the designated qubit.
    c.append(Gate::phase(0, phase));
    c.append(Gate::x(0));
    c.append(Gate::phase(0, phase));
    c.append(Gate::x(0));
}

// diag(e^{-i theta/2}, e^{+i theta/2}) from PHASE/X only.
void emit_rz(Circuit& c, int q, double theta) {
    c.append(Gate::phase(q, 0.5 * theta));
    c.append(Gate::x(q));
    c.append(Gate::phase(q, -0.5 * theta));
    c.append(Gate::x(q));
}

// exp(-i theta/2 P) as basis changes + CNOT parity ladder + Rz.
void emit_gate_expansion(Circuit& c, const PauliString& p, double theta) {
    if (p.is_identity()) {
        emit_global_phase(c, -0.5 * theta);
        return;
    }
    std::vector<int> qs;
    for (int q = 0; q <= p.max_qubit(); ++q)
        if (p.has(q)) qs.push_back(q);

    for (int q : qs) {
        switch (p.at(q)) {
            case PauliOp::X: c.append(Gate::had(q)); break;
            case PauliOp::Y:
                c.append(Gate::phase(q, -kHalfPi));
                c.append(Gate::had(q));
                break;
            case PauliOp::Z: break;
        }
    }
    for (std::size_t i = 0; i + 1 < qs.size(); ++i) c.append(Gate::cnot(qs[i], qs[i + 1]));
    emit_rz(c, qs.back(), theta);
    for (std::size_t i = qs.size() - 1; i-- > 0;) c.append(Gate::cnot(qs[i], qs[i + 1]));
    for (int q : qs) {
        switch (p.at(q)) {
            case PauliOp::X: c.append(Gate::had(q)); break;
            case PauliOp::Y:
                c.append(Gate::had(q));
                c.append(Gate::phase(q, kHalfPi));
                break;
            case PauliOp::Z: break;
        }
    }
}

void emit_factor(Circuit& c, const PauliString& p, double theta, Backend backend) {
    if (backend == Backend::FUSED) {
        c.append(Gate::pauli_rot(p, theta));
    } else {
        emit_gate_expansion(c, p, theta);
    }
}

void check_plan(const QubitHamiltonian& h, const TrotterPlan& plan) {
    if (plan.term_order.size() != h.terms.size())
        throw BackendMismatchError("plan term count does not match Hamiltonian");
    std::vector<bool> seen(h.terms.size(), false);
    for (int idx : plan.term_order) {
        if (idx < 0 || idx >= static_cast<int>(h.terms.size()) || seen[idx])
            throw BackendMismatchError("plan term order is not a permutation");
        seen[idx] = true;
    }
    if (plan.m_slices < 1) throw BackendMismatchError("plan has no slices");
    const double scale = std::max(1.0, std::abs(plan.t));
    if (std::abs(plan.tau * plan.m_slices - plan.t) > 1e-12 * scale)
        throw BackendMismatchError("plan tau * m_slices != t");
}

}  // namespace

std::vector<int> canonical_term_order(const QubitHamiltonian& h) {
    std::vector<int> order(h.terms.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return h.terms[a].string < h.terms[b].string;
    });
    return order;
}

int slice_count(double t, double h00, ScheduleRule rule) {
    if (!(t > 0.0)) throw NonPositiveTimeError("evolution time must be > 0");
    const double mag = std::abs(h00);
    double tau_target;
    if (rule == ScheduleRule::INVERTED) {
        tau_target = (mag == 0.0) ? kTauFloor : std::min(kTauFloor, 1.0 / mag);
    } else {
        tau_target = std::max(kTauFloor, mag);
    }
    const double ratio = t / tau_target;
    int m = static_cast<int>(std::ceil(ratio - 1e-12));
    return m < 1 ? 1 : m;
}

TrotterPlan make_trotter_plan(const QubitHamiltonian& h, double t, int m_slices) {
    if (m_slices < 1) throw NonPositiveTimeError("slice count must be >= 1");
    TrotterPlan plan;
    plan.t = t;
    plan.m_slices = m_slices;
    plan.tau = t / m_slices;
    plan.term_order = canonical_term_order(h);
    return plan;
}

TrotterPlan make_trotter_plan(const QubitHamiltonian& h, double t, double h00,
                              ScheduleRule rule) {
    return make_trotter_plan(h, t, slice_count(t, h00, rule));
}

Circuit build_second_order_step(const QubitHamiltonian& h, double tau,
                                const std::vector<int>& term_order, Backend backend) {
    if (!std::isfinite(tau)) throw NonPositiveTimeError("tau must be finite");
    Circuit c;
    c.n_qubits = h.n_qubits;
    for (int idx : term_order)
        emit_factor(c, h.terms[idx].string, h.terms[idx].weight * tau, backend);
    for (auto it = term_order.rbegin(); it != term_order.rend(); ++it)
        emit_factor(c, h.terms[*it].string, h.terms[*it].weight * tau, backend);
    return c;
}

Circuit build_second_order_step(const QubitHamiltonian& h, double tau, Backend backend) {
    return build_second_order_step(h, tau, canonical_term_order(h), backend);
}

void apply_evolution(StateVector& s, const QubitHamiltonian& h, const TrotterPlan& plan,
                     Backend backend, const Engine& eng) {
    check_plan(h, plan);
    if (h.n_qubits > s.n_qubits)
        throw DimensionMismatchError("state register smaller than Hamiltonian");
    const Circuit step = build_second_order_step(h, plan.tau, plan.term_order, backend);
    for (int m = 0; m < plan.m_slices; ++m) eng.apply(s, step);
}

}  // namespace bpdesim
