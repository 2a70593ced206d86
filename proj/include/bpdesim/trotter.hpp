// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "bpdesim/pauli.hpp"
#include "bpdesim/state.hpp"

namespace bpdesim {

/// Slice-length schedule for product-formula evolution. INVERTED (default)
/// targets tau = min(0.2, 1/|h00|): deeper one-body wells get finer slices.
/// LITERAL targets tau = max(0.2, |h00|).
enum class ScheduleRule { INVERTED, LITERAL };

/// FUSED applies each term exponential as one fused Pauli-rotation kernel;
/// GATE expands it into Hadamard/phase basis changes, a CNOT parity ladder
/// and a phase-correct Z rotation. Both realize identical unitaries
/// including global phase.
enum class Backend { GATE, FUSED };

/// Number of slices M = ceil(t / tau_target) for the configured rule.
int slice_count(double t, double h00, ScheduleRule rule);

/// Evolution schedule: M slices of length tau = t/M, terms visited in a
/// fixed canonical order (product-formula error depends on ordering).
struct TrotterPlan {
    double t = 0.0;
    int m_slices = 1;
    double tau = 0.0;
    std::vector<int> term_order;
};

TrotterPlan make_trotter_plan(const QubitHamiltonian& h, double t, int m_slices);
TrotterPlan make_trotter_plan(const QubitHamiltonian& h, double t, double h00,
                              ScheduleRule rule);

/// One symmetric second-order slice: factors exp(-i w_j P_j tau/2) in
/// term order followed by the same factors reversed. Identity terms become
/// explicit global-phase entries (an X-conjugated pair of PHASE gates on
/// qubit 0) so relative interference phases stay exact.
Circuit build_second_order_step(const QubitHamiltonian& h, double tau,
                                const std::vector<int>& term_order, Backend backend);
Circuit build_second_order_step(const QubitHamiltonian& h, double tau, Backend backend);

/// Apply all plan slices to `s` (system qubits = h.n_qubits lowest; the
/// register may be larger, e.g. carry an ancilla).
void apply_evolution(StateVector& s, const QubitHamiltonian& h, const TrotterPlan& plan,
                     Backend backend, const Engine& eng = Engine::serial());

/// Canonical term ordering used by plans: by support size, then lexical.
std::vector<int> canonical_term_order(const QubitHamiltonian& h);

}  // namespace bpdesim
