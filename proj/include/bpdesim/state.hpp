// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "bpdesim/pauli.hpp"

namespace bpdesim {

/// Dense amplitude vector over 2^n_qubits computational basis states.
/// Bit q of a basis index is the value of qubit q.
struct StateVector {
    int n_qubits = 0;
    std::vector<cplx> amps;

    std::uint64_t dim() const { return amps.size(); }
    double norm_sq() const;
};

/// All-zero register except for the basis state encoding `d`.
StateVector basis_state(int n_qubits, const Determinant& d);

enum class GateKind { HAD, X, CNOT, PHASE, PAULI_ROT, CTRL_X };

/// One circuit element. q0 is the sole qubit for single-qubit kinds and the
/// control for CNOT/CTRL_X; q1 is the CNOT/CTRL_X target. PHASE(q, theta)
/// multiplies |1>_q amplitudes by e^{i theta}; PAULI_ROT(P, theta) applies
/// exp(-i theta/2 P) (identity P = pure global phase).
struct Gate {
    GateKind kind = GateKind::X;
    int q0 = -1;
    int q1 = -1;
    double theta = 0.0;
    PauliString pauli;

    static Gate had(int q) { return {GateKind::HAD, q, -1, 0.0, {}}; }
    static Gate x(int q) { return {GateKind::X, q, -1, 0.0, {}}; }
    static Gate cnot(int control, int target) {
        return {GateKind::CNOT, control, target, 0.0, {}};
    }
    static Gate ctrl_x(int control, int target) {
        return {GateKind::CTRL_X, control, target, 0.0, {}};
    }
    static Gate phase(int q, double theta) { return {GateKind::PHASE, q, -1, theta, {}}; }
    static Gate pauli_rot(PauliString p, double theta) {
        return {GateKind::PAULI_ROT, -1, -1, theta, std::move(p)};
    }

    /// Adjoint gate: parameter negation; HAD/X/CNOT/CTRL_X are self-inverse.
    Gate inverse() const;
};

struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> gates;

    void append(Gate g) { gates.push_back(std::move(g)); }
    void append(const Circuit& other);
};

/// Gate executor with a fixed worker count. Amplitude updates are
/// partitioned over workers pair-wise (no element is shared between
/// partitions) and reductions use fixed-size chunks summed in index order,
/// so results are bitwise identical for any worker count.
class Engine {
  public:
    explicit Engine(int workers = 1);
    ~Engine();
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    int workers() const { return workers_; }

    void apply(StateVector& s, const Gate& g) const;
    void apply(StateVector& s, const Circuit& c) const;

    /// Probability of reading |0> on one qubit; exact sum, no sampling.
    double ancilla_prob0(const StateVector& s, int ancilla) const;
    double norm_sq(const StateVector& s) const;

    /// Process-wide single-worker instance for plain sequential calls.
    static const Engine& serial();

  private:
    struct Pool;
    template <class F>
    void parallel_pairs(std::uint64_t n_pairs, F&& body) const;
    double reduce_chunks(std::uint64_t n, double (*chunk_fn)(const StateVector&, std::uint64_t,
                                                             std::uint64_t, std::uint64_t),
                         const StateVector& s, std::uint64_t arg) const;

    int workers_;
    std::unique_ptr<Pool> pool_;
};

inline void apply_gate(StateVector& s, const Gate& g) { Engine::serial().apply(s, g); }
inline void apply_circuit(StateVector& s, const Circuit& c) { Engine::serial().apply(s, c); }
inline double ancilla_prob0(const StateVector& s, int ancilla) {
    return Engine::serial().ancilla_prob0(s, ancilla);
}

}  // namespace bpdesim
