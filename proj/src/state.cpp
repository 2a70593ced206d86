// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#include "bpdesim/state.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>

#include "bpdesim/errors.hpp"

namespace bpdesim {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
// Reduction chunk size is independent of the worker count so that partial
// sums (and therefore rounding) never depend on parallelism.
constexpr std::uint64_t kChunk = 4096;
}  // namespace

double StateVector::norm_sq() const { return Engine::serial().norm_sq(*this); }

StateVector basis_state(int n_qubits, const Determinant& d) {
    if (d.n != n_qubits)
        throw LengthMismatchError("determinant length " + std::to_string(d.n) +
                                  " != n_qubits " + std::to_string(n_qubits));
    if (n_qubits < 1 || n_qubits > 30) throw TooLargeError("n_qubits outside [1, 30]");
    StateVector s;
    s.n_qubits = n_qubits;
    s.amps.assign(1ULL << n_qubits, cplx(0.0, 0.0));
    s.amps[d.index()] = cplx(1.0, 0.0);
    return s;
}

Gate Gate::inverse() const {
    Gate g = *this;
    if (kind == GateKind::PHASE || kind == GateKind::PAULI_ROT) g.theta = -theta;
    return g;
}

void Circuit::append(const Circuit& other) {
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

// ---------------------------------------------------------------------------
// Worker pool: persistent threads woken per job, main thread runs part 0.

struct Engine::Pool {
    explicit Pool(int extra_threads) {
        for (int i = 0; i < extra_threads; ++i) {
            threads_.emplace_back([this, i] { worker_loop(i + 1); });
        }
    }

    ~Pool() {
        {
            std::lock_guard<std::mutex> lk(m_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    // Runs fn(part) for part in [0, parts); part 0 on the calling thread.
    void run(const std::function<void(int)>& fn, int parts) {
        {
            std::lock_guard<std::mutex> lk(m_);
            job_ = &fn;
            job_parts_ = parts;
            pending_.store(parts - 1, std::memory_order_release);
            ++generation_;
        }
        cv_.notify_all();
        fn(0);
        while (pending_.load(std::memory_order_acquire) != 0) std::this_thread::yield();
        std::lock_guard<std::mutex> lk(m_);
        job_ = nullptr;
    }

  private:
    void worker_loop(int index) {
        std::uint64_t seen = 0;
        for (;;) {
            const std::function<void(int)>* job = nullptr;
            int parts = 0;
            {
                std::unique_lock<std::mutex> lk(m_);
                cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
                job = job_;
                parts = job_parts_;
            }
            if (job && index < parts) {
                (*job)(index);
                pending_.fetch_sub(1, std::memory_order_acq_rel);
            }
        }
    }

    std::vector<std::thread> threads_;
    std::mutex m_;
    std::condition_variable cv_;
    const std::function<void(int)>* job_ = nullptr;
    int job_parts_ = 0;
    std::uint64_t generation_ = 0;
    std::atomic<int> pending_{0};
    bool stop_ = false;
};

Engine::Engine(int workers) : workers_(workers < 1 ? 1 : workers) {
    if (workers_ > 1) pool_ = std::make_unique<Pool>(workers_ - 1);
}

Engine::~Engine() = default;

const Engine& Engine::serial() {
    static Engine e(1);
    return e;
}

template <class F>
void Engine::parallel_pairs(std::uint64_t n, F&& body) const {
    if (workers_ == 1 || n < 2 * static_cast<std::uint64_t>(workers_)) {
        body(0, n);
        return;
    }
    const std::uint64_t per = (n + workers_ - 1) / workers_;
    std::function<void(int)> fn = [&](int w) {
        const std::uint64_t b = per * static_cast<std::uint64_t>(w);
        const std::uint64_t e = std::min(n, b + per);
        if (b < e) body(b, e);
    };
    pool_->run(fn, workers_);
}

// ---------------------------------------------------------------------------
// Kernels. Pair enumeration inserts a zero bit at the pivot position so that
// every worker owns whole (i0, i1) pairs.

namespace {

inline std::uint64_t insert_zero_bit(std::uint64_t k, int pos) {
    const std::uint64_t lo = k & ((1ULL << pos) - 1);
    return ((k >> pos) << (pos + 1)) | lo;
}

inline void check_qubit(int q, int n) {
    if (q < 0 || q >= n)
        throw IndexOutOfRangeError("qubit " + std::to_string(q) + " outside [0, " +
                                   std::to_string(n) + ")");
}

}  // namespace

void Engine::apply(StateVector& s, const Gate& g) const {
    const int n = s.n_qubits;
    cplx* a = s.amps.data();
    switch (g.kind) {
        case GateKind::HAD: {
            check_qubit(g.q0, n);
            const std::uint64_t mask = 1ULL << g.q0;
            parallel_pairs(s.dim() >> 1, [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t k = b; k < e; ++k) {
                    const std::uint64_t i0 = insert_zero_bit(k, g.q0);
                    const std::uint64_t i1 = i0 | mask;
                    const cplx a0 = a[i0], a1 = a[i1];
                    a[i0] = (a0 + a1) * kInvSqrt2;
                    a[i1] = (a0 - a1) * kInvSqrt2;
                }
            });
            break;
        }
        case GateKind::X: {
            check_qubit(g.q0, n);
            const std::uint64_t mask = 1ULL << g.q0;
            parallel_pairs(s.dim() >> 1, [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t k = b; k < e; ++k) {
                    const std::uint64_t i0 = insert_zero_bit(k, g.q0);
                    std::swap(a[i0], a[i0 | mask]);
                }
            });
            break;
        }
        case GateKind::CNOT:
        case GateKind::CTRL_X: {
            check_qubit(g.q0, n);
            check_qubit(g.q1, n);
            if (g.q0 == g.q1) throw IndexOutOfRangeError("control equals target");
            const std::uint64_t cmask = 1ULL << g.q0;
            const std::uint64_t tmask = 1ULL << g.q1;
            parallel_pairs(s.dim() >> 1, [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t k = b; k < e; ++k) {
                    const std::uint64_t i0 = insert_zero_bit(k, g.q1);
                    if (i0 & cmask) std::swap(a[i0], a[i0 | tmask]);
                }
            });
            break;
        }
        case GateKind::PHASE: {
            check_qubit(g.q0, n);
            const std::uint64_t mask = 1ULL << g.q0;
            const cplx ph = std::polar(1.0, g.theta);
            parallel_pairs(s.dim() >> 1, [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t k = b; k < e; ++k) {
                    const std::uint64_t i1 = insert_zero_bit(k, g.q0) | mask;
                    a[i1] *= ph;
                }
            });
            break;
        }
        case GateKind::PAULI_ROT: {
            const PauliString& p = g.pauli;
            if (p.max_qubit() >= n) throw IndexOutOfRangeError("Pauli string exceeds register");
            const double c = std::cos(0.5 * g.theta);
            const double sn = std::sin(0.5 * g.theta);
            if (p.is_identity()) {
                const cplx ph(c, -sn);  // exp(-i theta/2)
                parallel_pairs(s.dim(), [&](std::uint64_t b, std::uint64_t e) {
                    for (std::uint64_t i = b; i < e; ++i) a[i] *= ph;
                });
                break;
            }
            const std::uint64_t zmask = p.z_mask();
            if (p.is_diagonal()) {
                const cplx ph_even(c, -sn), ph_odd(c, sn);
                parallel_pairs(s.dim(), [&](std::uint64_t b, std::uint64_t e) {
                    for (std::uint64_t i = b; i < e; ++i)
                        a[i] *= (std::popcount(i & zmask) & 1) ? ph_odd : ph_even;
                });
                break;
            }
            const std::uint64_t xmask = p.x_mask();
            const int pivot = std::countr_zero(xmask);
            const int ny = std::popcount(p.y_mask());
            // i^ny
            static const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            const cplx ipow = kIPow[ny & 3];
            const cplx misin(0.0, -sn);  // -i sin(theta/2)
            parallel_pairs(s.dim() >> 1, [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t k = b; k < e; ++k) {
                    const std::uint64_t i0 = insert_zero_bit(k, pivot);
                    const std::uint64_t i1 = i0 ^ xmask;
                    const double sz = (std::popcount(i0 & zmask) & 1) ? -1.0 : 1.0;
                    const cplx lam0 = ipow * sz;          // P|i0> = lam0 |i1>
                    const cplx lam1 = std::conj(lam0);    // P|i1> = lam1 |i0>
                    const cplx a0 = a[i0], a1 = a[i1];
                    a[i0] = c * a0 + misin * (lam1 * a1);
                    a[i1] = c * a1 + misin * (lam0 * a0);
                }
            });
            break;
        }
    }
}

void Engine::apply(StateVector& s, const Circuit& c) const {
    if (c.n_qubits > s.n_qubits)
        throw IndexOutOfRangeError("circuit register larger than state register");
    for (const Gate& g : c.gates) apply(s, g);
}

namespace {

double chunk_prob0(const StateVector& s, std::uint64_t b, std::uint64_t e, std::uint64_t mask) {
    double acc = 0.0;
    for (std::uint64_t i = b; i < e; ++i) {
        if ((i & mask) == 0) acc += std::norm(s.amps[i]);
    }
    return acc;
}

double chunk_norm(const StateVector& s, std::uint64_t b, std::uint64_t e, std::uint64_t) {
    double acc = 0.0;
    for (std::uint64_t i = b; i < e; ++i) acc += std::norm(s.amps[i]);
    return acc;
}

}  // namespace

double Engine::reduce_chunks(std::uint64_t n,
                             double (*chunk_fn)(const StateVector&, std::uint64_t, std::uint64_t,
                                                std::uint64_t),
                             const StateVector& s, std::uint64_t arg) const {
    const std::uint64_t n_chunks = (n + kChunk - 1) / kChunk;
    if (workers_ == 1 || n_chunks < 2) {
        double acc = 0.0;
        for (std::uint64_t ch = 0; ch < n_chunks; ++ch)
            acc += chunk_fn(s, ch * kChunk, std::min(n, (ch + 1) * kChunk), arg);
        return acc;
    }
    std::vector<double> partial(n_chunks, 0.0);
    const std::uint64_t per = (n_chunks + workers_ - 1) / workers_;
    std::function<void(int)> fn = [&](int w) {
        const std::uint64_t cb = per * static_cast<std::uint64_t>(w);
        const std::uint64_t ce = std::min(n_chunks, cb + per);
        for (std::uint64_t ch = cb; ch < ce; ++ch)
            partial[ch] = chunk_fn(s, ch * kChunk, std::min(n, (ch + 1) * kChunk), arg);
    };
    pool_->run(fn, workers_);
    double acc = 0.0;
    for (double v : partial) acc += v;
    return acc;
}

double Engine::ancilla_prob0(const StateVector& s, int ancilla) const {
    check_qubit(ancilla, s.n_qubits);
    const double p = reduce_chunks(s.dim(), &chunk_prob0, s, 1ULL << ancilla);
    // rounding can push the sum a few ulp past the unit interval
    return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

double Engine::norm_sq(const StateVector& s) const {
    return reduce_chunks(s.dim(), &chunk_norm, s, 0);
}

}  // namespace bpdesim
