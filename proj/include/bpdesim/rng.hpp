// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>

namespace bpdesim {

/// Splittable counter-based random stream built on the splitmix64 mixer.
///
/// Streams derived from the same seed but different paths are statistically
/// independent, and every draw is reproducible across platforms (no
/// dependence on libstdc++ distribution internals). Shot sampling for a
/// given (seed, iteration, scan point) therefore does not depend on the
/// order in which other points are evaluated.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : state_(mix(seed ^ kStreamSalt)) {}

    /// Child stream addressed by a path of indices, e.g. (iteration, point).
    static RngStream child(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
        std::uint64_t s = seed ^ kStreamSalt;
        for (std::uint64_t p : path) s = mix(s + kPathSalt * (p + 1));
        return RngStream(FromState{}, mix(s));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return finalize(state_);
    }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Standard normal deviate (Box-Muller; consumes two uniforms).
    double normal() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return box_muller(u1, u2);
    }

  private:
    struct FromState {};
    RngStream(FromState, std::uint64_t s) : state_(s) {}

    static constexpr std::uint64_t kStreamSalt = 0x6a09e667f3bcc908ULL;
    static constexpr std::uint64_t kPathSalt = 0xbb67ae8584caa73bULL;

    static std::uint64_t finalize(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t mix(std::uint64_t z) { return finalize(z + 0x9e3779b97f4a7c15ULL); }

    static double box_muller(double u1, double u2);

    std::uint64_t state_;
};

/// Count of 0-outcomes among `shots` Bernoulli draws with success
/// probability `p0`. Deterministic given the stream state.
int sample_shots(double p0, int shots, RngStream& rng);

}  // namespace bpdesim
