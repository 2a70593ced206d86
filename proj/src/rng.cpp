// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#include "bpdesim/rng.hpp"

#include <cmath>

namespace bpdesim {

double RngStream::box_muller(double u1, double u2) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

int sample_shots(double p0, int shots, RngStream& rng) {
    int count = 0;
    for (int i = 0; i < shots; ++i) {
        if (rng.next_double() < p0) ++count;
    }
    return count;
}

}  // namespace bpdesim
