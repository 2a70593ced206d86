// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "bpdesim/bpde.hpp"

namespace bpdesim {

/// CODATA 2018 hartree-inverse-meter relation.
inline constexpr double kCm1PerHartree = 219474.6313632;

inline double hartree_to_cm1(double e) { return e * kCm1PerHartree; }
inline double cm1_to_hartree(double e) { return e / kCm1PerHartree; }

std::string backend_name(Backend b);
Backend backend_from_name(const std::string& s);
std::string mode_name(ProbMode m);
ProbMode mode_from_name(const std::string& s);
std::string rule_name(ScheduleRule r);
ScheduleRule rule_from_name(const std::string& s);

/// Full result document (config echo, both units, complete iteration
/// trace). result_from_json(result_to_json(r)) reproduces every field.
std::string result_to_json(const BpdeResult& r);
BpdeResult result_from_json(const std::string& text);

/// Write via temp file + rename so readers never observe partial output.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace bpdesim
