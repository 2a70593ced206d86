// Copyright 2026 The bpdesim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace bpdesim {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- integral file / tensor validation ---
struct MalformedLineError : Error {
    using Error::Error;
};
struct MissingHeaderError : Error {
    using Error::Error;
};
struct IndexOutOfRangeError : Error {
    using Error::Error;
};
struct HermiticityViolationError : Error {
    using Error::Error;
};
struct EmptyActiveSpaceError : Error {
    using Error::Error;
};

// --- qubit mapping ---
struct NonHermitianResultError : Error {
    using Error::Error;
};
struct LengthMismatchError : Error {
    using Error::Error;
};

// --- time evolution ---
struct NonPositiveTimeError : Error {
    using Error::Error;
};
struct BackendMismatchError : Error {
    using Error::Error;
};

// --- estimation loop ---
struct IdenticalReferencesError : Error {
    using Error::Error;
};
struct ParticleNumberMismatchError : Error {
    using Error::Error;
};
struct TooFewPointsError : Error {
    using Error::Error;
};
struct InvalidFitError : Error {
    using Error::Error;
};

// --- dense reference path ---
struct TooLargeError : Error {
    using Error::Error;
};
struct ConvergenceFailureError : Error {
    using Error::Error;
};
struct AmbiguousAssignmentError : Error {
    using Error::Error;
};
struct DimensionMismatchError : Error {
    using Error::Error;
};

// --- tooling ---
struct EmptyCampaignError : Error {
    using Error::Error;
};
struct OutOfMemoryError : Error {
    using Error::Error;
};

}  // namespace bpdesim
