#pragma once

#include <stdexcept>
#include <string>

namespace odeim {

// Base class for all library failures so callers can map them to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid arguments, malformed files, bad configuration.
struct ArgumentError : Error {
    using Error::Error;
};

// Rank-deficient or singular systems (bad point sets, degenerate bases).
struct SingularError : Error {
    using Error::Error;
};

// Violated hypotheses of the probabilistic bounds.
struct HypothesisError : Error {
    using Error::Error;
};

// An iteration (Newton, SVD, ...) failed to reach its tolerance.
struct NonconvergenceError : Error {
    NonconvergenceError(const std::string& what, double residual_, int iterations_)
        : Error(what), residual(residual_), iterations(iterations_) {}
    double residual;
    int iterations;
};

}  // namespace odeim
