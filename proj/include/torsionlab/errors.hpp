#pragma once

#include <stdexcept>
#include <string>

namespace torsionlab {

// Input text could not be parsed (braid words, PD codes, CLI value lists).
struct ParseError : std::runtime_error {
    std::size_t position;
    explicit ParseError(const std::string& msg, std::size_t pos = 0)
        : std::runtime_error(msg), position(pos) {}
};

// An iterative numeric routine failed to meet its tolerance within its budget,
// or redundant numeric probes disagreed.
struct NonConvergence : std::runtime_error {
    double last_estimate;
    double previous_estimate;
    explicit NonConvergence(const std::string& msg, double last = 0.0, double prev = 0.0)
        : std::runtime_error(msg), last_estimate(last), previous_estimate(prev) {}
};

// A structural precondition that valid inputs always satisfy was violated
// (boundary maps failing to compose to zero, malformed presentations, ...).
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The requested invariant is not defined for this input (e.g. the unknot or a
// torus pair with vanishing first homology direction).
struct NotAdmissible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Polynomial reconstruction from point samples failed its verification probe;
// the caller must raise the sample count.
struct InterpolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The torsion function vanished identically on the requested grid, so the
// symmetry statement holds vacuously and no exponent can be fitted.
struct VacuousSymmetry : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace torsionlab
