#pragma once

#include <stdexcept>
#include <string>

namespace deltarep {

// Base class for everything this library throws on contract violations.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A tuple id that does not name a live tuple of the instance it was used with.
struct UnknownTupleError : Error {
    using Error::Error;
};

// Two instances (or an instance and a program) built over different schemas.
struct SchemaMismatchError : Error {
    using Error::Error;
};

// An exhaustive routine was asked to run past its size guard.
struct SizeGuardError : Error {
    using Error::Error;
};

// CNF with no satisfying assignment.
struct UnsatisfiableError : Error {
    using Error::Error;
};

// Time budget ran out before any feasible solution was found.
struct BudgetError : Error {
    using Error::Error;
};

// A step firing that is not enabled in the state it was applied to.
// `step` is the zero-based position of the offending firing.
struct InvalidFiringError : Error {
    InvalidFiringError(std::size_t step_index, const std::string& msg)
        : Error("step " + std::to_string(step_index) + ": " + msg), step(step_index) {}
    std::size_t step;
};

// Malformed content in an otherwise readable input (CSV quoting, schema
// syntax, bad label, ...).
struct FormatError : Error {
    using Error::Error;
};

// File or directory level problem (missing path, unreadable file, ...).
struct IoError : Error {
    using Error::Error;
};

}  // namespace deltarep
