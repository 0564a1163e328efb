#pragma once

#include <stdexcept>
#include <string>

namespace csvortex {

// Base class for all solver-level failures. Each concrete error corresponds
// to one documented failure mode of an operation.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

struct VortexOnSharedNode : SolverError { using SolverError::SolverError; };
struct MonotonicityViolation : SolverError { using SolverError::SolverError; };
struct UpperSeedFailure : SolverError { using SolverError::SolverError; };
struct EpsTooLarge : SolverError { using SolverError::SolverError; };
struct BracketFailure : SolverError { using SolverError::SolverError; };
struct StepFailure : SolverError { using SolverError::SolverError; };
struct TailNotConverged : SolverError { using SolverError::SolverError; };
struct OutOfRange : SolverError { using SolverError::SolverError; };
struct NoBracket : SolverError { using SolverError::SolverError; };
struct WindowTooShort : SolverError { using SolverError::SolverError; };
struct InequalityViolation : SolverError { using SolverError::SolverError; };

// Configuration errors carry the offending field path.
struct SchemaError : std::runtime_error {
    std::string path;
    SchemaError(const std::string& p, const std::string& msg)
        : std::runtime_error(p + ": " + msg), path(p) {}
};

struct ConstraintError : std::runtime_error {
    std::string path;
    ConstraintError(const std::string& p, const std::string& msg)
        : std::runtime_error(p + ": " + msg), path(p) {}
};

} // namespace csvortex
