#pragma once

#include <stdexcept>
#include <string>

namespace rotdev {

/// Base of every error raised by the toolkit.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical precondition of an operation does not hold.
struct NumericalError : Error {
    using Error::Error;
};

struct ContractionViolated : NumericalError {
    using NumericalError::NumericalError;
};

struct NoConvergence : NumericalError {
    using NumericalError::NumericalError;
};

struct NotLineLike : NumericalError {
    using NumericalError::NumericalError;
};

struct SandwichViolated : NumericalError {
    using NumericalError::NumericalError;
};

struct SeedEmpty : NumericalError {
    using NumericalError::NumericalError;
};

struct LevelOutOfRange : NumericalError {
    using NumericalError::NumericalError;
};

/// Caller broke an argument contract (bad horizon, non-unit v, ...).
struct PreconditionError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct StageDependencyError : Error {
    using Error::Error;
};

struct UnknownArtifact : Error {
    using Error::Error;
};

} // namespace rotdev
