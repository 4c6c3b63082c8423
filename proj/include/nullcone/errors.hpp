#pragma once
// Exception types shared by every module.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nullcone {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Evaluation outside a function's domain (log of a negative, a(t) <= 0, ...).
struct DomainError : Error {
    using Error::Error;
};

/// A defining function was evaluated outside its branch (e.g. y^n <= |y^{n+1}| for k=-1).
struct BranchError : DomainError {
    using DomainError::DomainError;
};

/// Two points whose ambient product y.y' is too close to zero.
struct SingularSeparation : DomainError {
    using DomainError::DomainError;
};

/// Jacobian of a chart lost rank.
struct ChartDegenerate : DomainError {
    using DomainError::DomainError;
};

/// Richardson levels disagree by more than the allowed threshold.
struct StepFailure : Error {
    using Error::Error;
};

/// Bad scale-factor source text. offset is a byte offset into the source.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t off)
        : Error(msg + " at offset " + std::to_string(off)), offset(off) {}
    std::size_t offset;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace nullcone
