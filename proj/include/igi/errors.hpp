#pragma once

#include <stdexcept>
#include <string>

namespace igi {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed primitives: non-probability vectors, non-ascending shares, bad ranges.
class InvalidParameters : public Error {
public:
    using Error::Error;
};

// The promise-bound system has only the trivial root.
class NoNontrivialBound : public Error {
public:
    using Error::Error;
};

// Query outside the admissible promise/debt domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Iteration failed to converge or a bracket could not be established.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Requested initial target utility cannot be delivered.
class InfeasibleTarget : public Error {
public:
    using Error::Error;
};

// A maintained assumption is violated for the requested computation.
class AssumptionViolation : public Error {
public:
    using Error::Error;
};

}  // namespace igi
