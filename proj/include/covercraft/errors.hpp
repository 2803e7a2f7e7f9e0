#pragma once

#include <stdexcept>
#include <string>

namespace covercraft {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the operation's domain (e.g. modulus 0, q | a).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A configured resource bound (factor bit budget, lcm bound, D bound) was hit.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// Incompatible congruences or duplicate covering primes.
class ConflictError : public Error {
public:
    using Error::Error;
};

/// Not enough mined pairs to give every class its quota.
class InsufficientPairs : public Error {
public:
    using Error::Error;
};

/// Internal invariant broken; indicates a bug or a tampered input.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

/// Input too large for a guarded brute-force path.
class GuardError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or malformed persisted file.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Verification of a persisted or freshly built object failed.
class VerificationError : public Error {
public:
    using Error::Error;
};

}  // namespace covercraft
