#pragma once

#include <stdexcept>
#include <string>

namespace randlat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter is outside the mathematical domain of an operation
/// (lambda outside [1/2, alpha), tau outside (0,1), ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Smoothness alpha outside {1, 2, 3}.
class UnsupportedSmoothness : public DomainError {
public:
    using DomainError::DomainError;
};

/// Input violates a structural precondition: mismatched lengths,
/// malformed files, out-of-range residues.
class ValidationError : public Error {
public:
    using Error::Error;
};

class NotPrimeError : public DomainError {
public:
    using DomainError::DomainError;
};

class InvalidRootError : public DomainError {
public:
    using DomainError::DomainError;
};

class BudgetTooSmall : public DomainError {
public:
    using DomainError::DomainError;
};

/// Cached construction would exceed the configured memory budget.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Prime-by-prime construction step invoked out of order.
class SequencingError : public Error {
public:
    using Error::Error;
};

/// Rejection sampling for the random-vector algorithm hit its try cap.
class SamplingFailure : public Error {
public:
    using Error::Error;
};

}  // namespace randlat
