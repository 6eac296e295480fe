#pragma once

#include <stdexcept>
#include <string>

namespace deeplda {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand dimensions do not conform.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A precondition on a scalar argument was violated (e.g. lo >= hi).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Input data (files, labels, schema) is malformed or inconsistent.
class DataError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed (singular system, non-finite result).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Internal contract violated by the caller, e.g. a stale forward cache.
class ContractError : public Error {
public:
    using Error::Error;
};

}  // namespace deeplda
