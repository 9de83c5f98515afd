#pragma once

#include <stdexcept>
#include <string>

namespace mog3p {

// Base of all library errors. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad configuration or usage (exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed or unsuitable input data (exit code 3).
class DataError : public Error {
public:
    using Error::Error;
};

// Shapes that do not line up (feature counts, column counts).
class DimensionError : public DataError {
public:
    using DataError::DataError;
};

// Broken internal invariant (exit code 4).
class InvariantError : public Error {
public:
    using Error::Error;
};

}  // namespace mog3p
