#pragma once

#include <stdexcept>
#include <string>

namespace cofree {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Vector or matrix sizes disagree with the model they are used with.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A joint vector lies outside the arm's joint limits.
class JointLimitError : public Error {
public:
    using Error::Error;
};

/// Malformed, truncated or version-mismatched files.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Invalid or inconsistent configuration values.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Runtime failures: divergence, empty results, exhausted retries.
class RuntimeFailure : public Error {
public:
    using Error::Error;
};

}  // namespace cofree
