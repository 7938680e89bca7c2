#pragma once

#include <stdexcept>
#include <string>

namespace jumpsynth {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Inconsistent dimensions or invalid values in a system/belief/config definition.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Invalid runtime input (bad mode index, schedule too short, enumeration cap, ...).
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

/// A documented precondition does not hold (e.g. a mode is not Schur stable).
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// A numerical routine failed to converge.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(what) {}
};

/// Input lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

} // namespace jumpsynth
