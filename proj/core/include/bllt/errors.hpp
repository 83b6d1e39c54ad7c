#pragma once

#include <stdexcept>
#include <string>

namespace bllt {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A numeric argument is outside its admissible range (bad tolerance, n < 0, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A value violates a mathematical domain constraint (omega outside (0, 1/2]).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An operation needs sites that the environment window does not cover.
class WindowError : public Error {
public:
    using Error::Error;
};

/// A file or string could not be parsed; the message carries line context.
class ParseError : public Error {
public:
    using Error::Error;
};

/// An operation was invoked with incompatible inputs (kind/variant mismatch).
class UsageError : public Error {
public:
    using Error::Error;
};

/// A statistic over a filtered sample ended up with nothing to aggregate.
class EmptySampleError : public Error {
public:
    using Error::Error;
};

/// Reading or writing a file failed at the OS level.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace bllt
