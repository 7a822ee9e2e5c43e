#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tas {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (bad index, empty input, ...).
class InputDomainError : public Error {
public:
    using Error::Error;
};

/// A model, dataset and system configuration do not describe the same operating point,
/// or a model is used before it has been trained.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// Malformed file or document. `line()` is 1-based, 0 when the location is a byte offset
/// folded into the message instead.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class UnsupportedVersionError : public ParseError {
public:
    using ParseError::ParseError;
};

}  // namespace tas
