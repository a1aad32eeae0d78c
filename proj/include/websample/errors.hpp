#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace websample {

/// Invalid argument to a generator or operation.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Inconsistent walk or experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data violates an operation's precondition (e.g. a zero weight).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A closed-form oracle was asked about a chain it does not describe.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace websample
