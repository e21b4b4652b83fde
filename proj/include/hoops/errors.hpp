#pragma once

#include <stdexcept>
#include <string>

namespace hoops {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file content (carries a line number when known).
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line = -1)
        : Error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// Structurally valid input that violates a dataset-level invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Input passes structural checks but is too degraded to use.
class DataQualityError : public Error {
public:
    using Error::Error;
};

// Caller passed an argument outside the documented domain.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

// Iterative solver failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double grad_norm)
        : Error(msg), grad_norm_(grad_norm) {}
    double grad_norm() const { return grad_norm_; }

private:
    double grad_norm_;
};

}  // namespace hoops
