#pragma once

#include <stdexcept>
#include <string>

namespace fbm {

/// Base for every error raised by the library. Carries an optional stage
/// label so pipeline failures can say where they happened without losing
/// the concrete error type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message)
        : std::runtime_error(message), message_(message), formatted_(message) {}

    const char* what() const noexcept override { return formatted_.c_str(); }

    const std::string& stage() const noexcept { return stage_; }
    const std::string& message() const noexcept { return message_; }

    void set_stage(std::string stage) {
        stage_ = std::move(stage);
        formatted_ = stage_.empty() ? message_ : "[" + stage_ + "] " + message_;
    }

private:
    std::string message_;
    std::string stage_;
    std::string formatted_;
};

/// Invalid argument or violated precondition.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Matrix not positive definite even after the jitter escalation.
class FactorizationError : public Error {
public:
    using Error::Error;
};

class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Logistic orbit fell onto (or next to) a fixed point.
class DegenerateOrbitError : public Error {
public:
    using Error::Error;
};

class EstimationError : public Error {
public:
    using Error::Error;
};

class OutOfRangeError : public Error {
public:
    using Error::Error;
};

class NonPositiveDataError : public Error {
public:
    using Error::Error;
};

class WindowTooSmallError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line)
        : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
          line_(line) {}

    /// 1-based line number, 0 when the error is not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace fbm
