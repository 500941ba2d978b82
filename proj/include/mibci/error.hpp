#pragma once

#include <stdexcept>
#include <string>

namespace mibci {

// Every failure raised by the library carries a stable machine-readable code
// so the CLI can emit it as JSON.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Malformed container or checkpoint bytes.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& message) : Error("format_error", message) {}
};

/// Dimension, rate or layer-chain incompatibility.
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& message) : Error("shape_error", message) {}
};

/// Precondition on an argument value violated.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& message) : Error("invalid_argument", message) {}
};

/// Numerical breakdown (non-finite loss, zero reference, ...).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& message) : Error("numeric_error", message) {}
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("io_error", message) {}
};

}  // namespace mibci
