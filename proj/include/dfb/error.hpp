#pragma once

#include <stdexcept>
#include <string>

namespace dfb {

/// Broad failure classes. The CLI maps each one to an exit status.
enum class ErrorKind {
    InvalidArgument,   // caller broke a precondition (bad sizes, bad config)
    FileNotFound,
    DecodeFailed,      // corrupt or truncated stream, unknown format
    UnsupportedFormat, // decodable but outside the supported color models
    Io,                // write failures, unreadable directories
    DataValidation,    // malformed CSV/manifest/model content, constraint violations
    DimensionMismatch,
    OperatorFailed,    // an external style-transfer engine returned an error
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace dfb
