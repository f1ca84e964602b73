#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace icecast {

enum class ErrorKind {
    InvalidArgument,
    NotFound,
    Parse,
    Range,
    Timestamp,
    IntegrityConflict,
    Corruption,
    Io,
    Lock,
    Fetch,
    DegenerateModel,
    InsufficientData,
    Model,
    MissingModel,
    Path,
    Unreachable,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library is an icecast::Error.  The kind drives
// the command-line exit code; the optional line number points into the text
// that was being parsed (1-based).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message,
          std::optional<std::size_t> line = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> line() const noexcept { return line_; }
    // The message without the kind/line prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
    std::optional<std::size_t> line_;
};

}  // namespace icecast
