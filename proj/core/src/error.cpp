#include "icecast/error.hpp"

namespace icecast {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid argument";
        case ErrorKind::NotFound: return "not found";
        case ErrorKind::Parse: return "parse error";
        case ErrorKind::Range: return "range error";
        case ErrorKind::Timestamp: return "timestamp error";
        case ErrorKind::IntegrityConflict: return "integrity conflict";
        case ErrorKind::Corruption: return "corruption";
        case ErrorKind::Io: return "i/o error";
        case ErrorKind::Lock: return "lock error";
        case ErrorKind::Fetch: return "fetch error";
        case ErrorKind::DegenerateModel: return "degenerate model";
        case ErrorKind::InsufficientData: return "insufficient data";
        case ErrorKind::Model: return "model error";
        case ErrorKind::MissingModel: return "missing model";
        case ErrorKind::Path: return "path error";
        case ErrorKind::Unreachable: return "unreachable";
    }
    return "error";
}

namespace {
std::string decorate(ErrorKind kind, const std::string& message,
                     std::optional<std::size_t> line) {
    std::string out(to_string(kind));
    if (line) out += " at line " + std::to_string(*line);
    out += ": ";
    out += message;
    return out;
}
}  // namespace

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(decorate(kind, message, line)), kind_(kind), message_(message), line_(line) {}

}  // namespace icecast
