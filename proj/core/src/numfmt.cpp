#include "icecast/numfmt.hpp"

#include <charconv>
#include <cstdio>

#include "icecast/error.hpp"

namespace icecast {

std::string format_exact(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string format_sig9(double value) {
    if (value == 0.0) value = 0.0;  // no "-0"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (text.empty() || res.ec != std::errc{} || res.ptr != end)
        throw Error(ErrorKind::Parse, "not a number: '" + std::string(text) + "'");
    return value;
}

long long parse_integer(std::string_view text) {
    long long value = 0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (text.empty() || res.ec != std::errc{} || res.ptr != end)
        throw Error(ErrorKind::Parse, "not an integer: '" + std::string(text) + "'");
    return value;
}

}  // namespace icecast
