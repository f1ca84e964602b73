#pragma once

#include <string>
#include <string_view>

namespace icecast {

// Shortest decimal text that parses back to exactly `value`.
std::string format_exact(double value);

// Fixed 9-significant-digit text used for every computed report value.
std::string format_sig9(double value);

// Strict full-string parse; throws Error(Parse) on any trailing garbage.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

}  // namespace icecast
