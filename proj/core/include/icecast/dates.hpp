#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace icecast {

using Day = std::chrono::sys_days;
using Instant = std::chrono::sys_seconds;

// "YYYY-MM-DD"
Day parse_day(std::string_view text);
std::string format_day(Day day);

// "YYYY-MM-DDTHH:MM:SSZ" (UTC only).
Instant parse_timestamp(std::string_view text);
std::string format_timestamp(Instant instant);

inline Day day_of(Instant instant) { return std::chrono::floor<std::chrono::days>(instant); }
inline bool is_midnight(Instant instant) { return Instant(day_of(instant)) == instant; }

}  // namespace icecast
